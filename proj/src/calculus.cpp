#include "loopdl/calculus.hpp"

#include <functional>
#include <set>

#include "loopdl/error.hpp"
#include "loopdl/printer.hpp"

namespace loopdl::calculus {

using namespace lang;
using logic::f_and;
using logic::f_atom;
using logic::f_box;
using logic::f_implies;
using logic::f_upd;
using logic::t_bool;
using logic::t_raw;
using logic::t_var;
using logic::term_of;

std::string print(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.ante.size(); ++i) {
    if (i) out += ", ";
    out += logic::print(s.ante[i]);
  }
  out += s.ante.empty() ? "==> " : " ==> ";
  for (std::size_t i = 0; i < s.succ.size(); ++i) {
    if (i) out += ", ";
    out += logic::print(s.succ[i]);
  }
  return out;
}

std::optional<Focus> find_focus(const Sequent& s) {
  for (std::size_t i = 0; i < s.succ.size(); ++i) {
    const auto& f = s.succ[i];
    if (f->k == logic::Formula::K::Upd && f->a->k == logic::Formula::K::Box) {
      return Focus{i, f->update, f->a->program, f->a->a};
    }
    if (f->k == logic::Formula::K::Box) return Focus{i, {}, f->program, f->a};
  }
  return std::nullopt;
}

Sequent with_focus(const Sequent& s, const Focus& f, Update u, StmtList program) {
  Sequent out = s;
  out.succ[f.index] = f_upd(std::move(u), f_box(std::move(program), f.post));
  return out;
}

bool is_division_throw(const Stmt& s) {
  const auto* t = std::get_if<Throw>(&s.node);
  if (!t) return false;
  const auto* b = std::get_if<Binary>(&t->value->node);
  if (!b || b->op != BinaryOp::Div) return false;
  const auto* l = std::get_if<IntLit>(&b->lhs->node);
  const auto* r = std::get_if<IntLit>(&b->rhs->node);
  return l && r && l->value.is_zero() && r->value.is_zero();
}

namespace {

StmtPtr division_throw() {
  return throw_stmt(binary(BinaryOp::Div, int_lit(0), int_lit(0)));
}

Focus require_focus(const Sequent& s) {
  auto f = find_focus(s);
  if (!f) throw Error("sequent has no focus modality");
  return *f;
}

struct Ctx {
  explicit Ctx(const Sequent& seq) : s(seq), f(require_focus(seq)), d(decompose(f.program)) {
    if (!d.frames.empty()) inner = &d.frames.back();
  }
  Ctx(const Ctx&) = delete;
  Ctx& operator=(const Ctx&) = delete;

  const Sequent& s;
  Focus f;
  Decomposition d;
  const PrefixFrame* inner = nullptr;  // innermost frame
};

template <class T>
const T* active_as(const Ctx& c) {
  return c.d.active ? std::get_if<T>(&c.d.active->node) : nullptr;
}

// The expression the active statement evaluates first, if any.
const Expr* evaluated(const Ctx& c) {
  if (!c.d.active) return nullptr;
  if (auto* a = active_as<Assign>(c)) return a->value.get();
  if (auto* d = active_as<LocalDecl>(c)) return d->init.get();
  if (auto* i = active_as<If>(c)) return i->cond.get();
  if (auto* r = active_as<Return>(c)) return r->value.get();
  if (auto* t = active_as<Throw>(c)) return is_division_throw(*c.d.active) ? nullptr : t->value.get();
  return nullptr;
}

logic::TermPtr defined_under_update(const Ctx& c) {
  return logic::apply(c.f.update, logic::definedness(*evaluated(c)));
}

bool needs_division_check(const Ctx& c) {
  const Expr* e = evaluated(c);
  if (!e || !logic::has_division(*e)) return false;
  auto def = defined_under_update(c);
  if (logic::is_true(def)) return false;
  auto atom = f_atom(def);
  for (const auto& a : c.s.ante) {
    if (logic::equal(a, atom)) return false;
  }
  return true;
}

// π repl ω: the active statement replaced by `repl`.
StmtList replace_active(const Decomposition& d, const StmtList& repl) {
  Decomposition out = d;
  out.active = nullptr;
  out.rest = repl;
  out.rest.insert(out.rest.end(), d.rest.begin(), d.rest.end());
  return reassemble(out);
}

// Drops the innermost frame; `head` goes in front of the statements that
// followed the frame.
StmtList pop_frame(const Decomposition& d, const StmtList& head) {
  Decomposition out = d;
  PrefixFrame f = out.frames.back();
  out.frames.pop_back();
  out.active = nullptr;
  out.rest = head;
  out.rest.insert(out.rest.end(), f.after.begin(), f.after.end());
  return reassemble(out);
}

RuleApp single(std::string rule, Sequent s) {
  RuleApp r;
  r.rule = std::move(rule);
  r.premisses.push_back({std::move(s), false});
  return r;
}

RuleApp program_step(const Ctx& c, std::string rule, StmtList program) {
  return single(std::move(rule), with_focus(c.s, c.f, c.f.update, std::move(program)));
}

std::set<std::string> sequent_names(const Sequent& s) {
  std::set<std::string> names;
  for (const auto& f : s.ante) logic::free_vars(f, names);
  for (const auto& f : s.succ) logic::free_vars(f, names);
  if (s.types) {
    for (const auto& [n, t] : *s.types) names.insert(n);
  }
  return names;
}

Type type_of_expr(const Expr& e, const TypeMap& types) {
  return std::visit(
      [&](const auto& n) -> Type {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return Type::Int;
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return Type::Bool;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          auto it = types.find(n.name);
          if (it == types.end()) throw Error("no type for variable '" + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return n.op == UnaryOp::Neg ? Type::Int : Type::Bool;
        } else {
          switch (n.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub:
            case BinaryOp::Mul:
            case BinaryOp::Div:
            case BinaryOp::Mod: return Type::Int;
            default: return Type::Bool;
          }
        }
      },
      e.node);
}

std::shared_ptr<const TypeMap> with_type(const Sequent& s, const std::string& name, Type t) {
  auto m = std::make_shared<TypeMap>(s.types ? *s.types : TypeMap{});
  (*m)[name] = t;
  return m;
}

bool is_literal(const Expr& e) {
  return std::holds_alternative<IntLit>(e.node) || std::holds_alternative<BoolLit>(e.node);
}

// `r return e;` or `T v = e; r return v;` for a try frame with a finally
// block, so that the value is taken before the finally block runs.
RuleApp through_finally(const Ctx& c, const std::string& rule, const StmtList& finalizer) {
  const Stmt& st = *c.d.active;
  ExprPtr value;
  const bool ret = std::holds_alternative<Return>(st.node);
  if (ret) value = std::get<Return>(st.node).value;
  if (auto* t = std::get_if<Throw>(&st.node); t && !is_division_throw(st)) value = t->value;
  RuleApp app;
  app.rule = rule;
  Sequent base = c.s;
  StmtList head;
  StmtPtr exit = c.d.active;
  if (value && !is_literal(*value) && !finalizer.empty()) {
    const std::string v = fresh_name(sequent_names(c.s), ret ? "rv" : "ex");
    const Type ty = type_of_expr(*value, *c.s.types);
    head.push_back(decl(ty, v, value));
    exit = ret ? return_stmt(var(v)) : throw_stmt(var(v));
    base.types = with_type(c.s, v, ty);
    app.inst.emplace_back("value", v);
  }
  head.insert(head.end(), finalizer.begin(), finalizer.end());
  head.push_back(exit);
  app.premisses.push_back({with_focus(base, c.f, c.f.update, pop_frame(c.d, head)), false});
  return app;
}

// ---------------------------------------------------------------------------
// The step rules. Every rule has its own side condition; symbolic_step
// insists that exactly one holds.

struct StepRule {
  const char* name;
  std::function<bool(const Ctx&)> matches;
  std::function<RuleApp(const Ctx&)> apply;
};

bool frame_is(const Ctx& c, PrefixFrame::Kind k) { return c.inner && c.inner->kind == k; }

bool ready(const Ctx& c) { return !needs_division_check(c); }

const Label& jump_label(const Ctx& c) {
  static const Label none;
  if (auto* b = active_as<Break>(c)) return b->label;
  if (auto* k = active_as<Continue>(c)) return k->label;
  return none;
}

bool labels_match(const Label& frame, const Label& jump) { return frame && jump && *frame == *jump; }

StmtList finalizer_of(const Ctx& c) {
  return c.inner->finalizer ? *c.inner->finalizer : StmtList{};
}

RuleApp end_of_program(const Ctx& c, const char* rule) {
  Sequent out = c.s;
  out.succ[c.f.index] = logic::apply(c.f.update, c.f.post);
  return single(rule, std::move(out));
}

RuleApp vacuous(const char* rule) {
  RuleApp r;
  r.rule = rule;
  return r;
}

const std::vector<StepRule>& step_rules() {
  static const std::vector<StepRule> rules = {
      {"emptyModality", [](const Ctx& c) { return c.d.empty(); },
       [](const Ctx& c) { return end_of_program(c, "emptyModality"); }},
      {"emptyBlock",
       [](const Ctx& c) { return !c.d.active && frame_is(c, PrefixFrame::Kind::Block); },
       [](const Ctx& c) { return program_step(c, "emptyBlock", pop_frame(c.d, {})); }},
      {"emptyTry", [](const Ctx& c) { return !c.d.active && frame_is(c, PrefixFrame::Kind::Try); },
       [](const Ctx& c) {
         return program_step(c, "emptyTry", pop_frame(c.d, finalizer_of(c)));
       }},
      {"emptyAttempt",
       [](const Ctx& c) { return !c.d.active && frame_is(c, PrefixFrame::Kind::Attempt); },
       [](const Ctx& c) {
         return program_step(c, "emptyAttempt", pop_frame(c.d, c.inner->continuation));
       }},
      {"divisionCheck", [](const Ctx& c) { return needs_division_check(c); },
       [](const Ctx& c) {
         auto def = defined_under_update(c);
         RuleApp r;
         r.rule = "divisionCheck";
         r.inst.emplace_back("defined", logic::print(def));
         Sequent ok = c.s;
         ok.ante.push_back(f_atom(def));
         Sequent bad = with_focus(c.s, c.f, c.f.update, replace_active(c.d, {division_throw()}));
         bad.ante.push_back(f_atom(logic::t_not(def)));
         r.premisses.push_back({std::move(ok), false});
         r.premisses.push_back({std::move(bad), false});
         return r;
       }},
      {"emptyStatement", [](const Ctx& c) { return active_as<Skip>(c) != nullptr; },
       [](const Ctx& c) { return program_step(c, "emptyStatement", replace_active(c.d, {})); }},
      {"assignment", [](const Ctx& c) { return active_as<Assign>(c) && ready(c); },
       [](const Ctx& c) {
         const auto& a = *active_as<Assign>(c);
         auto u = logic::compose(c.f.update, Update::elementary(a.target, term_of(*a.value)));
         RuleApp r = single("assignment", with_focus(c.s, c.f, u, replace_active(c.d, {})));
         r.inst.emplace_back("update", Update::elementary(a.target, term_of(*a.value)).str());
         return r;
       }},
      {"variableDeclaration", [](const Ctx& c) { return active_as<LocalDecl>(c) && ready(c); },
       [](const Ctx& c) {
         const auto& a = *active_as<LocalDecl>(c);
         auto u = logic::compose(c.f.update, Update::elementary(a.name, term_of(*a.init)));
         return single("variableDeclaration",
                       with_focus(c.s, c.f, u, replace_active(c.d, {})));
       }},
      {"ifSplit", [](const Ctx& c) { return active_as<If>(c) && ready(c); },
       [](const Ctx& c) {
         const auto& i = *active_as<If>(c);
         auto g = logic::apply(c.f.update, term_of(*i.cond));
         RuleApp r;
         r.rule = "ifSplit";
         r.inst.emplace_back("guard", logic::print(g));
         Sequent yes = with_focus(c.s, c.f, c.f.update, replace_active(c.d, {i.then_branch}));
         yes.ante.push_back(f_atom(g));
         StmtList other;
         if (i.else_branch) other.push_back(i.else_branch);
         Sequent no = with_focus(c.s, c.f, c.f.update, replace_active(c.d, other));
         no.ante.push_back(f_atom(logic::t_not(g)));
         r.premisses.push_back({std::move(yes), false});
         r.premisses.push_back({std::move(no), false});
         return r;
       }},
      {"halt", [](const Ctx& c) { return active_as<Halt>(c) != nullptr; },
       [](const Ctx& c) { return end_of_program(c, "halt"); }},

      // Abrupt completion with no enclosing frame ends the fragment; the box
      // only constrains normal and halting completion.
      {"topLevelReturn",
       [](const Ctx& c) { return !c.inner && active_as<Return>(c) && ready(c); },
       [](const Ctx&) { return vacuous("topLevelReturn"); }},
      {"topLevelThrow", [](const Ctx& c) { return !c.inner && active_as<Throw>(c) && ready(c); },
       [](const Ctx&) { return vacuous("topLevelThrow"); }},
      {"topLevelBreak", [](const Ctx& c) { return !c.inner && active_as<Break>(c); },
       [](const Ctx&) { return vacuous("topLevelBreak"); }},
      {"topLevelContinue", [](const Ctx& c) { return !c.inner && active_as<Continue>(c); },
       [](const Ctx&) { return vacuous("topLevelContinue"); }},

      // Blocks.
      {"blockBreak",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Block) && active_as<Break>(c) &&
                labels_match(c.inner->label, jump_label(c));
       },
       [](const Ctx& c) {
         RuleApp r = program_step(c, "blockBreak", pop_frame(c.d, {}));
         r.inst.emplace_back("label", *c.inner->label);
         return r;
       }},
      {"blockBreakNoMatch",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Block) && active_as<Break>(c) &&
                !labels_match(c.inner->label, jump_label(c));
       },
       [](const Ctx& c) {
         return program_step(c, "blockBreakNoMatch", pop_frame(c.d, {c.d.active}));
       }},
      {"blockContinue",
       [](const Ctx& c) { return frame_is(c, PrefixFrame::Kind::Block) && active_as<Continue>(c); },
       [](const Ctx& c) {
         return program_step(c, "blockContinue", pop_frame(c.d, {c.d.active}));
       }},
      {"blockReturn",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Block) && active_as<Return>(c) && ready(c);
       },
       [](const Ctx& c) { return program_step(c, "blockReturn", pop_frame(c.d, {c.d.active})); }},
      {"blockThrow",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Block) && active_as<Throw>(c) && ready(c);
       },
       [](const Ctx& c) { return program_step(c, "blockThrow", pop_frame(c.d, {c.d.active})); }},

      // Attempt-continuation.
      {"attemptContinueNoLabel",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Attempt) && active_as<Continue>(c) &&
                !jump_label(c);
       },
       [](const Ctx& c) {
         return program_step(c, "attemptContinueNoLabel", pop_frame(c.d, c.inner->continuation));
       }},
      {"attemptContinue",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Attempt) && active_as<Continue>(c) &&
                labels_match(c.inner->label, jump_label(c));
       },
       [](const Ctx& c) {
         return program_step(c, "attemptContinue", pop_frame(c.d, c.inner->continuation));
       }},
      {"attemptContinueNoMatch",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Attempt) && active_as<Continue>(c) &&
                jump_label(c) && !labels_match(c.inner->label, jump_label(c));
       },
       [](const Ctx& c) {
         return program_step(c, "attemptContinueNoMatch", pop_frame(c.d, {c.d.active}));
       }},
      {"attemptBreakNoLabel",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Attempt) && active_as<Break>(c) && !jump_label(c);
       },
       [](const Ctx& c) { return program_step(c, "attemptBreakNoLabel", pop_frame(c.d, {})); }},
      {"attemptBreak",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Attempt) && active_as<Break>(c) &&
                labels_match(c.inner->label, jump_label(c));
       },
       [](const Ctx& c) { return program_step(c, "attemptBreak", pop_frame(c.d, {})); }},
      {"attemptBreakNoMatch",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Attempt) && active_as<Break>(c) &&
                jump_label(c) && !labels_match(c.inner->label, jump_label(c));
       },
       [](const Ctx& c) {
         return program_step(c, "attemptBreakNoMatch", pop_frame(c.d, {c.d.active}));
       }},
      {"attemptThrow",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Attempt) && active_as<Throw>(c) && ready(c);
       },
       [](const Ctx& c) { return program_step(c, "attemptThrow", pop_frame(c.d, {c.d.active})); }},
      {"attemptEmptyReturn",
       [](const Ctx& c) {
         auto* r = active_as<Return>(c);
         return frame_is(c, PrefixFrame::Kind::Attempt) && r && !r->value;
       },
       [](const Ctx& c) {
         return program_step(c, "attemptEmptyReturn", pop_frame(c.d, {c.d.active}));
       }},
      {"attemptReturn",
       [](const Ctx& c) {
         auto* r = active_as<Return>(c);
         return frame_is(c, PrefixFrame::Kind::Attempt) && r && r->value && ready(c);
       },
       [](const Ctx& c) {
         return program_step(c, "attemptReturn", pop_frame(c.d, {c.d.active}));
       }},

      // try-catch-finally. The finally block runs first; a thrown value is
      // caught by a catch clause before that.
      {"tryCatch",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Try) && active_as<Throw>(c) && ready(c) &&
                c.inner->handler;
       },
       [](const Ctx& c) {
         const auto& h = *c.inner->handler;
         ExprPtr value = is_division_throw(*c.d.active) ? int_lit(0)
                                                        : active_as<Throw>(c)->value;
         StmtList body{assign(h.binder, value)};
         body.insert(body.end(), h.body.begin(), h.body.end());
         StmtPtr handler = c.inner->finalizer
                               ? make_stmt(Try{std::move(body), std::nullopt, c.inner->finalizer},
                                           c.inner->pos)
                               : block(std::move(body), std::nullopt, c.inner->pos);
         RuleApp r = program_step(c, "tryCatch", pop_frame(c.d, {handler}));
         r.inst.emplace_back("binder", h.binder);
         return r;
       }},
      {"tryThrow",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Try) && active_as<Throw>(c) && ready(c) &&
                !c.inner->handler;
       },
       [](const Ctx& c) { return through_finally(c, "tryThrow", finalizer_of(c)); }},
      {"tryBreakNoLabel",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Try) && active_as<Break>(c) && !jump_label(c);
       },
       [](const Ctx& c) { return through_finally(c, "tryBreakNoLabel", finalizer_of(c)); }},
      {"tryBreak",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Try) && active_as<Break>(c) && jump_label(c);
       },
       [](const Ctx& c) { return through_finally(c, "tryBreak", finalizer_of(c)); }},
      {"tryContinueNoLabel",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Try) && active_as<Continue>(c) && !jump_label(c);
       },
       [](const Ctx& c) { return through_finally(c, "tryContinueNoLabel", finalizer_of(c)); }},
      {"tryContinue",
       [](const Ctx& c) {
         return frame_is(c, PrefixFrame::Kind::Try) && active_as<Continue>(c) && jump_label(c);
       },
       [](const Ctx& c) { return through_finally(c, "tryContinue", finalizer_of(c)); }},
      {"tryEmptyReturn",
       [](const Ctx& c) {
         auto* r = active_as<Return>(c);
         return frame_is(c, PrefixFrame::Kind::Try) && r && !r->value;
       },
       [](const Ctx& c) { return through_finally(c, "tryEmptyReturn", finalizer_of(c)); }},
      {"tryReturn",
       [](const Ctx& c) {
         auto* r = active_as<Return>(c);
         return frame_is(c, PrefixFrame::Kind::Try) && r && r->value && ready(c);
       },
       [](const Ctx& c) { return through_finally(c, "tryReturn", finalizer_of(c)); }},
  };
  return rules;
}

const Stmt& require_loop(const Ctx& c) {
  if (!c.d.active || !is_loop(*c.d.active)) throw NotApplicable("active statement is not a loop");
  return *c.d.active;
}

std::string line_of(const Stmt& s) { return std::to_string(s.pos.line); }

}  // namespace

std::vector<std::string> matching_step_rules(const Sequent& s) {
  Ctx c(s);
  std::vector<std::string> out;
  if (c.d.active && is_loop(*c.d.active)) return out;
  for (const auto& r : step_rules()) {
    if (r.matches(c)) out.push_back(r.name);
  }
  return out;
}

RuleApp symbolic_step(const Sequent& s) {
  Ctx c(s);
  if (c.d.active && is_loop(*c.d.active)) {
    throw NotApplicable("active statement is a loop");
  }
  const StepRule* hit = nullptr;
  for (const auto& r : step_rules()) {
    if (!r.matches(c)) continue;
    if (hit) throw Error(std::string("rules ") + hit->name + " and " + r.name + " both match");
    hit = &r;
  }
  if (!hit) {
    const auto t = describe(c.d);
    throw Error("no rule matches active statement '" + t.active + "'");
  }
  return hit->apply(c);
}

const Stmt* focus_loop(const Sequent& s) {
  auto f = find_focus(s);
  if (!f) return nullptr;
  auto d = decompose(f->program);
  if (d.active && is_loop(*d.active)) return d.active.get();
  return nullptr;
}

RuleApp unwind_loop(const Sequent& s) {
  Ctx c(s);
  const Stmt& loop = require_loop(c);
  const char* name = std::holds_alternative<While>(loop.node)     ? "unwindWhileLoop"
                     : std::holds_alternative<DoWhile>(loop.node) ? "unwindDoLoop"
                                                                  : "unwindForLoop";
  RuleApp r = program_step(c, name, replace_active(c.d, {lang::unwind_loop(loop)}));
  r.inst.emplace_back("loop", line_of(loop));
  r.inst.emplace_back("iteration", std::to_string(loop.unrolled + 1));
  return r;
}

RuleApp pull_out_initializer(const Sequent& s) {
  Ctx c(s);
  const Stmt& loop = require_loop(c);
  RuleApp r = program_step(c, "pullOutLoopInitializer",
                           replace_active(c.d, {lang::pull_out_initializer(loop)}));
  r.inst.emplace_back("loop", line_of(loop));
  return r;
}

RuleApp transform_do_to_while(const Sequent& s) {
  Ctx c(s);
  const Stmt& loop = require_loop(c);
  if (!std::holds_alternative<DoWhile>(loop.node)) throw NotApplicable("not a do loop");
  const std::string fst = fresh_name(sequent_names(s), "fst");
  auto u = Update::parallel(c.f.update, Update::elementary(fst, t_bool(true)));
  Sequent base = s;
  base.types = with_type(s, fst, Type::Bool);
  RuleApp r = single("transformDoToWhile",
                     with_focus(base, c.f, u, replace_active(c.d, {do_to_while(loop, fst)})));
  r.inst.emplace_back("loop", line_of(loop));
  r.inst.emplace_back("fresh", fst);
  return r;
}

RuleApp apply_loop_invariant(const Sequent& s, const FormulaPtr& inv) {
  Ctx c(s);
  const Stmt& loop = require_loop(c);
  ExprPtr guard;
  StmtPtr body;
  StmtList cont;
  Label label;
  const char* name = nullptr;
  if (auto* w = std::get_if<While>(&loop.node)) {
    name = "loopInvariantWhile";
    guard = w->cond;
    body = w->body;
    label = w->label;
  } else if (auto* f = std::get_if<For>(&loop.node)) {
    if (!f->init.empty()) throw NotApplicable("for loop has an initializer");
    name = "loopInvariantFor";
    guard = guard_equivalent(f->guard);
    body = f->body;
    label = f->label;
    cont = statement_equivalents(f->update);
  } else {
    throw NotApplicable("invariant rules apply to while and for loops only");
  }

  auto names = sequent_names(s);
  logic::free_vars(inv, names);
  const std::string x = fresh_name(names, "x");
  cont.push_back(assign(x, bool_lit(false)));
  cont.push_back(halt());
  auto att = attempt(body_list(body), std::move(cont), label, loop.pos);
  StmtList step{assign(x, bool_lit(true)), if_stmt(guard, att, nullptr, loop.pos)};
  StmtList program{decl(Type::Bool, x, bool_lit(false))};
  for (auto& st : replace_active(c.d, step)) program.push_back(st);

  auto flag = t_var(x);
  auto post = f_and(f_implies(f_atom(t_raw(BinaryOp::Eq, flag, t_bool(false))), inv),
                    f_implies(f_atom(t_raw(BinaryOp::Eq, flag, t_bool(true))), c.f.post));

  RuleApp r;
  r.rule = name;
  r.inst.emplace_back("loop", line_of(loop));
  r.inst.emplace_back("invariant", logic::print(inv));
  r.inst.emplace_back("flag", x);

  Sequent initially = s;
  initially.succ[c.f.index] = logic::apply(c.f.update, inv);
  r.premisses.push_back({std::move(initially), false});

  Sequent preserved;
  preserved.ante = {inv};
  preserved.succ = {f_box(std::move(program), post)};
  preserved.types = with_type(s, x, Type::Bool);
  r.premisses.push_back({std::move(preserved), true});
  return r;
}

// ---------------------------------------------------------------------------

const std::vector<RuleInfo>& rule_catalog() {
  static const std::vector<RuleInfo> catalog = {
      {"emptyModality", 1, "==> {U}[]phi  /  ==> {U}phi", "core"},
      {"emptyStatement", 1, "==> {U}[pi ; omega]phi  /  ==> {U}[pi omega]phi", "core"},
      {"assignment", 1, "==> {U}[pi x = e; omega]phi  /  ==> {U}{x := e}[pi omega]phi", "core"},
      {"variableDeclaration", 1, "==> {U}[pi T x = e; omega]phi  /  ==> {U}{x := e}[pi omega]phi",
       "core"},
      {"ifSplit", 2,
       "==> {U}[pi if (g) p else q omega]phi  /  {U}g ==> {U}[pi p omega]phi ; "
       "!{U}g ==> {U}[pi q omega]phi",
       "core; guards are pure so no fresh boolean is introduced"},
      {"divisionCheck", 2,
       "==> {U}[pi st omega]phi  /  {U}def(e) ==> {U}[pi st omega]phi ; "
       "!{U}def(e) ==> {U}[pi throw 0 / 0; omega]phi   (e the expression st evaluates first)",
       "artifact: division by zero in programs"},
      {"emptyBlock", 1, "==> {U}[pi l?: { } omega]phi  /  ==> {U}[pi omega]phi", "core"},
      {"blockBreak", 1, "==> {U}[pi l: { break l; p } omega]phi  /  ==> {U}[pi omega]phi",
       "core"},
      {"blockBreakNoMatch", 1,
       "==> {U}[pi l?: { break l'?; p } omega]phi  /  ==> {U}[pi break l'?; omega]phi",
       "propagation, mirrors the interpreter"},
      {"blockContinue", 1,
       "==> {U}[pi l?: { continue l'?; p } omega]phi  /  ==> {U}[pi continue l'?; omega]phi",
       "propagation, mirrors the interpreter"},
      {"blockReturn", 1,
       "==> {U}[pi l?: { return e?; p } omega]phi  /  ==> {U}[pi return e?; omega]phi",
       "propagation, mirrors the interpreter"},
      {"blockThrow", 1, "==> {U}[pi l?: { throw e; p } omega]phi  /  ==> {U}[pi throw e; omega]phi",
       "propagation, mirrors the interpreter"},
      {"topLevelReturn", 0, "==> {U}[return e?; omega]phi  /  (closed)",
       "artifact: the box only constrains normal and halting completion"},
      {"topLevelBreak", 0, "==> {U}[break l?; omega]phi  /  (closed)",
       "artifact: the box only constrains normal and halting completion"},
      {"topLevelContinue", 0, "==> {U}[continue l?; omega]phi  /  (closed)",
       "artifact: the box only constrains normal and halting completion"},
      {"topLevelThrow", 0, "==> {U}[throw e; omega]phi  /  (closed)",
       "artifact: the box only constrains normal and halting completion"},
      {"emptyAttempt", 1,
       "==> {U}[pi attempt l? { } continuation { q } omega]phi  /  ==> {U}[pi q omega]phi",
       "attempt-continuation"},
      {"attemptContinueNoLabel", 1,
       "==> {U}[pi attempt l? { continue; p } continuation { q } omega]phi  /  "
       "==> {U}[pi q omega]phi",
       "attempt-continuation"},
      {"attemptContinue", 1,
       "==> {U}[pi attempt l { continue l; p } continuation { q } omega]phi  /  "
       "==> {U}[pi q omega]phi",
       "attempt-continuation"},
      {"attemptContinueNoMatch", 1,
       "l != l': ==> {U}[pi attempt l? { continue l'; p } continuation { q } omega]phi  /  "
       "==> {U}[pi continue l'; omega]phi",
       "attempt-continuation"},
      {"attemptBreakNoLabel", 1,
       "==> {U}[pi attempt l? { break; p } continuation { q } omega]phi  /  "
       "==> {U}[pi omega]phi",
       "attempt-continuation"},
      {"attemptBreak", 1,
       "==> {U}[pi attempt l { break l; p } continuation { q } omega]phi  /  "
       "==> {U}[pi omega]phi",
       "attempt-continuation"},
      {"attemptBreakNoMatch", 1,
       "l != l': ==> {U}[pi attempt l? { break l'; p } continuation { q } omega]phi  /  "
       "==> {U}[pi break l'; omega]phi",
       "attempt-continuation"},
      {"attemptThrow", 1,
       "==> {U}[pi attempt l? { throw se; p } continuation { q } omega]phi  /  "
       "==> {U}[pi throw se; omega]phi",
       "attempt-continuation"},
      {"attemptEmptyReturn", 1,
       "==> {U}[pi attempt l? { return; p } continuation { q } omega]phi  /  "
       "==> {U}[pi return; omega]phi",
       "attempt-continuation"},
      {"attemptReturn", 1,
       "==> {U}[pi attempt l? { return se; p } continuation { q } omega]phi  /  "
       "==> {U}[pi return se; omega]phi",
       "attempt-continuation"},
      {"emptyTry", 1, "==> {U}[pi try { } cs finally { r }? omega]phi  /  ==> {U}[pi r omega]phi",
       "propagation, mirrors the interpreter"},
      {"tryCatch", 1,
       "==> {U}[pi try { throw e; p } catch (t) { h } finally { r }? omega]phi  /  "
       "==> {U}[pi try { t = e; h } finally { r } omega]phi   (a plain block without finally; "
       "t = 0 for division by zero)",
       "propagation, mirrors the interpreter"},
      {"tryThrow", 1,
       "==> {U}[pi try { throw e; p } finally { r } omega]phi  /  "
       "==> {U}[pi int v = e; r throw v; omega]phi   (v fresh unless e is a literal)",
       "propagation, mirrors the interpreter"},
      {"tryBreakNoLabel", 1,
       "==> {U}[pi try { break; p } cs finally { r }? omega]phi  /  "
       "==> {U}[pi r break; omega]phi",
       "propagation, mirrors the interpreter"},
      {"tryBreak", 1,
       "==> {U}[pi try { break l; p } cs finally { r }? omega]phi  /  "
       "==> {U}[pi r break l; omega]phi",
       "propagation, mirrors the interpreter"},
      {"tryContinueNoLabel", 1,
       "==> {U}[pi try { continue; p } cs finally { r } omega]phi  /  "
       "==> {U}[pi r continue; omega]phi",
       "attempt-continuation (propagation through finally)"},
      {"tryContinue", 1,
       "==> {U}[pi try { continue l; p } cs finally { r }? omega]phi  /  "
       "==> {U}[pi r continue l; omega]phi",
       "propagation, mirrors the interpreter"},
      {"tryEmptyReturn", 1,
       "==> {U}[pi try { return; p } cs finally { r }? omega]phi  /  "
       "==> {U}[pi r return; omega]phi",
       "propagation, mirrors the interpreter"},
      {"tryReturn", 1,
       "==> {U}[pi try { return e; p } cs finally { r }? omega]phi  /  "
       "==> {U}[pi T v = e; r return v; omega]phi   (v fresh unless e is a literal)",
       "propagation, mirrors the interpreter"},
      {"halt", 1, "==> {U}[pi halt; omega]phi  /  ==> {U}phi", "halt statement"},
      {"unwindWhileLoop", 1,
       "==> {U}[pi l?: while (nse) p omega]phi  /  "
       "==> {U}[pi if (nse) attempt l? { p } continuation { l?: while (nse) p } omega]phi",
       "loop unwinding"},
      {"unwindDoLoop", 1,
       "==> {U}[pi l?: do p while (nse); omega]phi  /  "
       "==> {U}[pi attempt l? { p } continuation { l?: while (nse) p } omega]phi",
       "loop unwinding"},
      {"unwindForLoop", 1,
       "==> {U}[pi l?: for (; g; upd) p omega]phi  /  "
       "==> {U}[pi if (g') attempt l? { p } continuation { upd' l?: for (; g; upd) p } "
       "omega]phi",
       "loop unwinding"},
      {"pullOutLoopInitializer", 1,
       "==> {U}[pi l?: for (init; g; upd) p omega]phi  /  "
       "==> {U}[pi { init' l?: for (; g; upd) p } omega]phi",
       "for-loop invariant support"},
      {"transformDoToWhile", 1,
       "==> {U}[pi l?: do p while (nse); omega]phi  /  "
       "==> {U || fst := true}[pi l?: while (fst || nse) { fst = false; p } omega]phi   "
       "(fst fresh)",
       "do-loop invariant support"},
      {"loopInvariantWhile", 2,
       "==> {U}[pi l?: while (nse) p omega]phi  /  ==> {U}Inv ; "
       "Inv ==> [boolean x = false; pi x = true; if (nse) attempt l? { p } continuation "
       "{ x = false; halt; } omega]((x == false -> Inv) && (x == true -> phi))   (x fresh)",
       "loop invariant"},
      {"loopInvariantFor", 2,
       "==> {U}[pi l?: for (; g; upd) p omega]phi  /  ==> {U}Inv ; "
       "Inv ==> [boolean x = false; pi x = true; if (g') attempt l? { p } continuation "
       "{ upd' x = false; halt; } omega]((x == false -> Inv) && (x == true -> phi))   "
       "(x fresh)",
       "loop invariant"},
  };
  return catalog;
}

const RuleInfo* find_rule(const std::string& name) {
  for (const auto& r : rule_catalog()) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace loopdl::calculus
