#include "loopdl/harness.hpp"

#include <chrono>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "loopdl/error.hpp"
#include "loopdl/fragment.hpp"
#include "loopdl/gen.hpp"
#include "loopdl/parser.hpp"
#include "loopdl/printer.hpp"

namespace loopdl::harness {

using interp::CompletionSet;
using interp::Outcome;
using interp::State;
using interp::Tri;
using lang::StmtList;
using Json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kKeptMismatches = 10;

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

Tri tri_of(bool b) { return b ? Tri::True : Tri::False; }

// Formulas over typed modalities, evaluated at concrete states by running
// the interpreter. φ is the instance's post.
struct MF;
using MFPtr = std::shared_ptr<const MF>;
struct MF {
  enum class K { Post, True, Box, And, Guard } k;
  int prog = -1;
  CompletionSet types;
  MFPtr a, b;
  lang::ExprPtr guard;  // Guard: ⟦b = e;⟧_normal(b -> a), or (!b -> a) when negated
  bool positive = true;
};

MFPtr post() { return std::make_shared<const MF>(MF{MF::K::Post, -1, {}, nullptr, nullptr, nullptr}); }
MFPtr tru() { return std::make_shared<const MF>(MF{MF::K::True, -1, {}, nullptr, nullptr, nullptr}); }
MFPtr box(int prog, const CompletionSet& t, MFPtr inner) {
  return std::make_shared<const MF>(MF{MF::K::Box, prog, t, std::move(inner), nullptr, nullptr});
}
MFPtr conj(MFPtr a, MFPtr b) {
  return std::make_shared<const MF>(MF{MF::K::And, -1, {}, std::move(a), std::move(b), nullptr});
}
MFPtr when(const lang::ExprPtr& e, bool positive, MFPtr inner) {
  MF m{MF::K::Guard, -1, {}, std::move(inner), nullptr, e};
  m.positive = positive;
  return std::make_shared<const MF>(std::move(m));
}

using Named = std::vector<std::pair<std::string, CompletionSet>>;

// One generated instance of an equation: its programs, the completion
// types it ranges over and the two sides for a given type.
struct Instance {
  std::vector<StmtList> progs;
  Named types;
  std::function<std::pair<MFPtr, MFPtr>(const CompletionSet&)> sides;
};

class Oracle {
public:
  Oracle(const std::vector<StmtList>& progs, const std::vector<std::string>& observed,
         std::int64_t budget)
      : budget_(budget) {
    for (const auto& v : observed) vars_.add(v, lang::Type::Int);
    for (const auto& p : progs) {
      lang::Fragment f;
      f.body = p;
      vars_.add_all(f);
    }
    for (const auto& p : progs) progs_.push_back(interp::Program::compile(p, vars_));
    cache_.resize(progs_.size());
  }

  const interp::VarTable& vars() const { return vars_; }

  const Outcome& run(int prog, const State& s) {
    auto& c = cache_[static_cast<std::size_t>(prog)];
    auto it = c.find(s);
    if (it != c.end()) return it->second;
    return c.emplace(s, progs_[static_cast<std::size_t>(prog)].run(s, budget_)).first->second;
  }

  Tri eval(const MF& f, const State& s, const logic::CompiledFormula& phi) {
    switch (f.k) {
      case MF::K::Post: return tri_of(phi.eval(s));
      case MF::K::True: return Tri::True;
      case MF::K::And: {
        const Tri a = eval(*f.a, s, phi);
        if (a == Tri::False) return a;
        return tri_and(a, eval(*f.b, s, phi));
      }
      case MF::K::Guard: {
        auto r = interp::eval_expr(*f.guard, vars_, s);
        if (r.div_by_zero) return Tri::True;
        if (std::get<bool>(r.value) != f.positive) return Tri::True;
        return eval(*f.a, s, phi);
      }
      case MF::K::Box: {
        // Copy: the recursive call may grow the cache.
        const Outcome out = run(f.prog, s);
        if (out.budget_exhausted) return Tri::Unknown;
        if (!f.types.contains(out.reason)) return Tri::True;
        return eval(*f.a, out.state, phi);
      }
    }
    return Tri::Unknown;
  }

private:
  interp::VarTable vars_;
  std::vector<interp::Program> progs_;
  std::vector<std::unordered_map<State, Outcome, interp::StateHash>> cache_;
  std::int64_t budget_;
};

// All states over the first n slots with values in the domain; the
// remaining slots stay unset.
template <class F>
void for_each_state(std::size_t n, std::size_t width, const prover::Interval& d, const F& f) {
  State s(width);
  std::vector<std::int64_t> cur(n, d.lo);
  for (std::size_t i = 0; i < n; ++i) s[i] = Int(d.lo);
  while (true) {
    f(s);
    std::size_t i = 0;
    while (i < n && cur[i] == d.hi) {
      cur[i] = d.lo;
      s[i] = Int(d.lo);
      ++i;
    }
    if (i == n) return;
    ++cur[i];
    s[i] = Int(cur[i]);
  }
}

const char* tri_str(Tri t) { return interp::to_string(t); }

std::string print_progs(const std::vector<StmtList>& progs) {
  std::string out;
  for (std::size_t i = 0; i < progs.size(); ++i) {
    if (i) out += "  |  ";
    out += "p" + std::to_string(i) + ": " + lang::print_line(progs[i]);
  }
  return out;
}

void record(FamilyReport& r, Mismatch m) {
  ++r.mismatch_count;
  if (r.mismatches.size() < kKeptMismatches) r.mismatches.push_back(std::move(m));
}

void bump(FamilyReport& r, const std::string& key, std::size_t by = 1) {
  for (auto& [k, v] : r.counters) {
    if (k == key) {
      v += by;
      return;
    }
  }
  r.counters.emplace_back(key, by);
}

const std::vector<std::string> kObserved = {"x", "y", "k"};

void check_instance(FamilyReport& r, const Instance& inst, const std::vector<logic::FormulaPtr>& posts,
                    const SuiteOptions& opt) {
  Oracle o(inst.progs, kObserved, opt.budget);
  std::vector<logic::CompiledFormula> phis;
  for (const auto& p : posts) phis.push_back(logic::CompiledFormula::compile(p, o.vars()));
  std::vector<std::pair<MFPtr, MFPtr>> sides;
  for (const auto& [name, t] : inst.types) sides.push_back(inst.sides(t));
  ++r.programs;
  for_each_state(kObserved.size(), o.vars().size(), opt.domain, [&](const State& s) {
    for (std::size_t ti = 0; ti < sides.size(); ++ti) {
      for (std::size_t pi = 0; pi < phis.size(); ++pi) {
        ++r.checks;
        const Tri a = o.eval(*sides[ti].first, s, phis[pi]);
        const Tri b = o.eval(*sides[ti].second, s, phis[pi]);
        if (a == Tri::Unknown || b == Tri::Unknown) {
          ++r.unknown;
          continue;
        }
        if (a != b) {
          record(r, {print_progs(inst.progs), inst.types[ti].first, logic::print(posts[pi]),
                     interp::to_named(s, o.vars()), tri_str(a), tri_str(b)});
        }
      }
    }
  });
}

}  // namespace

std::vector<std::pair<std::string, CompletionSet>> completion_types(bool with_halt) {
  using interp::Completion;
  Named out = {
      {"normal", CompletionSet::normal_only()},
      {"break", CompletionSet::break_unlabeled()},
      {"continue", CompletionSet::continue_unlabeled()},
      {"break l", CompletionSet::break_label("l")},
      {"continue l", CompletionSet::continue_label("l")},
      {"break m", CompletionSet::break_label("m")},
      {"continue m", CompletionSet::continue_label("m")},
      {"return", CompletionSet::return_only()},
      {"thrown", CompletionSet::thrown_only()},
  };
  if (with_halt) out.emplace_back("halt", CompletionSet::halt_only());
  return out;
}

std::size_t SuiteReport::mismatches() const {
  std::size_t n = 0;
  for (const auto& f : families) n += f.mismatch_count;
  return n;
}

// ---------------------------------------------------------------------------
// Axiom families

namespace {

struct Family {
  std::string name;
  std::string statement;
  std::function<Instance(gen::Generator&)> make;
};

Named select(std::initializer_list<const char*> names) {
  Named out;
  for (const auto& [n, t] : completion_types(true)) {
    for (const char* want : names) {
      if (n == want) out.emplace_back(n, t);
    }
  }
  return out;
}

Named abrupt_types() {
  Named out;
  for (const auto& [n, t] : completion_types(false)) {
    if (n != "normal") out.emplace_back(n, t);
  }
  return out;
}

Named all_but(const std::string& name, bool with_halt = false) {
  Named out;
  for (const auto& [n, t] : completion_types(with_halt)) {
    if (n != name) out.emplace_back(n, t);
  }
  return out;
}

StmtList parse_list(const std::string& text) {
  lang::ParseOptions po;
  po.allow_free_labels = true;
  return lang::parse_fragment(text, po).body;
}

// Programs inside the equations may jump to l and m without binding them.
gen::GenOptions fig_options(bool halts) {
  gen::GenOptions o;
  o.depth = 2;
  o.halts = halts;
  o.free_labels = {"l", "m"};
  return o;
}

Family fixed(const std::string& name, const std::string& statement, const std::string& prog,
             Named types, bool rhs_is_post) {
  return {name, statement, [=](gen::Generator&) {
            Instance in;
            in.progs = {parse_list(prog)};
            in.types = types;
            in.sides = [rhs_is_post](const CompletionSet& t) {
              return std::make_pair(box(0, t, post()), rhs_is_post ? post() : tru());
            };
            return in;
          }};
}

// `l: while (e) st` with the generator's frames set up for the body.
struct LoopParts {
  lang::StmtPtr loop;
  lang::ExprPtr guard;
  lang::StmtPtr body;
  lang::Label label;
};

LoopParts while_loop(gen::Generator& g, bool labeled) {
  lang::Label l = labeled ? lang::Label("l") : std::nullopt;
  auto saved = g.frames;
  auto loop = g.loop(2, l, 0);
  g.frames = saved;
  const auto& w = std::get<lang::While>(loop->node);
  return {loop, w.cond, w.body, l};
}

struct AttemptParts {
  StmtList p, q;
  lang::Label label;
  lang::StmtPtr stmt;
};

AttemptParts attempt_parts(gen::Generator& g) {
  AttemptParts a;
  if (g.chance(70)) a.label = "l";
  g.frames.push_back({gen::Generator::Frame::Kind::Attempt, a.label});
  a.p = g.stmts(1);
  g.frames.pop_back();
  a.q = g.stmts(1, 0);
  a.stmt = lang::attempt(a.p, a.q, a.label);
  return a;
}

std::vector<Family> fig1_families() {
  const auto all = completion_types(false);
  std::vector<Family> f;
  f.push_back(fixed("skipNormal", "[;]_normal phi == phi", ";", select({"normal"}), true));
  f.push_back(fixed("breakBreak", "[break;]_break phi == phi", "break;", select({"break"}), true));
  f.push_back(fixed("continueContinue", "[continue;]_continue phi == phi", "continue;",
                    select({"continue"}), true));
  f.push_back(fixed("breakLabel", "[break l;]_break_l phi == phi", "break l;",
                    select({"break l"}), true));
  f.push_back(fixed("continueLabel", "[continue l;]_continue_l phi == phi", "continue l;",
                    select({"continue l"}), true));
  f.push_back(fixed("skipAbrupt", "[;]_Abr phi", ";", abrupt_types(), false));
  f.push_back(fixed("breakOther", "[break;]_(CT \\ {break}) phi", "break;", all_but("break"),
                    false));
  f.push_back(fixed("continueOther", "[continue;]_(CT \\ {continue}) phi", "continue;",
                    all_but("continue"), false));
  f.push_back(fixed("breakLabelOther", "[break l;]_(CT \\ {break_l}) phi", "break l;",
                    all_but("break l"), false));
  f.push_back(fixed("continueLabelOther", "[continue l;]_(CT \\ {continue_l}) phi", "continue l;",
                    all_but("continue l"), false));

  f.push_back({"seqNormal", "[st1 st2]_normal phi == [st1]_normal [st2]_normal phi",
               [](gen::Generator& g) {
                 Instance in;
                 auto a = g.stmts(2), b = g.stmts(2);
                 StmtList ab = a;
                 ab.insert(ab.end(), b.begin(), b.end());
                 in.progs = {ab, a, b};
                 in.types = select({"normal"});
                 in.sides = [](const CompletionSet& t) {
                   return std::make_pair(box(0, t, post()), box(1, t, box(2, t, post())));
                 };
                 return in;
               }});
  f.push_back({"seqAbrupt",
               "[st1 st2]_a phi == [st1]_a phi & [st1]_normal [st2]_a phi  (a in Abr)",
               [](gen::Generator& g) {
                 Instance in;
                 auto a = g.stmts(2), b = g.stmts(2);
                 StmtList ab = a;
                 ab.insert(ab.end(), b.begin(), b.end());
                 in.progs = {ab, a, b};
                 in.types = abrupt_types();
                 in.sides = [](const CompletionSet& t) {
                   return std::make_pair(
                       box(0, t, post()),
                       conj(box(1, t, post()),
                            box(1, CompletionSet::normal_only(), box(2, t, post()))));
                 };
                 return in;
               }});
  f.push_back({"if",
               "[if (e) st1 else st2]_t phi == [b = e;]_normal((b -> [st1]_t phi) & (!b -> "
               "[st2]_t phi))  (t in CT)",
               [](gen::Generator& g) {
                 Instance in;
                 auto e = g.pure_bool_expr(2);
                 auto a = g.stmts(2), b = g.stmts(2);
                 in.progs = {{lang::if_stmt(e, lang::block(a), lang::block(b))}, a, b};
                 in.types = completion_types(false);
                 in.sides = [e](const CompletionSet& t) {
                   return std::make_pair(box(0, t, post()), conj(when(e, true, box(1, t, post())),
                                                                 when(e, false, box(2, t, post()))));
                 };
                 return in;
               }});
  auto try_parts = [](gen::Generator& g, Instance& in) {
    auto p = g.stmts(2), q = g.stmts(2, 0);
    lang::Try t;
    t.body = p;
    t.finalizer = q;
    in.progs = {{lang::make_stmt(std::move(t))}, p, q};
  };
  f.push_back({"tryFinallyNormal",
               "[try { p } finally { q }]_normal phi == [p]_normal [q]_normal phi",
               [try_parts](gen::Generator& g) {
                 Instance in;
                 try_parts(g, in);
                 in.types = select({"normal"});
                 in.sides = [](const CompletionSet& t) {
                   return std::make_pair(box(0, t, post()), box(1, t, box(2, t, post())));
                 };
                 return in;
               }});
  f.push_back({"tryFinallyAbrupt",
               "[try { p } finally { q }]_a phi == [p]_a [q]_normal phi & [p]_CT [q]_a phi  "
               "(a in Abr)",
               [try_parts](gen::Generator& g) {
                 Instance in;
                 try_parts(g, in);
                 in.types = abrupt_types();
                 in.sides = [](const CompletionSet& t) {
                   return std::make_pair(
                       box(0, t, post()),
                       conj(box(1, t, box(2, CompletionSet::normal_only(), post())),
                            box(1, CompletionSet::all_but_halt(), box(2, t, post()))));
                 };
                 return in;
               }});
  return f;
}

std::vector<Family> fig2_families() {
  std::vector<Family> f;
  f.push_back({"whileNormal",
               "[l: while (e) st]_normal phi == [b = e;]_normal((!b -> phi) & (b -> ([st]_Brk_l "
               "phi & [st]_Cnt_l [l: while (e) st]_normal phi)))",
               [](gen::Generator& g) {
                 Instance in;
                 auto w = while_loop(g, g.chance(70));
                 in.progs = {{w.loop}, {w.body}};
                 in.types = select({"normal"});
                 in.sides = [w](const CompletionSet& t) {
                   auto rhs = conj(
                       when(w.guard, false, post()),
                       when(w.guard, true,
                            conj(box(1, CompletionSet::breaking(w.label), post()),
                                 box(1, CompletionSet::continuing(w.label), box(0, t, post())))));
                   return std::make_pair(box(0, t, post()), rhs);
                 };
                 return in;
               }});
  f.push_back({"whileOtherLabel",
               "[l: while (e) st]_t phi == [b = e;]_normal(b -> ([st]_t phi & [st]_Cnt_l "
               "[l: while (e) st]_t phi))  (t = break_k, continue_k, k != l; also return, "
               "thrown)",
               [](gen::Generator& g) {
                 Instance in;
                 const bool labeled = g.chance(70);
                 auto w = while_loop(g, labeled);
                 in.progs = {{w.loop}, {w.body}};
                 in.types = labeled ? select({"break m", "continue m", "return", "thrown"})
                                    : select({"break l", "continue l", "break m", "continue m",
                                              "return", "thrown"});
                 in.sides = [w](const CompletionSet& t) {
                   auto rhs = when(w.guard, true,
                                   conj(box(1, t, post()), box(1, CompletionSet::continuing(w.label),
                                                               box(0, t, post()))));
                   return std::make_pair(box(0, t, post()), rhs);
                 };
                 return in;
               }});
  f.push_back({"whileSameLabel", "[l: while (e) st]_{break, continue, break_l, continue_l} phi",
               [](gen::Generator& g) {
                 Instance in;
                 auto w = while_loop(g, g.chance(70));
                 in.progs = {{w.loop}};
                 in.types = w.label ? select({"break", "continue", "break l", "continue l"})
                                    : select({"break", "continue"});
                 in.sides = [](const CompletionSet& t) {
                   return std::make_pair(box(0, t, post()), tru());
                 };
                 return in;
               }});
  return f;
}

std::vector<Family> fig3_families() {
  std::vector<Family> f;
  f.push_back({"attemptNormal",
               "[attempt l { p } continuation { q }]_normal phi == [p]_Cnt_l [q]_normal phi & "
               "[p]_Brk_l phi",
               [](gen::Generator& g) {
                 Instance in;
                 auto a = attempt_parts(g);
                 in.progs = {{a.stmt}, a.p, a.q};
                 in.types = select({"normal"});
                 in.sides = [a](const CompletionSet& t) {
                   return std::make_pair(
                       box(0, t, post()),
                       conj(box(1, CompletionSet::continuing(a.label), box(2, t, post())),
                            box(1, CompletionSet::breaking(a.label), post())));
                 };
                 return in;
               }});
  f.push_back({"attemptSameLabel",
               "[attempt l { p } continuation { q }]_t phi == [p]_Cnt_l [q]_t phi  (t = break, "
               "continue, break_l, continue_l)",
               [](gen::Generator& g) {
                 Instance in;
                 auto a = attempt_parts(g);
                 in.progs = {{a.stmt}, a.p, a.q};
                 in.types = a.label ? select({"break", "continue", "break l", "continue l"})
                                    : select({"break", "continue"});
                 in.sides = [a](const CompletionSet& t) {
                   return std::make_pair(
                       box(0, t, post()),
                       box(1, CompletionSet::continuing(a.label), box(2, t, post())));
                 };
                 return in;
               }});
  f.push_back({"attemptOtherLabel",
               "[attempt l { p } continuation { q }]_t phi == [p]_Cnt_l [q]_t phi & [p]_t phi  "
               "(t = break_k, continue_k, k != l; also return, thrown)",
               [](gen::Generator& g) {
                 Instance in;
                 auto a = attempt_parts(g);
                 in.progs = {{a.stmt}, a.p, a.q};
                 in.types = a.label ? select({"break m", "continue m", "return", "thrown"})
                                    : select({"break l", "continue l", "break m", "continue m",
                                              "return", "thrown"});
                 in.sides = [a](const CompletionSet& t) {
                   return std::make_pair(
                       box(0, t, post()),
                       conj(box(1, CompletionSet::continuing(a.label), box(2, t, post())),
                            box(1, t, post())));
                 };
                 return in;
               }});
  return f;
}

std::vector<Family> fig4_families() {
  std::vector<Family> f;
  const auto halt = select({"halt"});
  f.push_back(fixed("skipHalt", "[;]_halt phi", ";", halt, false));
  f.push_back(fixed("breakHalt", "[break;]_halt phi", "break;", halt, false));
  f.push_back(fixed("breakLabelHalt", "[break l;]_halt phi", "break l;", halt, false));
  f.push_back(fixed("continueHalt", "[continue;]_halt phi", "continue;", halt, false));
  f.push_back(fixed("continueLabelHalt", "[continue l;]_halt phi", "continue l;", halt, false));
  f.push_back(fixed("haltHalt", "[halt;]_halt phi == phi", "halt;", halt, true));
  f.push_back(fixed("haltOther", "[halt;]_CT phi", "halt;", completion_types(false), false));
  f.push_back({"seqHalt", "[st1 st2]_halt phi == [st1]_halt phi & [st1]_normal [st2]_halt phi",
               [](gen::Generator& g) {
                 Instance in;
                 auto a = g.stmts(2), b = g.stmts(2);
                 StmtList ab = a;
                 ab.insert(ab.end(), b.begin(), b.end());
                 in.progs = {ab, a, b};
                 in.types = select({"halt"});
                 in.sides = [](const CompletionSet& t) {
                   return std::make_pair(
                       box(0, t, post()),
                       conj(box(1, t, post()),
                            box(1, CompletionSet::normal_only(), box(2, t, post()))));
                 };
                 return in;
               }});
  f.push_back({"ifHalt",
               "[if (e) st1 else st2]_halt phi == [b = e;]_halt phi & [b = e;]_normal((b -> "
               "[st1]_halt phi) & (!b -> [st2]_halt phi))",
               [](gen::Generator& g) {
                 Instance in;
                 // The guard may divide by zero here: the halt modality is
                 // vacuous for the throwing guard on both sides.
                 auto e = g.bool_expr(2);
                 auto a = g.stmts(2), b = g.stmts(2);
                 in.progs = {{lang::if_stmt(e, lang::block(a), lang::block(b))}, a, b};
                 in.types = select({"halt"});
                 in.sides = [e](const CompletionSet& t) {
                   // ⟦b = e;⟧_halt φ holds: an assignment never halts.
                   return std::make_pair(box(0, t, post()),
                                         conj(tru(), conj(when(e, true, box(1, t, post())),
                                                          when(e, false, box(2, t, post())))));
                 };
                 return in;
               }});
  f.push_back({"whileHalt",
               "[l: while (e) st]_halt phi == [b = e;]_halt phi & [b = e;]_normal(b -> "
               "([st]_halt phi & [st]_Cnt_l [l: while (e) st]_halt phi))",
               [](gen::Generator& g) {
                 Instance in;
                 auto w = while_loop(g, g.chance(70));
                 in.progs = {{w.loop}, {w.body}};
                 in.types = select({"halt"});
                 in.sides = [w](const CompletionSet& t) {
                   auto rhs = conj(tru(), when(w.guard, true,
                                               conj(box(1, t, post()),
                                                    box(1, CompletionSet::continuing(w.label),
                                                        box(0, t, post())))));
                   return std::make_pair(box(0, t, post()), rhs);
                 };
                 return in;
               }});
  f.push_back({"tryFinallyHalt",
               "[try { p } finally { q }]_halt phi == [p]_halt phi & [p]_CT [q]_halt phi",
               [](gen::Generator& g) {
                 Instance in;
                 auto p = g.stmts(2), q = g.stmts(2, 0);
                 lang::Try t;
                 t.body = p;
                 t.finalizer = q;
                 in.progs = {{lang::make_stmt(std::move(t))}, p, q};
                 in.types = select({"halt"});
                 in.sides = [](const CompletionSet& t) {
                   return std::make_pair(
                       box(0, t, post()),
                       conj(box(1, t, post()),
                            box(1, CompletionSet::all_but_halt(), box(2, t, post()))));
                 };
                 return in;
               }});
  f.push_back({"attemptHalt",
               "[attempt l { p } continuation { q }]_halt phi == [p]_halt phi & [p]_Cnt_l "
               "[q]_halt phi",
               [](gen::Generator& g) {
                 Instance in;
                 auto a = attempt_parts(g);
                 in.progs = {{a.stmt}, a.p, a.q};
                 in.types = select({"halt"});
                 in.sides = [a](const CompletionSet& t) {
                   return std::make_pair(
                       box(0, t, post()),
                       conj(box(1, t, post()),
                            box(1, CompletionSet::continuing(a.label), box(2, t, post()))));
                 };
                 return in;
               }});
  return f;
}

FamilyReport run_family(const Family& fam, const SuiteOptions& opt, std::uint64_t seed,
                        bool halts) {
  FamilyReport r;
  r.name = fam.name;
  r.statement = fam.statement;
  gen::Generator g(seed, fig_options(halts));
  for (int i = 0; i < opt.programs; ++i) {
    g.frames.clear();
    Instance in = fam.make(g);
    std::vector<logic::FormulaPtr> posts = {g.formula(), g.formula()};
    check_instance(r, in, posts, opt);
  }
  return r;
}

std::uint64_t family_seed(std::uint64_t seed, const std::string& name) {
  return seed * 1000003ULL + std::hash<std::string>{}(name);
}

void run_figure(SuiteReport& rep, const std::vector<Family>& fams, bool halts) {
  for (const auto& f : fams) {
    rep.families.push_back(run_family(f, rep.options, family_seed(rep.options.seed, f.name), halts));
  }
}

// ---------------------------------------------------------------------------
// Unrolling theorems and the box conjecture

// Labeled (mostly) while loops whose bodies complete abruptly, some of them
// by halting.
struct LoopCase {
  lang::StmtPtr loop;
  lang::ExprPtr guard;
  lang::StmtPtr body;
  lang::Label label;
  logic::FormulaPtr post;
  StmtList program() const { return {loop}; }
};

std::vector<LoopCase> loop_corpus(std::uint64_t seed, int n) {
  gen::GenOptions o;
  o.halts = true;
  o.depth = 2;
  gen::Generator g(seed, o);
  std::vector<LoopCase> out;
  while (static_cast<int>(out.size()) < n) {
    g.frames.clear();
    const bool labeled = g.chance(80);
    auto w = while_loop(g, labeled);
    const StmtList body = lang::body_list(w.body);
    if (!gen::contains_halt(body)) continue;
    bool other = false;
    for (const auto& s : body) {
      other = other || (gen::contains_abrupt({s}) && !gen::contains_halt({s}));
    }
    if (!other && !g.chance(20)) continue;
    out.push_back({w.loop, w.guard, w.body, w.label, g.formula()});
  }
  return out;
}

// The unrolled form written out from the theorem's statement.
StmtList unrolled(const LoopCase& c) {
  return {lang::if_stmt(c.guard, lang::attempt({c.body}, {c.loop}, c.label))};
}

FamilyReport theorem(const std::string& name, const std::string& statement,
                     const std::vector<LoopCase>& corpus, const Named& types,
                     const SuiteOptions& opt, std::uint64_t seed) {
  FamilyReport r;
  r.name = name;
  r.statement = statement;
  std::vector<CompletionSet> ts;
  for (const auto& [n, t] : types) ts.push_back(t);
  gen::Generator g(seed, {});
  for (const auto& c : corpus) {
    const StmtList body = lang::body_list(c.body);
    if (gen::contains_halt(body)) bump(r, "bodies with halt");
    bool other = false;
    for (const auto& s : body) {
      other = other || (gen::contains_abrupt({s}) && !gen::contains_halt({s}));
    }
    if (other) bump(r, "bodies with another abrupt statement");
    lang::Fragment lhs, rhs;
    lhs.body = c.program();
    rhs.body = unrolled(c);
    check_equivalence(r, lhs, rhs, ts, {c.post, g.formula()}, kObserved, opt.domain, opt.budget);
  }
  return r;
}

// The calculus's own unwinding (while, do and for) against the loop.
FamilyReport unwind_rules(const SuiteOptions& opt, std::uint64_t seed) {
  FamilyReport r;
  r.name = "unwindRules";
  r.statement = "[l: loop]_t phi == [unwound loop]_t phi  (while, do, for; t in CT + halt)";
  gen::GenOptions o;
  o.halts = true;
  gen::Generator g(seed, o);
  std::vector<CompletionSet> ts;
  for (const auto& [n, t] : completion_types(true)) ts.push_back(t);
  for (int i = 0; i < opt.programs; ++i) {
    g.frames.clear();
    auto loop = g.loop(2, g.chance(60) ? lang::Label("l") : std::nullopt, i % 3);
    lang::Fragment lhs, rhs;
    lhs.body = {loop};
    if (const auto* f = std::get_if<lang::For>(&loop->node); f && !f->init.empty()) {
      auto pulled = lang::pull_out_initializer(*loop);
      const auto& blk = std::get<lang::Block>(pulled->node);
      StmtList body = blk.body;
      body.back() = lang::unwind_loop(*body.back());
      rhs.body = {lang::block(body)};
    } else {
      rhs.body = {lang::unwind_loop(*loop)};
    }
    check_equivalence(r, lhs, rhs, ts, {g.formula()}, kObserved, opt.domain, opt.budget);
  }
  return r;
}

prover::Problem box_problem(const StmtList& body, const logic::FormulaPtr& post,
                            const prover::Interval& domain, std::int64_t budget) {
  gen::Generator g(0, {});
  prover::Problem p;
  p.fragment = g.fragment(body);
  lang::check_fragment(p.fragment);
  p.pre = logic::f_true();
  p.post = post;
  p.domain.fallback = domain;
  p.budget = budget;
  return p;
}

// Oracle side of the conjecture: ⟦p⟧_normal φ ∧ ⟦p⟧_halt φ at every state.
Tri oracle_box(const prover::Problem& p, const prover::Interval& domain,
               interp::NamedState* witness) {
  const auto vars = interp::VarTable::for_fragment(p.fragment);
  auto prog = interp::Program::compile(p.fragment.body, vars);
  auto phi = logic::CompiledFormula::compile(p.post, vars);
  const auto types = CompletionSet::normal_only() | CompletionSet::halt_only();
  Tri all = Tri::True;
  for_each_state(p.fragment.params.size(), vars.size(), domain, [&](const State& s) {
    if (all == Tri::False) return;
    auto out = prog.run(s, p.budget);
    if (out.budget_exhausted) {
      all = Tri::Unknown;
      return;
    }
    if (types.contains(out.reason) && !phi.eval(out.state)) {
      all = Tri::False;
      if (witness) *witness = interp::to_named(s, vars);
    }
  });
  return all;
}

FamilyReport conjecture(const std::vector<LoopCase>& corpus, const SuiteOptions& opt) {
  FamilyReport r;
  r.name = "boxIsNormalAndHalt";
  r.statement = "[p]phi (calculus) == [p]_normal phi & [p]_halt phi (interpreter)";
  for (const auto& c : corpus) {
    auto p = box_problem(c.program(), c.post, opt.domain, opt.budget);
    ++r.programs;
    ++r.checks;
    const auto proof = prover::prove(p);
    interp::NamedState witness;
    const Tri oracle = oracle_box(p, opt.domain, &witness);
    bump(r, std::string("calculus ") + prover::to_string(proof.verdict.kind));
    if (proof.verdict.kind == prover::Verdict::Kind::Unknown || oracle == Tri::Unknown) {
      ++r.unknown;
      for (const auto& why : proof.verdict.reasons) bump(r, "unknown: " + why);
      if (oracle == Tri::Unknown) bump(r, "unknown: oracle budget");
      continue;
    }
    const bool proved = proof.verdict.kind == prover::Verdict::Kind::Proved;
    if (proved != (oracle == Tri::True)) {
      record(r, {lang::print_line(c.program()), "box", logic::print(c.post),
                 proved ? witness : proof.verdict.counterexample, prover::to_string(proof.verdict.kind),
                 tri_str(oracle)});
    }
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Equivalence

void check_equivalence(FamilyReport& r, const lang::Fragment& lhs, const lang::Fragment& rhs,
                       const std::vector<CompletionSet>& types,
                       const std::vector<logic::FormulaPtr>& posts,
                       const std::vector<std::string>& observed, const prover::Interval& domain,
                       std::int64_t budget) {
  Oracle o({lhs.body, rhs.body}, observed, budget);
  std::vector<logic::CompiledFormula> phis;
  for (const auto& p : posts) phis.push_back(logic::CompiledFormula::compile(p, o.vars()));
  const std::string text = lang::print_line(lhs.body) + "  vs  " + lang::print_line(rhs.body);
  ++r.programs;
  const std::size_t n = observed.size();
  for_each_state(n, o.vars().size(), domain, [&](const State& s) {
    const Outcome a = o.run(0, s);
    const Outcome b = o.run(1, s);
    if (a.budget_exhausted || b.budget_exhausted) {
      r.checks += types.size() * (posts.size() + 1);
      r.unknown += types.size() * (posts.size() + 1);
      return;
    }
    const bool same_state = std::equal(a.state.begin(), a.state.begin() + static_cast<long>(n),
                                       b.state.begin());
    for (const auto& t : types) {
      const bool in_a = t.contains(a.reason), in_b = t.contains(b.reason);
      for (std::size_t pi = 0; pi <= phis.size(); ++pi) {
        ++r.checks;
        bool va, vb;
        if (pi < phis.size()) {
          va = !in_a || phis[pi].eval(a.state);
          vb = !in_b || phis[pi].eval(b.state);
        } else {
          // φ: "the final state equals lhs's final state".
          va = true;
          vb = !in_b || (in_a && same_state);
        }
        if (va != vb) {
          record(r, {text, t.str(), pi < posts.size() ? logic::print(posts[pi]) : "same state",
                     interp::to_named(s, o.vars()), va ? "true" : "false",
                     vb ? "true" : "false"});
        }
      }
    }
  });
}

FamilyReport check_equivalence(const std::string& name, const lang::Fragment& lhs,
                               const lang::Fragment& rhs, const std::vector<CompletionSet>& types,
                               const std::vector<logic::FormulaPtr>& posts,
                               const std::vector<std::string>& observed,
                               const prover::Interval& domain, std::int64_t budget) {
  FamilyReport r;
  r.name = name;
  check_equivalence(r, lhs, rhs, types, posts, observed, domain, budget);
  return r;
}

// ---------------------------------------------------------------------------
// Suites

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "fig4",
                                                 "thm1", "thm2", "conj1", "all"};
  return names;
}

SuiteReport run_suite(const std::string& suite, const SuiteOptions& opt) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = suite;
  rep.options = opt;
  const bool all = suite == "all";
  if (all || suite == "fig1") run_figure(rep, fig1_families(), true);
  if (all || suite == "fig2") run_figure(rep, fig2_families(), true);
  if (all || suite == "fig3") run_figure(rep, fig3_families(), true);
  if (all || suite == "fig4") run_figure(rep, fig4_families(), true);
  if (all || suite == "thm1" || suite == "thm2" || suite == "conj1") {
    const auto corpus = loop_corpus(family_seed(opt.seed, "loops"), opt.programs);
    if (all || suite == "thm1") {
      rep.families.push_back(theorem(
          "unrollWhile", "[l: while (e) st]_t phi == [if (e) attempt l { st } continuation "
                         "{ l: while (e) st }]_t phi  (t in CT)",
          corpus, completion_types(false), opt, family_seed(opt.seed, "thm1")));
      rep.families.push_back(unwind_rules(opt, family_seed(opt.seed, "unwindRules")));
    }
    if (all || suite == "thm2") {
      rep.families.push_back(theorem(
          "unrollWhileHalt", "[l: while (e) st]_halt phi == [if (e) attempt l { st } "
                             "continuation { l: while (e) st }]_halt phi",
          corpus, select({"halt"}), opt, family_seed(opt.seed, "thm2")));
    }
    if (all || suite == "conj1") rep.families.push_back(conjecture(corpus, opt));
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Soundness fuzz

namespace {

struct Located {
  int line;
  bool is_do;
  bool is_for;
};

void collect_loops(const StmtList& body, std::vector<Located>& out);

void collect_loops(const lang::StmtPtr& s, std::vector<Located>& out) {
  if (!s) return;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, lang::Block>) {
          collect_loops(n.body, out);
        } else if constexpr (std::is_same_v<T, lang::If>) {
          collect_loops(n.then_branch, out);
          collect_loops(n.else_branch, out);
        } else if constexpr (std::is_same_v<T, lang::While> || std::is_same_v<T, lang::DoWhile> ||
                             std::is_same_v<T, lang::For>) {
          out.push_back({s->pos.line, std::is_same_v<T, lang::DoWhile>,
                         std::is_same_v<T, lang::For>});
          collect_loops(n.body, out);
        } else if constexpr (std::is_same_v<T, lang::Try>) {
          collect_loops(n.body, out);
          if (n.handler) collect_loops(n.handler->body, out);
          if (n.finalizer) collect_loops(*n.finalizer, out);
        } else if constexpr (std::is_same_v<T, lang::Attempt>) {
          collect_loops(n.body, out);
          collect_loops(n.continuation, out);
        }
      },
      s->node);
}

void collect_loops(const StmtList& body, std::vector<Located>& out) {
  for (const auto& s : body) collect_loops(s, out);
}

// The loop's exit condition as a formula: !(k > 0 && g).
logic::FormulaPtr exit_condition(const lang::StmtPtr& loop) {
  lang::ExprPtr g;
  if (auto* w = std::get_if<lang::While>(&loop->node)) g = w->cond;
  if (auto* d = std::get_if<lang::DoWhile>(&loop->node)) g = d->cond;
  if (auto* f = std::get_if<lang::For>(&loop->node)) g = f->guard;
  return logic::f_not(logic::formula_of(*g));
}

logic::FormulaPtr candidate(gen::Generator& g, const logic::FormulaPtr& post,
                            const logic::FormulaPtr& exit) {
  switch (g.pick(6)) {
    case 0: return logic::f_true();
    case 1: return post;
    case 2: return logic::f_or(exit, post);
    case 3: return logic::f_and(g.formula(), post);
    default: return g.formula();
  }
}

}  // namespace

FamilyReport soundness_fuzz(const FuzzOptions& opt) {
  FamilyReport r;
  r.name = "invariantSoundness";
  r.statement = "proved(pre ==> [p]post) implies the triple holds on the interpreter";
  gen::GenOptions o;
  o.depth = 2;
  o.halts = true;
  gen::Generator g(opt.seed, o);
  while (static_cast<int>(r.programs) < opt.pairs) {
    g.frames.clear();
    StmtList body;
    if (g.chance(50)) body.push_back(g.stmt(0));
    const int kind = g.pick(4) == 0 ? 1 : (g.chance(50) ? 0 : 2);
    auto loop = g.loop(2, g.chance(30) ? lang::Label("l") : std::nullopt, kind);
    body.push_back(loop);
    if (g.chance(50)) body.push_back(g.stmt(0));

    // Print and reparse so the loops carry line numbers.
    prover::Problem p;
    try {
      p.fragment = lang::parse_fragment(lang::print(g.fragment(body)));
    } catch (const ParseError& e) {
      bump(r, "generator produced unparsable program");
      continue;
    }
    p.domain.fallback = opt.domain;
    p.budget = opt.budget;
    std::vector<Located> loops;
    collect_loops(p.fragment.body, loops);
    // Half the pairs tie pre and post to the outer invariant so that the
    // verdict turns on whether it is preserved.
    const bool tied = body.size() == 1 && g.chance(50);
    if (tied) {
      auto inv = g.formula();
      p.pre = g.chance(50) ? inv : logic::f_and(inv, g.formula());
      p.post = g.chance(50) ? inv : logic::f_and(inv, exit_condition(loop));
      p.invariants[loops[0].line] = inv;
      bump(r, "tied to the invariant");
    } else {
      p.post = g.chance(20) ? exit_condition(loop) : g.formula();
      p.pre = g.chance(50) ? logic::f_true() : g.formula();
      p.invariants[loops[0].line] = candidate(g, p.post, exit_condition(loop));
    }
    for (std::size_t i = 1; i < loops.size(); ++i) {
      if (g.chance(50)) continue;  // inner loops: unwind
      p.invariants[loops[i].line] = candidate(g, p.post, exit_condition(loop));
    }
    ++r.programs;
    ++r.checks;
    const auto proof = prover::prove(p);
    bump(r, prover::to_string(proof.verdict.kind));
    if (proof.verdict.kind == prover::Verdict::Kind::Proved) {
      // Every start satisfying pre that ends normally or halting satisfies post.
      const auto vars = interp::VarTable::for_fragment(p.fragment);
      auto pre_holds = logic::CompiledFormula::compile(p.pre, vars);
      auto prog = interp::Program::compile(p.fragment.body, vars);
      auto phi = logic::CompiledFormula::compile(p.post, vars);
      for_each_state(p.fragment.params.size(), vars.size(), opt.domain, [&](const State& s) {
        if (!pre_holds.eval(s)) return;
        auto out = prog.run(s, p.budget);
        if (out.budget_exhausted) {
          bump(r, "oracle budget");
          return;
        }
        const auto k = out.reason.kind;
        if ((k == interp::Completion::Kind::Normal || k == interp::Completion::Kind::Halt) &&
            !phi.eval(out.state)) {
          record(r, {lang::print_line(p.fragment.body), "proved", logic::print(p.post),
                     interp::to_named(s, vars), "proved",
                     "post fails after " + interp::to_string(out.reason)});
        }
      });
    } else if (proof.verdict.kind == prover::Verdict::Kind::Refuted) {
      if (proof.verdict.confirmed) {
        bump(r, "refuted and confirmed");
        // Replay independently of the prover.
        interp::NamedState start;
        for (const auto& prm : p.fragment.params) {
          auto it = proof.verdict.counterexample.find(prm.name);
          start[prm.name] = it != proof.verdict.counterexample.end() ? it->second
                                                                      : interp::Value(Int(opt.domain.lo));
        }
        auto out = interp::exec(p.fragment, start, p.budget);
        const auto k = out.reason.kind;
        const bool violates =
            !out.budget_exhausted && logic::eval_formula(p.pre, start) &&
            (k == interp::Completion::Kind::Normal || k == interp::Completion::Kind::Halt) &&
            !logic::eval_formula(p.post, out.state);
        if (!violates) {
          record(r, {lang::print_line(p.fragment.body), "replay", logic::print(p.post), start,
                     "confirmed", "replay does not violate post"});
        }
      }
    } else {
      for (const auto& why : proof.verdict.reasons) bump(r, "unknown: " + why);
      ++r.unknown;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Do loops

FamilyReport do_loop_routes(std::uint64_t seed, int loops, const prover::Interval& domain,
                            std::int64_t budget) {
  FamilyReport r;
  r.name = "doLoopRoutes";
  r.statement = "transformDoToWhile and unwindDoLoop agree with the do loop and with each other";
  gen::GenOptions o;
  o.halts = true;
  gen::Generator g(seed, o);
  std::vector<CompletionSet> ts;
  for (const auto& [n, t] : completion_types(true)) ts.push_back(t);
  for (int i = 0; i < loops; ++i) {
    g.frames.clear();
    auto loop = g.loop(2, g.chance(50) ? lang::Label("l") : std::nullopt, 1);
    auto post = g.formula();
    lang::Fragment orig = g.fragment({loop});
    lang::Fragment via_while = orig, via_unwind = orig;
    via_while.body = {lang::decl(lang::Type::Bool, "fst", lang::bool_lit(true)),
                      lang::do_to_while(*loop, "fst")};
    via_unwind.body = {lang::unwind_do(*loop)};
    check_equivalence(r, orig, via_while, ts, {post}, kObserved, domain, budget);
    check_equivalence(r, orig, via_unwind, ts, {post}, kObserved, domain, budget);
    --r.programs;  // one loop, two comparisons

    auto p = box_problem({loop}, post, domain, budget);
    prover::Options unwind, to_while;
    to_while.do_to_while = true;
    const auto a = prover::prove(p, unwind);
    const auto b = prover::prove(p, to_while);
    ++r.checks;
    bump(r, std::string("unwindDoLoop ") + prover::to_string(a.verdict.kind));
    bump(r, std::string("transformDoToWhile ") + prover::to_string(b.verdict.kind));
    if (a.verdict.kind == prover::Verdict::Kind::Unknown ||
        b.verdict.kind == prover::Verdict::Kind::Unknown) {
      ++r.unknown;
      continue;
    }
    bump(r, "both decided");
    if (a.verdict.kind != b.verdict.kind) {
      record(r, {lang::print_line(orig.body), "verdict", logic::print(post), {},
                 prover::to_string(a.verdict.kind), prover::to_string(b.verdict.kind)});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

Json value_json(const interp::Value& v) {
  if (auto* b = std::get_if<bool>(&v)) return *b;
  if (auto* i = std::get_if<Int>(&v)) return i->str();
  return nullptr;
}

Json family_json(const FamilyReport& f) {
  Json o;
  o["family"] = f.name;
  if (!f.statement.empty()) o["statement"] = f.statement;
  o["programs"] = f.programs;
  o["checks"] = f.checks;
  o["unknown"] = f.unknown;
  o["mismatches"] = f.mismatch_count;
  if (!f.counters.empty()) {
    Json c = Json::object();
    for (const auto& [k, v] : f.counters) c[k] = v;
    o["counters"] = c;
  }
  Json ms = Json::array();
  for (const auto& m : f.mismatches) {
    Json j;
    j["program"] = m.program;
    j["type"] = m.type;
    j["post"] = m.post;
    Json st = Json::object();
    for (const auto& [k, v] : m.state) st[k] = value_json(v);
    j["state"] = st;
    j["lhs"] = m.lhs;
    j["rhs"] = m.rhs;
    ms.push_back(j);
  }
  o["examples"] = ms;
  return o;
}

}  // namespace

std::string report_json(const FamilyReport& r, int indent) {
  Json o = family_json(r);
  o["format"] = 1;
  return o.dump(indent);
}

std::string report_json(const SuiteReport& r, int indent) {
  Json o;
  o["format"] = 1;
  o["suite"] = r.suite;
  o["domain"] = r.options.domain.str();
  o["seed"] = r.options.seed;
  o["programs_per_family"] = r.options.programs;
  o["mismatches"] = r.mismatches();
  o["seconds"] = r.seconds;
  Json fs = Json::array();
  for (const auto& f : r.families) fs.push_back(family_json(f));
  o["families"] = fs;
  return o.dump(indent);
}

std::string report_text(const SuiteReport& r) {
  std::ostringstream os;
  os << "suite " << r.suite << ", domain " << r.options.domain.str() << ", seed " << r.options.seed
     << "\n";
  for (const auto& f : r.families) {
    os << (f.mismatch_count ? "FAIL " : "ok   ") << f.name << ": " << f.programs << " programs, "
       << f.checks << " checks, " << f.unknown << " unknown, " << f.mismatch_count
       << " mismatches";
    for (const auto& [k, v] : f.counters) os << "; " << k << " " << v;
    os << "\n";
    for (const auto& m : f.mismatches) {
      os << "    " << m.program << " [" << m.type << "] post " << m.post << ": " << m.lhs
         << " vs " << m.rhs << "\n";
    }
  }
  os << r.mismatches() << " mismatches in " << r.seconds << " s\n";
  return os.str();
}

}  // namespace loopdl::harness
