#include "doctest.h"

#include <random>

#include "loopdl/calculus.hpp"
#include "loopdl/error.hpp"
#include "loopdl/gen.hpp"
#include "loopdl/parser.hpp"
#include "loopdl/printer.hpp"

using namespace loopdl;
using namespace loopdl::calculus;
using interp::NamedState;

namespace {

Sequent goal(const lang::Fragment& f, const logic::FormulaPtr& post) {
  Sequent s;
  s.succ.push_back(logic::f_box(f.body, post));
  s.types = std::make_shared<const TypeMap>(lang::variable_types(f));
  return s;
}

Sequent goal(const std::string& src, const std::string& post) {
  return goal(lang::parse_fragment(src), logic::parse_formula(post));
}

const lang::Attempt* find_attempt(const lang::StmtList& body) {
  for (const auto& s : body) {
    if (auto* a = std::get_if<lang::Attempt>(&s->node)) return a;
    if (auto* i = std::get_if<lang::If>(&s->node)) {
      if (auto* a = std::get_if<lang::Attempt>(&i->then_branch->node)) return a;
    }
  }
  return nullptr;
}

// Independent reading of a sequent at one state: boxes run the interpreter
// and hold unless the run ends normally or halting in a state violating the
// postcondition.
struct Unknown {};

bool holds(const logic::FormulaPtr& f, const NamedState& s, const TypeMap& types);

bool holds_box(const logic::Formula& f, const NamedState& s, const TypeMap& types) {
  lang::Fragment frag;
  for (const auto& [name, ty] : types) frag.params.push_back({ty, name});
  frag.explicit_params = true;
  frag.body = f.program;
  auto o = interp::exec(frag, s, 5000);
  if (o.budget_exhausted) throw Unknown{};
  using K = interp::Completion::Kind;
  if (o.reason.kind != K::Normal && o.reason.kind != K::Halt) return true;
  NamedState after = s;
  for (const auto& [k, v] : o.state) after[k] = v;
  return holds(f.a, after, types);
}

bool holds(const logic::FormulaPtr& f, const NamedState& s, const TypeMap& types) {
  using K = logic::Formula::K;
  switch (f->k) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: return std::get<bool>(logic::eval_term(f->atom, s));
    case K::Not: return !holds(f->a, s, types);
    case K::And: return holds(f->a, s, types) && holds(f->b, s, types);
    case K::Or: return holds(f->a, s, types) || holds(f->b, s, types);
    case K::Implies: return !holds(f->a, s, types) || holds(f->b, s, types);
    case K::Box: return holds_box(*f, s, types);
    case K::Upd: {
      NamedState t = s;
      for (const auto& [x, v] : f->update.bindings()) t[x] = logic::eval_term(v, s);
      return holds(f->a, t, types);
    }
  }
  return false;
}

bool holds(const Sequent& q, const NamedState& s) {
  for (const auto& a : q.ante) {
    if (!holds(a, s, *q.types)) return true;
  }
  for (const auto& c : q.succ) {
    if (holds(c, s, *q.types)) return true;
  }
  return false;
}

NamedState random_state(std::mt19937_64& rng, const TypeMap& types) {
  NamedState s;
  for (const auto& [name, ty] : types) {
    if (ty == lang::Type::Bool) {
      s[name] = rng() % 2 == 0;
    } else {
      s[name] = Int(static_cast<int>(rng() % 7) - 3);
    }
  }
  return s;
}

RuleApp any_step(const Sequent& s, std::mt19937_64& rng) {
  const lang::Stmt* loop = focus_loop(s);
  if (!loop) return symbolic_step(s);
  if (auto* f = std::get_if<lang::For>(&loop->node); f && !f->init.empty()) {
    return pull_out_initializer(s);
  }
  if (std::holds_alternative<lang::DoWhile>(loop->node) && rng() % 2 == 0) {
    return transform_do_to_while(s);
  }
  return unwind_loop(s);
}

gen::GenOptions walk_options() {
  gen::GenOptions o;
  o.halts = true;
  o.division = true;
  return o;
}

}  // namespace

TEST_CASE("loopInvariantFor: premiss 2 continuation is the update, a fresh flag and halt") {
  auto s = goal("params (int i, int n, int x); for (; i < n; i = i + 1, x = x - 1) { x = x + i; }",
                "x == 0");
  auto r = apply_loop_invariant(s, logic::parse_formula("i <= n"));
  CHECK(r.rule == "loopInvariantFor");
  REQUIRE(r.premisses.size() == 2);
  CHECK_FALSE(r.premisses[0].fresh_context);
  CHECK(r.premisses[1].fresh_context);

  const auto& pres = r.premisses[1].sequent;
  REQUIRE(pres.succ.size() == 1);
  REQUIRE(pres.succ[0]->k == logic::Formula::K::Box);
  const auto& program = pres.succ[0]->program;
  // `x` is taken by the program, so the flag is the next fresh name.
  const std::string flag = "x_1";
  CHECK(lang::print_line(program) ==
        "boolean x_1 = false; x_1 = true; if (i < n) attempt { x = x + i; } "
        "continuation { i = i + 1; x = x - 1; x_1 = false; halt; }");
  const auto* att = find_attempt(program);
  REQUIRE(att);
  CHECK(lang::print_line(att->continuation) == "i = i + 1; x = x - 1; " + flag + " = false; halt;");
  CHECK(lang::identifiers(s.succ[0]->program).count(flag) == 0);
  CHECK(logic::print(pres.succ[0]->a) == "(x_1 == false -> i <= n) && (x_1 == true -> x == 0)");
  CHECK(pres.types->at(flag) == lang::Type::Bool);
}

TEST_CASE("loopInvariantWhile: premiss shapes") {
  auto s = goal("params (int i, int n); l: while (i < n) { i = i + 1; }", "i == n");
  auto r = apply_loop_invariant(s, logic::parse_formula("i <= n"));
  CHECK(r.rule == "loopInvariantWhile");
  CHECK(logic::print(r.premisses[0].sequent.succ[0]) == "i <= n");
  const auto& program = r.premisses[1].sequent.succ[0]->program;
  CHECK(lang::print_line(program) ==
        "boolean x = false; x = true; if (i < n) attempt l: { i = i + 1; } "
        "continuation { x = false; halt; }");
  CHECK(print(r.premisses[1].sequent) == "i <= n ==> [" + lang::print_line(program) +
                                              "]((x == false -> i <= n) && (x == true -> i == n))");
}

TEST_CASE("loop invariant flag avoids program, invariant and post names") {
  auto s = goal("params (int x, int x_1); while (x < x_1) { x = x + 1; }", "x_3 == 0");
  auto r = apply_loop_invariant(s, logic::parse_formula("x_2 >= 0"));
  std::string flag;
  for (const auto& [k, v] : r.inst) {
    if (k == "flag") flag = v;
  }
  CHECK(flag == "x_4");
}

TEST_CASE("invariant rules reject other loops") {
  CHECK_THROWS_AS(apply_loop_invariant(goal("params (int x); do { x = x - 1; } while (x > 0);", "true"),
                                       logic::f_true()),
                  NotApplicable);
  CHECK_THROWS_AS(apply_loop_invariant(goal("params (int i); for (i = 0; i < 3; i = i + 1) { }", "true"),
                                       logic::f_true()),
                  NotApplicable);
}

TEST_CASE("example1.mj step by step") {
  Sequent s = goal("params (int x, int y); x = 1;\nl: { y = x; break l; y = 0; }", "y != 0");
  const char* rules[] = {"assignment", "assignment", "blockBreak", "emptyModality"};
  const char* after[] = {
      "==> {x := 1}[l: { y = x; break l; y = 0; }](y != 0)",
      "==> {x := 1 || y := 1}[l: { break l; y = 0; }](y != 0)",
      "==> {x := 1 || y := 1}[](y != 0)",
      "==> 1 != 0",
  };
  for (int i = 0; i < 4; ++i) {
    CHECK(matching_step_rules(s) == std::vector<std::string>{rules[i]});
    auto r = symbolic_step(s);
    CHECK(r.rule == rules[i]);
    REQUIRE(r.premisses.size() == 1);
    s = r.premisses[0].sequent;
    CHECK(print(s) == after[i]);
  }
  CHECK_FALSE(find_focus(s));
}

TEST_CASE("property: exactly one rule matches every non-loop focus") {
  std::mt19937_64 rng(7);
  std::size_t steps = 0;
  for (int n = 0; n < 1500; ++n) {
    gen::Generator g(1000 + n, walk_options());
    Sequent s = goal(g.fragment(g.stmts(2, 1)), g.formula());
    for (int i = 0; i < 80 && find_focus(s); ++i) {
      if (!focus_loop(s)) {
        auto names = matching_step_rules(s);
        REQUIRE_MESSAGE(names.size() == 1, print(s));
        CHECK(symbolic_step(s).rule == names[0]);
        ++steps;
      } else {
        CHECK(matching_step_rules(s).empty());
        CHECK_THROWS_AS(symbolic_step(s), NotApplicable);
      }
      auto r = any_step(s, rng);
      if (r.premisses.empty()) break;
      s = r.premisses[rng() % r.premisses.size()].sequent;
    }
  }
  CHECK(steps > 8000);
}

TEST_CASE("property: rule instances preserve the meaning of the sequent") {
  // Every rule except the invariant rules is invertible: the conclusion holds
  // at a state iff all premisses hold there.
  std::mt19937_64 rng(11);
  std::map<std::string, std::size_t> seen;
  for (int n = 0; n < 600; ++n) {
    gen::Generator g(5000 + n, walk_options());
    Sequent s = goal(g.fragment(g.stmts(2, 1)), g.formula());
    for (int i = 0; i < 60 && find_focus(s); ++i) {
      auto r = any_step(s, rng);
      for (int t = 0; t < 8; ++t) {
        NamedState st = random_state(rng, *s.types);
        try {
          const bool concl = holds(s, st);
          bool prem = true;
          for (const auto& p : r.premisses) {
            // Premisses may mention fresh variables; give them a value too.
            NamedState ext = st;
            for (const auto& [name, ty] : *p.sequent.types) {
              if (!ext.count(name)) ext[name] = ty == lang::Type::Bool ? interp::Value(false)
                                                                       : interp::Value(Int(0));
            }
            prem = prem && holds(p.sequent, ext);
          }
          REQUIRE_MESSAGE(concl == prem, r.rule << " at " << print(s));
          ++seen[r.rule];
        } catch (const Unknown&) {
        }
      }
      if (r.premisses.empty()) break;
      s = r.premisses[rng() % r.premisses.size()].sequent;
    }
  }
  for (const char* rule : {"assignment", "ifSplit", "blockBreak", "unwindWhileLoop",
                           "unwindDoLoop", "unwindForLoop", "emptyAttempt", "emptyModality", "halt", "attemptBreak"}) {
    CHECK_MESSAGE(seen[rule] > 0, rule);
  }
}

TEST_CASE("rule catalog") {
  for (const auto& r : rule_catalog()) {
    CHECK(find_rule(r.name) == &r);
    CHECK(r.premisses >= 0);
    CHECK_FALSE(r.schema.empty());
  }
  CHECK(find_rule("loopInvariantFor")->premisses == 2);
  CHECK(find_rule("nope") == nullptr);
}
