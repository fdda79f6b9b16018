#include "doctest.h"

#include "loopdl/error.hpp"
#include "loopdl/parser.hpp"
#include "loopdl/printer.hpp"
#include "loopdl/prover.hpp"

using namespace loopdl;
using namespace loopdl::prover;
using interp::NamedState;

namespace {

Problem problem(const std::string& src, const std::string& pre, const std::string& post) {
  Problem p;
  p.fragment = lang::parse_fragment(src);
  p.pre = logic::parse_formula(pre);
  p.post = logic::parse_formula(post);
  return p;
}

Sequent fo(std::vector<std::string> ante, std::vector<std::string> succ) {
  Sequent s;
  for (const auto& a : ante) s.ante.push_back(logic::parse_formula(a));
  for (const auto& c : succ) s.succ.push_back(logic::parse_formula(c));
  return s;
}

// Brute-force reference for pre ==> [p]post over the whole domain: every
// start satisfying pre that runs to normal or halt ends satisfying post.
bool triple_holds(const Problem& p, std::int64_t lo, std::int64_t hi) {
  std::vector<std::string> names;
  for (const auto& prm : p.fragment.params) names.push_back(prm.name);
  std::vector<std::int64_t> cur(names.size(), lo);
  while (true) {
    NamedState s;
    for (std::size_t i = 0; i < names.size(); ++i) s[names[i]] = Int(cur[i]);
    if (logic::eval_formula(p.pre, s)) {
      auto out = interp::exec(p.fragment, s, p.budget);
      const auto k = out.reason.kind;
      if (!out.budget_exhausted &&
          (k == interp::Completion::Kind::Normal || k == interp::Completion::Kind::Halt) &&
          !logic::eval_formula(p.post, out.state)) {
        return false;
      }
    }
    std::size_t i = 0;
    while (i < cur.size() && cur[i] == hi) cur[i++] = lo;
    if (i == cur.size()) return true;
    ++cur[i];
  }
}

const ProofNode* last_leaf(const ProofNode& n) {
  return n.children.empty() ? &n : last_leaf(*n.children.back());
}

}  // namespace

TEST_CASE("close_fo_goal") {
  CHECK(close_fo_goal(fo({}, {"1 != 0"}), {}).kind == FoResult::Kind::Closed);
  CHECK(close_fo_goal(fo({"i <= n", "!(i < n)"}, {"i == n"}), {}).kind ==
        FoResult::Kind::Closed);
  auto r = close_fo_goal(fo({}, {"i == n"}), {});
  REQUIRE(r.kind == FoResult::Kind::Counterexample);
  CHECK(r.counterexample == NamedState{{"i", Int(-8)}, {"n", Int(-7)}});
  DomainSpec tiny;
  auto big = close_fo_goal(fo({}, {"a + b + c + d + e + f == 100"}), tiny, 1000);
  CHECK(big.kind == FoResult::Kind::Unknown);
  CHECK(big.reason == "domain-too-large");
}

TEST_CASE("example1.prob proof") {
  auto p = problem("x = 1; l: { y = x; break l; y = 0; }", "true", "y != 0");
  auto r = prove(p);
  CHECK(r.verdict.kind == Verdict::Kind::Proved);
  CHECK(rule_sequence(*r.root) ==
        std::vector<std::string>{"assignment", "assignment", "blockBreak", "emptyModality"});
  const ProofNode* leaf = last_leaf(*r.root);
  CHECK(calculus::print(leaf->sequent) == "==> 1 != 0");
  CHECK(leaf->status == Status::Closed);
  CHECK(r.stats.nodes == 5);
  CHECK(r.stats.branches == 1);
}

TEST_CASE("while loop with an invariant") {
  const std::string src = "while (i < n) {\n  i = i + 1;\n}\n";
  auto p = problem(src, "i <= n && n <= 8 && -8 <= i", "i == n");
  p.invariants[1] = logic::parse_formula("i <= n");
  auto r = prove(p);
  CHECK(r.verdict.kind == Verdict::Kind::Proved);
  CHECK(r.stats.rules.at("loopInvariantWhile") == 1);

  auto wrong_post = p;
  wrong_post.post = logic::parse_formula("i == n + 1");
  auto w = prove(wrong_post);
  REQUIRE(w.verdict.kind == Verdict::Kind::Refuted);
  CHECK(w.verdict.confirmed);
  CHECK(triple_holds(wrong_post, -8, 8) == false);

  auto weak = p;
  weak.invariants[1] = logic::parse_formula("i < n");
  auto k = prove(weak);
  CHECK(k.verdict.kind == Verdict::Kind::Refuted);
  // Preservation fails too: one iteration from i == n - 1 reaches i == n.
  REQUIRE(k.root->children.size() == 2);
  CHECK(k.root->children[1]->status == Status::Refuted);
}

TEST_CASE("missing invariant is a configuration error") {
  auto p = problem("while (i < n) { i = i + 1; }", "true", "true");
  p.policies[1] = {LoopPolicy::Kind::Invariant, 0};
  CHECK_THROWS_AS(prove(p), ConfigError);
}

TEST_CASE("unwinding closes terminating loops and reports budget otherwise") {
  auto p = problem("while (i < n) { i = i + 1; }", "i <= n", "i == n");
  auto r = prove(p);
  CHECK(r.verdict.kind == Verdict::Kind::Proved);
  CHECK(r.stats.rules.at("unwindWhileLoop") >= 17);

  p.policies[1] = {LoopPolicy::Kind::Unwind, 3};
  auto u = prove(p);
  CHECK(u.verdict.kind == Verdict::Kind::Unknown);
  CHECK(u.verdict.reasons == std::vector<std::string>{"budget"});

  auto q = problem("while (true) { x = x; }", "true", "false");
  auto d = prove(q);
  CHECK(d.verdict.kind == Verdict::Kind::Unknown);
}

TEST_CASE("trivial program") {
  auto r = prove(problem(";", "true", "true"));
  CHECK(r.verdict.kind == Verdict::Kind::Proved);
}

TEST_CASE("abrupt endings are outside the box") {
  CHECK(prove(problem("return 1;", "true", "false")).verdict.kind == Verdict::Kind::Proved);
  CHECK(prove(problem("x = 1 / 0;", "true", "false")).verdict.kind == Verdict::Kind::Proved);
  CHECK(prove(problem("x = 1; break;", "true", "false")).verdict.kind == Verdict::Kind::Proved);
  CHECK(prove(problem("continue;", "true", "false")).verdict.kind == Verdict::Kind::Proved);
  CHECK(prove(problem("x = 1; halt; x = 2;", "true", "x == 1")).verdict.kind ==
        Verdict::Kind::Proved);
  CHECK(prove(problem("try { halt; } finally { x = 1; }", "x == 0", "x == 0")).verdict.kind ==
        Verdict::Kind::Proved);
}

TEST_CASE("listing3.mj under unwinding and with an invariant") {
  const std::string src =
      "while (x != 0) {\n"
      "  try {\n"
      "    if (x > 0) return x;\n"
      "    x = x + 100;\n"
      "    break;\n"
      "  } finally {\n"
      "    if (x > 10) {\n"
      "      x = -1;\n"
      "      continue;\n"
      "    }\n"
      "  }\n"
      "}\n";
  // Normal completion only happens when x starts at 0.
  auto p = problem(src, "x >= 0", "x == 0");
  p.policies[1] = {LoopPolicy::Kind::Unwind, 4};
  CHECK(prove(p).verdict.kind == Verdict::Kind::Proved);
  // From negative starts the loop diverges, which the unwinding cannot show.
  auto n = problem(src, "x < 0", "false");
  n.policies[1] = {LoopPolicy::Kind::Unwind, 4};
  CHECK(prove(n).verdict.kind == Verdict::Kind::Unknown);
  // With an invariant the divergent branch is abstracted away.
  auto i = problem(src, "x < 0", "false");
  i.invariants[1] = logic::parse_formula("x != 0");
  auto r = prove(i);
  CHECK(r.verdict.kind == Verdict::Kind::Proved);
  CHECK(triple_holds(i, -8, 8));
}

TEST_CASE("for loops with invariants") {
  const std::string src =
      "s = 0;\n"
      "for (int i = 0; i < n; i = i + 1) {\n"
      "  s = s + 1;\n"
      "}\n";
  auto p = problem(src, "0 <= n && n <= 5", "s == n");
  p.invariants[2] = logic::parse_formula("0 <= i && i <= n && s == i");
  auto r = prove(p);
  CHECK(r.verdict.kind == Verdict::Kind::Proved);
  CHECK(r.stats.rules.at("pullOutLoopInitializer") == 1);
  CHECK(r.stats.rules.at("loopInvariantFor") == 1);
  auto bad = p;
  bad.post = logic::parse_formula("s == n + 1");
  CHECK(prove(bad).verdict.kind == Verdict::Kind::Refuted);
}

TEST_CASE("do loops under both routes") {
  const std::string src = "do {\n  x = x - 1;\n} while (x > 0);\n";
  auto p = problem(src, "x <= 8", "x <= 0");
  auto a = prove(p);
  Options o;
  o.do_to_while = true;
  auto b = prove(p, o);
  CHECK(a.verdict.kind == Verdict::Kind::Proved);
  CHECK(b.verdict.kind == Verdict::Kind::Proved);
  CHECK(b.stats.rules.at("transformDoToWhile") == 1);
  auto inv = p;
  inv.invariants[1] = logic::parse_formula("x <= 8");
  auto c = prove(inv);
  CHECK(c.stats.rules.at("transformDoToWhile") == 1);
  // Preservation from x == -8 steps out of the domain.
  CHECK(c.verdict.kind == Verdict::Kind::Unknown);
  CHECK(c.verdict.reasons == std::vector<std::string>{"domain-escape"});
  auto halving = problem("do {\n  x = x / 2;\n} while (x > 1);\n", "true", "x <= 1");
  halving.invariants[1] = logic::parse_formula("true");
  CHECK(prove(halving).verdict.kind == Verdict::Kind::Proved);
}

TEST_CASE("proofs are deterministic") {
  auto p = problem("while (i < n) { if (i % 2 == 0) i = i + 1; else i = i + 2; }", "i <= n",
                   "i >= n");
  auto a = prove(p), b = prove(p);
  CHECK(report_json(a, p, true) == report_json(b, p, true));
}

TEST_CASE("problem files") {
  auto p = load_problem(std::string(LOOPDL_CORPUS_DIR) + "/example1.prob");
  CHECK(logic::print(p.post) == "y != 0");
  CHECK_THROWS_AS(parse_problem("pre: true\npost: true\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_problem("program: nowhere.mj\npost: true\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_problem("program: example1.mj\npost: z > 0\n", LOOPDL_CORPUS_DIR),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_problem("program: example1.mj\npost: true\ninvariant@1: true\n", LOOPDL_CORPUS_DIR),
      ConfigError);
  auto q = parse_problem(
      "program: example1.mj\npost: true\ndomain: x=-2..2, *=0..3\nbudget: 50\n", LOOPDL_CORPUS_DIR);
  CHECK(q.domain.of("x").str() == "-2..2");
  CHECK(q.domain.of("y").str() == "0..3");
  CHECK(q.budget == 50);
  CHECK_THROWS_AS(parse_interval("3..1"), ConfigError);
}

TEST_CASE("report json") {
  auto p = problem("x = 1; l: { y = x; break l; y = 0; }", "true", "y != 0");
  auto r = prove(p);
  const auto j = report_json(r, p, false);
  CHECK(j.find("\"format\":1") != std::string::npos);
  CHECK(j.find("\"verdict\":\"proved\"") != std::string::npos);
  CHECK(pretty_tree(r).find("1 != 0") != std::string::npos);
}
