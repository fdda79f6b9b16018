#include "doctest.h"

#include "loopdl/error.hpp"
#include "loopdl/harness.hpp"
#include "loopdl/parser.hpp"

using namespace loopdl;
using namespace loopdl::harness;
using interp::CompletionSet;

namespace {

const prover::Interval kDomain{-4, 4};

FamilyReport compare(const std::string& a, const std::string& b,
                     const std::vector<CompletionSet>& types,
                     const std::vector<std::string>& posts = {"x >= 0"}) {
  std::vector<logic::FormulaPtr> phis;
  for (const auto& p : posts) phis.push_back(logic::parse_formula(p));
  return check_equivalence("t", lang::parse_fragment(a), lang::parse_fragment(b), types, phis,
                           {"x"}, kDomain, 10000);
}

std::vector<CompletionSet> all_types() {
  std::vector<CompletionSet> out;
  for (const auto& [n, t] : completion_types(true)) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("equivalence: equal programs have no mismatch") {
  auto r = compare("x = x + 1;", "x = 1 + x;", all_types());
  CHECK(r.mismatch_count == 0);
  // 9 states, every type, the given post and the same-state post.
  CHECK(r.checks == 9 * all_types().size() * 2);
  CHECK(compare("l: { x = 1; break l; x = 2; }", "x = 1;", all_types()).mismatch_count == 0);
}

TEST_CASE("equivalence: detects wrong axioms") {
  // break completes abruptly, skip does not.
  CHECK(compare("break;", ";", {CompletionSet::break_unlabeled()}).mismatch_count > 0);
  CHECK(compare("halt;", ";", {CompletionSet::normal_only()}).mismatch_count > 0);
  CHECK(compare("halt;", ";", {CompletionSet::halt_only()}).mismatch_count > 0);
  // Same completion, different final state: only the same-state post sees it.
  CHECK(compare("x = x;", "x = x * x;", {CompletionSet::normal_only()}, {}).mismatch_count > 0);
  // The unrolled loop is equivalent; dropping its guard is not.
  const std::string loop = "l: while (x > 0) { x = x - 1; if (x == 2) continue l; }";
  CHECK(compare(loop,
                "if (x > 0) attempt l: { x = x - 1; if (x == 2) continue l; } "
                "continuation { " + loop + " }",
                all_types())
            .mismatch_count == 0);
  CHECK(compare(loop,
                "attempt l: { x = x - 1; if (x == 2) continue l; } "
                "continuation { " + loop + " }",
                all_types())
            .mismatch_count > 0);
}

TEST_CASE("equivalence: budget exhaustion is unknown, not a mismatch") {
  auto r = compare("while (true) { }", "while (x == x) { }", all_types());
  CHECK(r.mismatch_count == 0);
  CHECK(r.unknown == r.checks);
}

TEST_CASE("suites: small runs are clean and deterministic") {
  SuiteOptions o;
  o.programs = 15;
  o.seed = 3;
  for (const auto& suite : {"fig1", "fig2", "fig3", "fig4", "thm1", "thm2", "conj1"}) {
    auto a = run_suite(suite, o);
    auto b = run_suite(suite, o);
    CHECK_MESSAGE(a.mismatches() == 0, suite);
    REQUIRE(a.families.size() == b.families.size());
    for (std::size_t i = 0; i < a.families.size(); ++i) {
      CHECK(a.families[i].checks == b.families[i].checks);
      CHECK(a.families[i].programs == 15);
      CHECK(report_json(a.families[i]) == report_json(b.families[i]));
    }
  }
  CHECK_THROWS_AS(run_suite("fig5", o), ConfigError);
}

TEST_CASE("fuzzers: small runs are clean") {
  FuzzOptions f;
  f.pairs = 40;
  f.seed = 9;
  auto r = soundness_fuzz(f);
  CHECK(r.programs == 40);
  CHECK(r.mismatch_count == 0);
  auto d = do_loop_routes(9, 20, kDomain, 20000);
  CHECK(d.programs == 20);
  CHECK(d.mismatch_count == 0);
}
