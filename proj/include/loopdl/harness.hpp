#pragma once

// Differential checks of the axioms, the unrolling theorems, the box
// conjecture and the loop rules against the interpreter.

#include <cstdint>
#include <string>
#include <vector>

#include "loopdl/interp.hpp"
#include "loopdl/logic.hpp"
#include "loopdl/prover.hpp"

namespace loopdl::harness {

struct Mismatch {
  std::string program;  // the instance, printed
  std::string type;     // completion type or check name
  std::string post;
  interp::NamedState state;
  std::string lhs, rhs;  // the two verdicts
};

struct FamilyReport {
  std::string name;
  std::string statement;  // the equation in ASCII
  std::size_t programs = 0;
  std::size_t checks = 0;
  std::size_t unknown = 0;
  std::vector<Mismatch> mismatches;  // first few only
  std::size_t mismatch_count = 0;
  /// Extra counters (verdict tallies, unknown reasons).
  std::vector<std::pair<std::string, std::size_t>> counters;
};

struct SuiteOptions {
  prover::Interval domain{-4, 4};
  std::uint64_t seed = 0;
  int programs = 500;  // per family
  std::int64_t budget = 20000;
};

struct SuiteReport {
  std::string suite;
  SuiteOptions options;
  std::vector<FamilyReport> families;
  double seconds = 0;
  std::size_t mismatches() const;
};

/// fig1, fig2, fig3, fig4, thm1, thm2, conj1, all.
const std::vector<std::string>& suite_names();
/// Throws ConfigError for an unknown suite.
SuiteReport run_suite(const std::string& suite, const SuiteOptions& opt);

/// Checks ⟦lhs⟧_t φ = ⟦rhs⟧_t φ for every t, every post and every state over
/// `observed` (each ranging over the domain); other variables start unset.
/// Besides the given posts, each state also checks the post "the final
/// state equals lhs's final state on `observed`".
FamilyReport check_equivalence(const std::string& name, const lang::Fragment& lhs,
                               const lang::Fragment& rhs,
                               const std::vector<interp::CompletionSet>& types,
                               const std::vector<logic::FormulaPtr>& posts,
                               const std::vector<std::string>& observed,
                               const prover::Interval& domain, std::int64_t budget);
/// Accumulates into an existing report.
void check_equivalence(FamilyReport& into, const lang::Fragment& lhs, const lang::Fragment& rhs,
                       const std::vector<interp::CompletionSet>& types,
                       const std::vector<logic::FormulaPtr>& posts,
                       const std::vector<std::string>& observed, const prover::Interval& domain,
                       std::int64_t budget);

/// Every completion type the checks range over, labeled with `l` and with a
/// second label `m`: normal, break, continue, break l, continue l, break m,
/// continue m, return, thrown, and halt when asked.
std::vector<std::pair<std::string, interp::CompletionSet>> completion_types(bool with_halt);

struct FuzzOptions {
  std::uint64_t seed = 0;
  int pairs = 1000;
  prover::Interval domain{-4, 4};
  std::int64_t budget = 20000;
};

/// Random loop programs with candidate invariants. Every proved triple is
/// re-checked over the whole domain with the interpreter; refutations with
/// a confirmed counterexample are replayed as well.
FamilyReport soundness_fuzz(const FuzzOptions& opt);

/// transformDoToWhile against unwindDoLoop on generated do loops: the
/// programs both rules produce are oracle-equivalent to the loop, and the
/// prover's verdicts agree whenever neither is unknown.
FamilyReport do_loop_routes(std::uint64_t seed, int loops, const prover::Interval& domain,
                            std::int64_t budget);

std::string report_json(const SuiteReport& r, int indent = -1);
std::string report_json(const FamilyReport& r, int indent = -1);
std::string report_text(const SuiteReport& r);

}  // namespace loopdl::harness
