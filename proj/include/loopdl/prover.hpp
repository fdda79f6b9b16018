#pragma once

// Proof search over the calculus with first-order goals closed by exhaustive
// enumeration of a bounded domain.
//
// Each open goal carries the set of initial states (over the variables seen
// so far) that satisfy its antecedent. Branch conditions filter the set, so
// infeasible branches close at once and unwinding stops when no state is left
// in the loop. Verdicts are relative to the declared domain.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "loopdl/calculus.hpp"
#include "loopdl/interp.hpp"
#include "loopdl/logic.hpp"

namespace loopdl::prover {

using calculus::Sequent;
using logic::FormulaPtr;

struct Interval {
  std::int64_t lo = -8;
  std::int64_t hi = 8;
  std::string str() const;  // "-8..8"
};

/// Parses "lo..hi". Throws ConfigError.
Interval parse_interval(const std::string& text);

struct DomainSpec {
  std::map<std::string, Interval> vars;
  Interval fallback;
  bool fallback_given = false;  // set by a `*=` entry
  const Interval& of(const std::string& name) const;
};

struct LoopPolicy {
  enum class Kind { Invariant, Unwind } kind = Kind::Unwind;
  int max_unwind = 0;
};

struct Problem {
  lang::Fragment fragment;
  FormulaPtr pre;
  FormulaPtr post;
  std::map<int, FormulaPtr> invariants;  // by loop header line
  std::map<int, LoopPolicy> policies;
  DomainSpec domain;
  std::int64_t budget = interp::kDefaultBudget;  // interpreter budget for replays
};

/// Checks formulas against the fragment's variables and that every
/// annotated line holds a loop header. Throws ConfigError.
void validate(const Problem& p);

/// `.prob` text; `program:` paths are resolved against `base_dir`.
Problem parse_problem(const std::string& text, const std::string& base_dir);
Problem load_problem(const std::string& path);

struct Options {
  int default_unwind = 32;
  std::size_t domain_cap = 10'000'000;
  std::size_t node_limit = 200'000;
  /// Route unwound do loops through transformDoToWhile first.
  bool do_to_while = false;
};

enum class Status { Open, Closed, Unknown, Refuted };
const char* to_string(Status s);

struct ProofNode {
  int id = 0;
  Sequent sequent;
  std::string rule;  // empty for leaves closed or judged without a rule
  std::vector<std::pair<std::string, std::string>> inst;
  std::vector<std::unique_ptr<ProofNode>> children;
  Status status = Status::Open;
  std::string note;
  std::optional<interp::NamedState> counterexample;
};

struct Verdict {
  enum class Kind { Proved, Refuted, Unknown } kind = Kind::Proved;
  interp::NamedState counterexample;
  /// Started from the counterexample's parameter values (missing ones at the
  /// domain's lower end), the interpreter satisfies pre and ends normally or
  /// halting in a state violating post.
  bool confirmed = false;
  std::vector<std::string> reasons;  // unknown reasons, deduplicated
};
const char* to_string(Verdict::Kind k);

struct Stats {
  std::size_t nodes = 0;
  std::size_t branches = 0;  // leaves
  std::map<std::string, std::size_t> rules;
};

struct ProofResult {
  std::unique_ptr<ProofNode> root;
  Verdict verdict;
  Stats stats;
};

/// pre ==> [p]post. Throws ConfigError on a missing invariant.
ProofResult prove(const Problem& p, const Options& opt = {});

struct FoResult {
  enum class Kind { Closed, Counterexample, Unknown } kind = Kind::Closed;
  interp::NamedState counterexample;
  std::string reason;
};

/// Modality-free sequent: simplification, then enumeration in lexicographic
/// order (variables sorted by name, the first most significant).
FoResult close_fo_goal(const Sequent& s, const DomainSpec& domain,
                       std::size_t cap = 10'000'000);

/// `"format": 1` reports.
std::string report_json(const ProofResult& r, const Problem& p, bool with_tree, int indent = -1);
std::string tree_json(const ProofResult& r, int indent = -1);
std::string pretty_tree(const ProofResult& r);

/// Depth-first sequence of rule names in the tree.
std::vector<std::string> rule_sequence(const ProofNode& root);

}  // namespace loopdl::prover
