#pragma once

// Sequents and the rule set for symbolic execution of the focus modality.
//
// A focus formula has the shape {U}[p]phi (the update may be empty) and is
// the leftmost such formula in the succedent. Every rule is a pure function
// from a conclusion sequent to its premisses.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopdl/fragment.hpp"
#include "loopdl/logic.hpp"

namespace loopdl::calculus {

using logic::FormulaPtr;
using logic::Update;

using TypeMap = std::map<std::string, lang::Type>;

struct Sequent {
  std::vector<FormulaPtr> ante;
  std::vector<FormulaPtr> succ;
  /// Types of every program variable the sequent may mention, including
  /// fresh variables introduced by rules.
  std::shared_ptr<const TypeMap> types;
};

std::string print(const Sequent& s);

/// {U}[p]phi split into its parts.
struct Focus {
  std::size_t index = 0;  // position in the succedent
  Update update;
  lang::StmtList program;
  FormulaPtr post;
};

std::optional<Focus> find_focus(const Sequent& s);

/// Replaces the focus formula with {u}[program]post.
Sequent with_focus(const Sequent& s, const Focus& f, Update u, lang::StmtList program);

struct Premiss {
  Sequent sequent;
  /// The premiss starts from a fresh context instead of extending the
  /// conclusion's antecedent (second premiss of the invariant rules).
  bool fresh_context = false;
};

struct RuleApp {
  std::string rule;
  std::vector<std::pair<std::string, std::string>> inst;  // instantiation record
  std::vector<Premiss> premisses;
};

/// One step on a non-loop active statement (or on an exhausted program).
/// Throws NotApplicable when the active statement is a loop, Error when the
/// succedent has no focus.
RuleApp symbolic_step(const Sequent& s);

/// Names of the symbolic_step rules whose side conditions hold; exactly one
/// for any focus whose active statement is not a loop.
std::vector<std::string> matching_step_rules(const Sequent& s);

/// unwindWhileLoop, unwindDoLoop or unwindForLoop.
RuleApp unwind_loop(const Sequent& s);
RuleApp pull_out_initializer(const Sequent& s);
RuleApp transform_do_to_while(const Sequent& s);
/// loopInvariantWhile or loopInvariantFor.
RuleApp apply_loop_invariant(const Sequent& s, const FormulaPtr& inv);

/// The active loop of the focus, if any.
const lang::Stmt* focus_loop(const Sequent& s);

/// `throw 0 / 0;`, the form a statement takes once its evaluation is known
/// to divide by zero.
bool is_division_throw(const lang::Stmt& s);

struct RuleInfo {
  std::string name;
  int premisses;
  std::string schema;
  std::string origin;
};

const std::vector<RuleInfo>& rule_catalog();
const RuleInfo* find_rule(const std::string& name);

}  // namespace loopdl::calculus
