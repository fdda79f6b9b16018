#pragma once

// Concrete big-step interpreter with explicit completion reasons.
//
// The state is flat: a declaration behaves like an assignment to a slot that
// stays bound after its block ends. Programs are compiled once against a
// variable table and then run many times over slot vectors.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "loopdl/ast.hpp"

namespace loopdl::interp {

/// Unset slots hold monostate.
using Value = std::variant<std::monostate, Int, bool>;

std::string to_string(const Value& v);
inline bool is_set(const Value& v) { return !std::holds_alternative<std::monostate>(v); }

struct Completion {
  enum class Kind { Normal, Break, Continue, Return, Thrown, Halt };
  Kind kind = Kind::Normal;
  lang::Label label;       // Break, Continue
  Value value;             // Return (may be unset), Thrown
  bool div_by_zero = false;  // Thrown by a division or modulus by zero

  bool abrupt() const { return kind != Kind::Normal; }
  static Completion normal() { return {}; }
  static Completion halt() { return {Kind::Halt, std::nullopt, {}, false}; }
  static Completion brk(lang::Label l = std::nullopt) { return {Kind::Break, std::move(l), {}, false}; }
  static Completion cont(lang::Label l = std::nullopt) {
    return {Kind::Continue, std::move(l), {}, false};
  }
};

bool operator==(const Completion& a, const Completion& b);
/// "normal", "break", "break l", "continue l", "return", "return 3",
/// "thrown 5", "thrown div_by_zero", "halt".
std::string to_string(const Completion& c);

/// A set of labels, either finite or cofinite.
struct LabelSet {
  bool cofinite = false;
  std::set<std::string> names;  // members, or non-members when cofinite

  static LabelSet none() { return {}; }
  static LabelSet all() { return {true, {}}; }
  static LabelSet only(std::string l) { return {false, {std::move(l)}}; }
  static LabelSet all_except(std::string l) { return {true, {std::move(l)}}; }
  bool contains(const std::string& l) const { return cofinite != (names.count(l) > 0); }
  bool is_empty() const { return !cofinite && names.empty(); }
};

/// A set of completion types. Return and thrown cover every value.
struct CompletionSet {
  bool normal = false;
  bool brk = false;   // unlabeled break
  bool cont = false;  // unlabeled continue
  LabelSet brk_labels;
  LabelSet cont_labels;
  bool ret = false;
  bool thrown = false;
  bool halt = false;

  bool contains(const Completion& c) const;

  static CompletionSet normal_only();
  static CompletionSet halt_only();
  static CompletionSet break_unlabeled();
  static CompletionSet continue_unlabeled();
  static CompletionSet break_label(const std::string& l);
  static CompletionSet continue_label(const std::string& l);
  static CompletionSet return_only();
  static CompletionSet thrown_only();
  /// All break/continue types, labeled or not.
  static CompletionSet abrupt_jumps();
  /// Every completion type except halt: normal, all jumps, return, thrown.
  static CompletionSet all_but_halt();
  /// {break, break_l}
  static CompletionSet breaking(const lang::Label& l);
  /// {normal, continue, continue_l}
  static CompletionSet continuing(const lang::Label& l);
  CompletionSet operator|(const CompletionSet& o) const;
  /// Everything in this set except the given completion type.
  CompletionSet minus(const Completion& c) const;

  std::string str() const;
};

/// Variable names with their types, in slot order.
class VarTable {
public:
  int index(const std::string& name) const;  // -1 when absent
  int add(const std::string& name, lang::Type type);  // existing slot if present
  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  lang::Type type(std::size_t i) const { return types_[i]; }
  const std::vector<std::string>& names() const { return names_; }

  /// Parameters first (in order), then locals and binders in order of
  /// appearance.
  static VarTable for_fragment(const lang::Fragment& f);
  void add_all(const lang::Fragment& f);

private:
  std::vector<std::string> names_;
  std::vector<lang::Type> types_;
};

using State = std::vector<Value>;

struct StateHash {
  std::size_t operator()(const State& s) const;
};

struct Outcome {
  bool budget_exhausted = false;
  Completion reason;
  State state;
};

constexpr std::int64_t kDefaultBudget = 100000;

namespace detail {
struct CStmt;
}

/// A statement list compiled against a variable table. Immutable; cheap to
/// copy; safe to run concurrently.
class Program {
public:
  Program() = default;
  /// Every variable of `body` must be present in `vars`.
  static Program compile(const lang::StmtList& body, const VarTable& vars);

  /// Runs from `start` (sized like the table). Each executed statement and
  /// each loop guard check costs one step.
  Outcome run(const State& start, std::int64_t budget = kDefaultBudget) const;

private:
  std::shared_ptr<const std::vector<std::unique_ptr<detail::CStmt>>> body_;
  std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Expression evaluation against a slot state: a value, or a thrown
/// division-by-zero.
struct EvalResult {
  bool div_by_zero = false;
  Value value;
};
EvalResult eval_expr(const lang::Expr& e, const VarTable& vars, const State& s);

// Name-keyed convenience layer used by the command line and tests.

using NamedState = std::map<std::string, Value>;

struct NamedOutcome {
  bool budget_exhausted = false;
  Completion reason;
  NamedState state;  // only variables holding a value
};

State to_slots(const NamedState& named, const VarTable& vars);
NamedState to_named(const State& s, const VarTable& vars);

EvalResult eval_expr(const lang::Expr& e, const NamedState& s);

/// Runs a fragment. Every parameter must be bound in `start` with a value of
/// its type; other names are rejected. Throws ConfigError.
NamedOutcome exec(const lang::Fragment& f, const NamedState& start,
                  std::int64_t budget = kDefaultBudget);

enum class Tri { False, True, Unknown };
const char* to_string(Tri t);

/// ⟦p⟧_S post at one state: true when the run ends with a reason outside S,
/// or inside S in a state satisfying post; unknown on budget exhaustion.
Tri holds_modality(const lang::Fragment& p, const CompletionSet& types,
                   const std::function<bool(const NamedState&)>& post, const NamedState& s,
                   std::int64_t budget = kDefaultBudget);

}  // namespace loopdl::interp
