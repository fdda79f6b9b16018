#pragma once

// Structural operations on fragments: splitting into non-active prefix,
// active statement and rest; fresh names; and the program-level loop
// transformations shared by the calculus and the command line.

#include <set>
#include <string>
#include <vector>

#include "loopdl/ast.hpp"

namespace loopdl::lang {

/// One opening of the non-active prefix. `after` holds the statements that
/// follow the composite statement in its enclosing list.
struct PrefixFrame {
  enum class Kind { Block, Try, Attempt };
  Kind kind = Kind::Block;
  Label label;                          // Block, Attempt
  std::optional<CatchClause> handler;   // Try
  std::optional<StmtList> finalizer;    // Try
  StmtList continuation;                // Attempt
  StmtList after;
  SourcePos pos;
  int unrolled = 0;
};

/// π st ω. `frames` runs outermost first. `active` is null when the innermost
/// opening has an empty body (or the whole fragment is empty); `rest` is what
/// follows the active statement inside the innermost opening.
struct Decomposition {
  std::vector<PrefixFrame> frames;
  StmtPtr active;
  StmtList rest;

  bool empty() const { return frames.empty() && !active; }
};

/// Descends through leading blocks, try bodies and attempt bodies until the
/// first statement is none of those.
Decomposition decompose(const StmtList& body);

StmtList reassemble(const Decomposition& d);

/// Prefix, active and rest as display strings, e.g. ("l: {", "y = x;",
/// "break l; }").
struct DecompositionText {
  std::string prefix;
  std::string active;
  std::string rest;
};
DecompositionText describe(const Decomposition& d);

/// Every name occurring in the statements: variables, labels, catch binders.
std::set<std::string> identifiers(const StmtList& body);
std::set<std::string> identifiers(const Fragment& f);

/// Variables read or written by an expression.
void collect_variables(const Expr& e, std::set<std::string>& out);

/// hint, hint_1, hint_2, ... : the first one not in `taken`.
std::string fresh_name(const std::set<std::string>& taken, const std::string& hint);
std::string fresh_flag(const Fragment& f, const std::string& hint);

/// Assignments of a for update (or init) as a statement list, in order.
StmtList statement_equivalents(const std::vector<Assign>& update);
/// The guard of a for loop as an expression; `true` when empty.
ExprPtr guard_equivalent(const ExprPtr& guard);

/// The body of a loop as a statement list: an unlabeled block contributes its
/// statements, anything else is a one-element list.
StmtList body_list(const StmtPtr& body);

// One-step loop transformations. The reintroduced loop copy keeps the source
// position and carries unrolled + 1.

/// `l?: while (e) p` to `if (e) attempt l? { p } continuation { l?: while (e) p }`.
StmtPtr unwind_while(const Stmt& loop);
/// `l?: do p while (e);` to `attempt l? { p } continuation { l?: while (e) p }`.
StmtPtr unwind_do(const Stmt& loop);
/// `l?: for (; g; upd) p` to
/// `if (g') attempt l? { p } continuation { upd' l?: for (; g; upd) p }`.
/// Throws NotApplicable on a non-empty initializer.
StmtPtr unwind_for(const Stmt& loop);
/// Dispatches on the loop kind.
StmtPtr unwind_loop(const Stmt& loop);

/// `l?: for (init; g; upd) p` to `{ init' l?: for (; g; upd) p }`.
/// Throws NotApplicable on an empty initializer.
StmtPtr pull_out_initializer(const Stmt& loop);

/// `l?: do p while (e);` to `l?: while (fst || e) { fst = false; p }`.
StmtPtr do_to_while(const Stmt& loop, const std::string& fst);

/// Unwinds the loop whose header starts on `line` k times (pulling out a for
/// initializer first). Throws ConfigError if no loop starts on that line.
Fragment unwind_at(const Fragment& f, int line, int k);

/// Finds the first loop (preorder) whose header starts on `line`.
const Stmt* find_loop_at(const StmtList& body, int line);

}  // namespace loopdl::lang
