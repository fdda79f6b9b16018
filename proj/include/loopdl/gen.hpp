#pragma once

// Random program generation for the differential harness and the property
// tests.
//
// Every loop is guarded by `k > 0 && g` and decrements k at the start of
// each iteration, where k is a counter parameter that no other statement
// assigns. Generated programs therefore always terminate.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "loopdl/ast.hpp"
#include "loopdl/logic.hpp"

namespace loopdl::gen {

struct GenOptions {
  std::vector<std::string> vars = {"x", "y"};  // assignable int parameters
  std::string counter = "k";
  int depth = 2;    // statement nesting
  int max_len = 3;  // statements per list
  bool loops = true;
  bool tries = true;
  bool attempts = true;
  bool halts = false;
  bool returns = true;
  bool throws = true;
  bool division = true;
  /// Labels that jumps may name although no enclosing statement binds them.
  std::vector<std::string> free_labels;
};

class Generator {
public:
  Generator(std::uint64_t seed, GenOptions opt);

  int pick(int n);
  bool chance(int percent);

  lang::ExprPtr int_expr(int depth);
  /// Division-free unless the options allow division.
  lang::ExprPtr bool_expr(int depth);
  lang::ExprPtr pure_bool_expr(int depth);  // never divides
  logic::FormulaPtr formula();

  lang::StmtPtr stmt(int depth);
  lang::StmtList stmts(int depth, int min_len = 1);

  /// `while`, `do` or `for` loop of the counter-guarded shape; `kind` is 0,
  /// 1 or 2, or -1 for a random choice.
  lang::StmtPtr loop(int depth, lang::Label label = std::nullopt, int kind = -1);

  /// Parameters: the assignable variables, then the counter.
  std::vector<lang::Param> params() const;
  lang::Fragment fragment(lang::StmtList body) const;

  std::mt19937_64& rng() { return rng_; }
  const GenOptions& options() const { return opt_; }

  /// A label not bound by any enclosing statement and not free.
  std::string fresh_label();

  struct Frame {
    enum class Kind { Block, Loop, Attempt } kind;
    lang::Label label;
  };
  /// Enclosing statements; callers building a context by hand may push here.
  std::vector<Frame> frames;

private:
  lang::StmtPtr jump();
  lang::ExprPtr guard();
  lang::StmtList counted_body(int depth);
  std::string binder();

  std::mt19937_64 rng_;
  GenOptions opt_;
  int binders_ = 0;
  std::vector<std::string> binders_in_scope_;
};

/// True when the statement list contains a statement of the given kind
/// anywhere (break, continue, return, throw, halt).
bool contains_abrupt(const lang::StmtList& body);
bool contains_halt(const lang::StmtList& body);

}  // namespace loopdl::gen
