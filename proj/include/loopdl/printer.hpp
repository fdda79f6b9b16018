#pragma once

#include <string>

#include "loopdl/ast.hpp"

namespace loopdl::lang {

struct PrintOptions {
  bool one_line = false;  // single line, statements separated by spaces
  int indent = 2;
  /// Emit a `params (...);` header. Defaults to following Fragment::explicit_params.
  enum class Params { Auto, Always, Never } params = Params::Auto;
};

/// Minimal parenthesization; the output reparses to an equal expression.
std::string print(const Expr& e);
std::string print(const ExprPtr& e);

/// Canonical text for statements. The output reparses to a structurally equal
/// AST; a missing else is printed as `else ;` only where needed to keep a
/// following else attached to the right if.
std::string print(const Stmt& s, const PrintOptions& opt = {});
std::string print(const StmtList& body, const PrintOptions& opt = {});
std::string print(const Fragment& f, const PrintOptions& opt = {});

inline std::string print_line(const StmtList& body) {
  PrintOptions opt;
  opt.one_line = true;
  return print(body, opt);
}

}  // namespace loopdl::lang
