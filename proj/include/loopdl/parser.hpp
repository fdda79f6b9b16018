#pragma once

#include <map>
#include <string>
#include <string_view>

#include "loopdl/ast.hpp"

namespace loopdl::lang {

struct ParseOptions {
  /// Accept `attempt ... continuation ...` and `halt;`. Plain-source mode
  /// turns this off.
  bool allow_extended = true;
  /// Let labeled break/continue name labels with no enclosing binder. Used
  /// for fragments that are pieces of a larger program.
  bool allow_free_labels = false;
};

/// Parses and statically checks a fragment. Without a `params (...)` header,
/// every variable used before any declaration becomes an implicit int
/// parameter, in order of first use. Throws ParseError.
Fragment parse_fragment(std::string_view text, const ParseOptions& options = {});

/// Parses a single expression; `->` is accepted only when allow_implies is set.
ExprPtr parse_expression(std::string_view text, bool allow_implies = false);

/// Runs the static checks on an already built fragment: label binding,
/// declaration before use, one type per variable name, expression typing.
/// May append implicit parameters. Throws ParseError.
void check_fragment(Fragment& fragment, const ParseOptions& options = {});

/// Every variable of the fragment (parameters, locals, catch binders) with its
/// type.
std::map<std::string, Type> variable_types(const Fragment& fragment);

}  // namespace loopdl::lang
