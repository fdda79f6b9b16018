#pragma once

// Terms, first-order formulas with box modalities, and updates.
//
// Terms are total: n / 0 and n % 0 denote 0. Smart constructors fold
// constants and apply a few cheap arithmetic normalizations, so terms built
// through them stay small under repeated update application.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loopdl/ast.hpp"
#include "loopdl/interp.hpp"

namespace loopdl::logic {

using lang::BinaryOp;
using lang::UnaryOp;
using interp::Value;

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class K { Int, Bool, Var, Neg, Not, Bin, Ite };
  K k = K::Int;
  Int ival;
  bool bval = false;
  std::string name;
  BinaryOp op = BinaryOp::Add;  // Bin; never Implies
  TermPtr a, b, c;              // operands; Ite is (a ? b : c)
};

TermPtr t_int(Int v);
TermPtr t_bool(bool v);
TermPtr t_var(std::string name);
TermPtr t_neg(TermPtr a);
TermPtr t_not(TermPtr a);
TermPtr t_bin(BinaryOp op, TermPtr a, TermPtr b);
TermPtr t_ite(TermPtr c, TermPtr a, TermPtr b);
/// The binary node exactly as given, without simplification.
TermPtr t_raw(BinaryOp op, TermPtr a, TermPtr b);

/// Program expression as a term. Division keeps its total reading here; the
/// calculus handles program-level division by zero separately.
TermPtr term_of(const lang::Expr& e);

/// Boolean term that holds exactly when evaluating `e` raises no division by
/// zero (respecting short-circuit evaluation).
TermPtr definedness(const lang::Expr& e);
bool has_division(const lang::Expr& e);

bool equal(const TermPtr& a, const TermPtr& b);
bool is_true(const TermPtr& t);
bool is_false(const TermPtr& t);
std::string print(const TermPtr& t);

/// Flat parallel update: at most one binding per target, in first-occurrence
/// order. Identity bindings (x := x) are dropped.
class Update {
public:
  Update() = default;
  static Update elementary(std::string target, TermPtr value);

  const std::vector<std::pair<std::string, TermPtr>>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  const TermPtr* find(const std::string& target) const;

  /// u1 || u2, rightmost binding wins.
  static Update parallel(const Update& u1, const Update& u2);

  std::string str() const;  // "{x := 1 || y := 1}", "{}" when empty

private:
  void bind(const std::string& target, TermPtr value);
  std::vector<std::pair<std::string, TermPtr>> bindings_;
};

bool equal(const Update& a, const Update& b);

/// {U}t: simultaneous substitution, then folding.
TermPtr apply(const Update& u, const TermPtr& t);
/// Simultaneous substitution only; the term keeps its shape.
TermPtr substitute(const Update& u, const TermPtr& t);
/// Rebuilds a term through the simplifying constructors.
TermPtr simplify(const TermPtr& t);
/// {outer}inner as one update: outer || (inner with values rewritten by outer).
Update compose(const Update& outer, const Update& inner);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class K { True, False, Atom, Not, And, Or, Implies, Box, Upd };
  K k = K::True;
  TermPtr atom;         // Atom: boolean term
  FormulaPtr a, b;      // connective operands; Box post; Upd target
  lang::StmtList program;  // Box
  Update update;           // Upd
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_atom(TermPtr t);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_box(lang::StmtList program, FormulaPtr post);
/// {U}f; an empty update returns f, and nested applications merge.
FormulaPtr f_upd(Update u, FormulaPtr f);

/// {U}f pushed through connectives and substituted into atoms without
/// folding, so {x := 1}(x != 0) reads 1 != 0. Boxes keep the application node.
FormulaPtr apply(const Update& u, const FormulaPtr& f);
/// Folds constants in atoms and connectives; modalities are kept, with their
/// postconditions simplified.
FormulaPtr simplify(const FormulaPtr& f);

bool has_modality(const FormulaPtr& f);
bool equal(const FormulaPtr& a, const FormulaPtr& b);
std::string print(const FormulaPtr& f);

/// Annotation formula text: boolean program expressions plus `->`.
/// Throws ParseError.
FormulaPtr parse_formula(std::string_view text);
/// Converts boolean connectives at the top of an expression into formula
/// connectives; the leaves become atoms.
FormulaPtr formula_of(const lang::Expr& e);

void free_vars(const TermPtr& t, std::set<std::string>& out);
/// Program variables of atoms and programs, and update targets and values.
void free_vars(const FormulaPtr& f, std::set<std::string>& out);

/// Classical evaluation of a modality-free formula. Throws Error on a
/// modality, an update node, or an unbound variable.
bool eval_formula(const FormulaPtr& f, const interp::NamedState& s);
Value eval_term(const TermPtr& t, const interp::NamedState& s);

/// A modality-free formula compiled against a variable table, for fast
/// repeated evaluation.
class CompiledFormula {
public:
  CompiledFormula() = default;
  static CompiledFormula compile(const FormulaPtr& f, const interp::VarTable& vars);
  bool eval(const interp::State& s) const;

  struct Node;

private:
  std::shared_ptr<const Node> root_;
};

}  // namespace loopdl::logic
