#pragma once

// Abstract syntax of the mini-language: pure expressions and Java-like
// statements, plus the two extended statements (attempt-continuation, halt).
// Nodes are immutable and shared; rewriting builds new spines.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loopdl/int.hpp"

namespace loopdl::lang {

struct SourcePos {
  int line = 0;
  int column = 0;
};

enum class Type { Int, Bool };

enum class UnaryOp { Neg, Not };

// Implies only occurs in annotation formulas; the program checker rejects it.
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Implies };

const char* to_string(Type t);
const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLit {
  Int value;
};
struct BoolLit {
  bool value;
};
struct VarRef {
  std::string name;
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<IntLit, BoolLit, VarRef, Unary, Binary> node;
  SourcePos pos;
};

ExprPtr int_lit(Int v, SourcePos pos = {});
ExprPtr bool_lit(bool v, SourcePos pos = {});
ExprPtr var(std::string name, SourcePos pos = {});
ExprPtr unary(UnaryOp op, ExprPtr operand, SourcePos pos = {});
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;
using StmtList = std::vector<StmtPtr>;
using Label = std::optional<std::string>;

struct Skip {};
struct Assign {
  std::string target;
  ExprPtr value;
};
struct LocalDecl {
  Type type;
  std::string name;
  ExprPtr init;
};
struct Block {
  Label label;
  StmtList body;
};
/// A missing else branch behaves as `else ;`.
struct If {
  ExprPtr cond;
  StmtPtr then_branch;
  StmtPtr else_branch;  // may be null
};
struct While {
  Label label;
  ExprPtr cond;
  StmtPtr body;
};
struct DoWhile {
  Label label;
  StmtPtr body;
  ExprPtr cond;
};
struct For {
  Label label;
  StmtList init;        // LocalDecl or Assign entries
  ExprPtr guard;        // null when empty
  std::vector<Assign> update;
  StmtPtr body;
};
struct Break {
  Label label;
};
struct Continue {
  Label label;
};
struct Return {
  ExprPtr value;  // may be null
};
struct Throw {
  ExprPtr value;
};
struct CatchClause {
  bool throwable_syntax = false;  // written `catch (Throwable t)` rather than `catch (int t)`
  std::string binder;
  StmtList body;
};
struct Try {
  StmtList body;
  std::optional<CatchClause> handler;
  std::optional<StmtList> finalizer;
};
struct Attempt {
  Label label;
  StmtList body;
  StmtList continuation;
};
struct Halt {};

struct Stmt {
  std::variant<Skip, Assign, LocalDecl, Block, If, While, DoWhile, For, Break, Continue,
               Return, Throw, Try, Attempt, Halt>
      node;
  SourcePos pos;
  /// Number of unwindings that produced this loop copy. Not part of the syntax.
  int unrolled = 0;
};

template <class T>
StmtPtr make_stmt(T node, SourcePos pos = {}, int unrolled = 0) {
  return std::make_shared<const Stmt>(Stmt{std::move(node), pos, unrolled});
}

StmtPtr skip(SourcePos pos = {});
StmtPtr assign(std::string target, ExprPtr value, SourcePos pos = {});
StmtPtr decl(Type type, std::string name, ExprPtr init, SourcePos pos = {});
StmtPtr block(StmtList body, Label label = std::nullopt, SourcePos pos = {});
StmtPtr if_stmt(ExprPtr cond, StmtPtr then_branch, StmtPtr else_branch = nullptr,
                SourcePos pos = {});
StmtPtr while_stmt(ExprPtr cond, StmtPtr body, Label label = std::nullopt, SourcePos pos = {});
StmtPtr break_stmt(Label label = std::nullopt);
StmtPtr continue_stmt(Label label = std::nullopt);
StmtPtr return_stmt(ExprPtr value = nullptr);
StmtPtr throw_stmt(ExprPtr value);
StmtPtr attempt(StmtList body, StmtList continuation, Label label = std::nullopt,
                SourcePos pos = {});
StmtPtr halt();

struct Param {
  Type type;
  std::string name;
};

/// A legal program fragment: statements over declared parameters.
struct Fragment {
  std::vector<Param> params;
  bool explicit_params = false;  // written with a `params (...)` header
  StmtList body;
};

bool is_loop(const Stmt& s);
const Label* loop_label(const Stmt& s);
bool is_extended(const Stmt& s);  // attempt or halt, not nested search

// Structural equality: ignores positions and unwinding metadata, and treats a
// missing else branch as `else ;`.
bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const StmtPtr& a, const StmtPtr& b);
bool equal(const StmtList& a, const StmtList& b);
bool equal(const Fragment& a, const Fragment& b);

}  // namespace loopdl::lang
