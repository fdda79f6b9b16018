#include "loopdl/ast.hpp"

namespace loopdl::lang {

const char* to_string(Type t) { return t == Type::Int ? "int" : "boolean"; }

const char* to_string(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "!"; }

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    case BinaryOp::Implies: return "->";
  }
  return "?";
}

ExprPtr int_lit(Int v, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{IntLit{std::move(v)}, pos});
}
ExprPtr bool_lit(bool v, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{BoolLit{v}, pos});
}
ExprPtr var(std::string name, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{VarRef{std::move(name)}, pos});
}
ExprPtr unary(UnaryOp op, ExprPtr operand, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{Unary{op, std::move(operand)}, pos});
}
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{Binary{op, std::move(lhs), std::move(rhs)}, pos});
}

StmtPtr skip(SourcePos pos) { return make_stmt(Skip{}, pos); }
StmtPtr assign(std::string target, ExprPtr value, SourcePos pos) {
  return make_stmt(Assign{std::move(target), std::move(value)}, pos);
}
StmtPtr decl(Type type, std::string name, ExprPtr init, SourcePos pos) {
  return make_stmt(LocalDecl{type, std::move(name), std::move(init)}, pos);
}
StmtPtr block(StmtList body, Label label, SourcePos pos) {
  return make_stmt(Block{std::move(label), std::move(body)}, pos);
}
StmtPtr if_stmt(ExprPtr cond, StmtPtr then_branch, StmtPtr else_branch, SourcePos pos) {
  return make_stmt(If{std::move(cond), std::move(then_branch), std::move(else_branch)}, pos);
}
StmtPtr while_stmt(ExprPtr cond, StmtPtr body, Label label, SourcePos pos) {
  return make_stmt(While{std::move(label), std::move(cond), std::move(body)}, pos);
}
StmtPtr break_stmt(Label label) { return make_stmt(Break{std::move(label)}); }
StmtPtr continue_stmt(Label label) { return make_stmt(Continue{std::move(label)}); }
StmtPtr return_stmt(ExprPtr value) { return make_stmt(Return{std::move(value)}); }
StmtPtr throw_stmt(ExprPtr value) { return make_stmt(Throw{std::move(value)}); }
StmtPtr attempt(StmtList body, StmtList continuation, Label label, SourcePos pos) {
  return make_stmt(Attempt{std::move(label), std::move(body), std::move(continuation)}, pos);
}
StmtPtr halt() { return make_stmt(Halt{}); }

bool is_loop(const Stmt& s) {
  return std::holds_alternative<While>(s.node) || std::holds_alternative<DoWhile>(s.node) ||
         std::holds_alternative<For>(s.node);
}

const Label* loop_label(const Stmt& s) {
  if (auto* w = std::get_if<While>(&s.node)) return &w->label;
  if (auto* d = std::get_if<DoWhile>(&s.node)) return &d->label;
  if (auto* f = std::get_if<For>(&s.node)) return &f->label;
  return nullptr;
}

bool is_extended(const Stmt& s) {
  return std::holds_alternative<Attempt>(s.node) || std::holds_alternative<Halt>(s.node);
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit> || std::is_same_v<T, BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return x.op == y.op && equal(x.operand, y.operand);
        } else {
          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        }
      },
      a.node);
}

namespace {

bool is_skip_or_null(const StmtPtr& s) {
  return !s || std::holds_alternative<Skip>(s->node);
}

bool equal_assign(const Assign& x, const Assign& y) {
  return x.target == y.target && equal(x.value, y.value);
}

}  // namespace

bool equal(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

bool equal(const StmtList& a, const StmtList& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equal(a[i], b[i])) return false;
  }
  return true;
}

bool equal(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Skip> || std::is_same_v<T, Halt>) {
          return true;
        } else if constexpr (std::is_same_v<T, Assign>) {
          return equal_assign(x, y);
        } else if constexpr (std::is_same_v<T, LocalDecl>) {
          return x.type == y.type && x.name == y.name && equal(x.init, y.init);
        } else if constexpr (std::is_same_v<T, Block>) {
          return x.label == y.label && equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, If>) {
          if (!equal(x.cond, y.cond) || !equal(x.then_branch, y.then_branch)) return false;
          if (is_skip_or_null(x.else_branch) && is_skip_or_null(y.else_branch)) return true;
          return equal(x.else_branch, y.else_branch);
        } else if constexpr (std::is_same_v<T, While>) {
          return x.label == y.label && equal(x.cond, y.cond) && equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, DoWhile>) {
          return x.label == y.label && equal(x.cond, y.cond) && equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, For>) {
          if (x.label != y.label || !equal(x.init, y.init) || !equal(x.guard, y.guard) ||
              !equal(x.body, y.body) || x.update.size() != y.update.size()) {
            return false;
          }
          for (std::size_t i = 0; i < x.update.size(); ++i) {
            if (!equal_assign(x.update[i], y.update[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Break> || std::is_same_v<T, Continue>) {
          return x.label == y.label;
        } else if constexpr (std::is_same_v<T, Return> || std::is_same_v<T, Throw>) {
          return equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, Try>) {
          if (!equal(x.body, y.body)) return false;
          if (x.handler.has_value() != y.handler.has_value()) return false;
          if (x.handler && (x.handler->binder != y.handler->binder ||
                            !equal(x.handler->body, y.handler->body))) {
            return false;
          }
          if (x.finalizer.has_value() != y.finalizer.has_value()) return false;
          return !x.finalizer || equal(*x.finalizer, *y.finalizer);
        } else {
          static_assert(std::is_same_v<T, Attempt>);
          return x.label == y.label && equal(x.body, y.body) &&
                 equal(x.continuation, y.continuation);
        }
      },
      a.node);
}

bool equal(const Fragment& a, const Fragment& b) {
  if (a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name || a.params[i].type != b.params[i].type) {
      return false;
    }
  }
  return equal(a.body, b.body);
}

}  // namespace loopdl::lang
