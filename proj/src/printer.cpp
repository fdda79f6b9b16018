#include "loopdl/printer.hpp"

#include <sstream>

namespace loopdl::lang {

namespace {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Implies: return 1;
    case BinaryOp::Or: return 2;
    case BinaryOp::And: return 3;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 4;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 5;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 6;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 7;
  }
  return 0;
}

constexpr int kUnaryPrec = 8;

int precedence(const Expr& e) {
  if (auto* b = std::get_if<Binary>(&e.node)) return precedence(b->op);
  if (std::holds_alternative<Unary>(e.node)) return kUnaryPrec;
  return 9;
}

void emit(std::ostream& os, const Expr& e, int min_prec);

void emit_operand(std::ostream& os, const Expr& e, int min_prec) {
  if (precedence(e) < min_prec) {
    os << '(';
    emit(os, e, 0);
    os << ')';
  } else {
    emit(os, e, min_prec);
  }
}

void emit(std::ostream& os, const Expr& e, int /*min_prec*/) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          os << n.value;
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, VarRef>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, Unary>) {
          os << to_string(n.op);
          // "-3" would reparse as a literal and "--x" is fine, but "- -3"
          // must keep the literal separate from the operator.
          const auto* lit = std::get_if<IntLit>(&n.operand->node);
          if (n.op == UnaryOp::Neg && lit && lit->value >= Int(0)) {
            os << '(' << lit->value << ')';
          } else {
            emit_operand(os, *n.operand, kUnaryPrec);
          }
        } else {
          const int p = precedence(n.op);
          const bool right_assoc = n.op == BinaryOp::Implies;
          emit_operand(os, *n.lhs, right_assoc ? p + 1 : p);
          os << ' ' << to_string(n.op) << ' ';
          emit_operand(os, *n.rhs, right_assoc ? p : p + 1);
        }
      },
      e.node);
}

class StmtPrinter {
public:
  explicit StmtPrinter(const PrintOptions& opt) : opt_(opt) {}

  std::string take() { return os_.str(); }

  void list(const StmtList& body, int depth) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i > 0) newline(depth);
      stmt(*body[i], depth, false);
    }
  }

  // Prints "{ ... }" with the opening brace on the current line.
  void braced(const StmtList& body, int depth) {
    if (body.empty()) {
      os_ << "{ }";
      return;
    }
    os_ << '{';
    newline(depth + 1);
    list(body, depth + 1);
    newline(depth);
    os_ << '}';
  }

  // `closed`: the statement is followed by an else belonging to an outer if,
  // so a trailing else-less if must print its `else ;`.
  void stmt(const Stmt& s, int depth, bool closed) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Skip>) {
            os_ << ';';
          } else if constexpr (std::is_same_v<T, Assign>) {
            os_ << n.target << " = " << print(*n.value) << ';';
          } else if constexpr (std::is_same_v<T, LocalDecl>) {
            os_ << to_string(n.type) << ' ' << n.name << " = " << print(*n.init) << ';';
          } else if constexpr (std::is_same_v<T, Block>) {
            label(n.label);
            braced(n.body, depth);
          } else if constexpr (std::is_same_v<T, If>) {
            os_ << "if (" << print(*n.cond) << ')';
            const bool has_else =
                n.else_branch && !std::holds_alternative<Skip>(n.else_branch->node);
            if (has_else || closed) {
              branch(*n.then_branch, depth, true);
              if (is_block(*n.then_branch)) {
                os_ << ' ';
              } else {
                newline(depth);
              }
              os_ << "else";
              if (!has_else) {
                os_ << " ;";
              } else if (std::holds_alternative<If>(n.else_branch->node)) {
                os_ << ' ';
                stmt(*n.else_branch, depth, closed);
              } else {
                branch(*n.else_branch, depth, closed);
              }
            } else {
              branch(*n.then_branch, depth, false);
            }
          } else if constexpr (std::is_same_v<T, While>) {
            label(n.label);
            os_ << "while (" << print(*n.cond) << ')';
            branch(*n.body, depth, closed);
          } else if constexpr (std::is_same_v<T, DoWhile>) {
            label(n.label);
            os_ << "do";
            branch(*n.body, depth, false);
            if (is_block(*n.body)) {
              os_ << ' ';
            } else {
              newline(depth);
            }
            os_ << "while (" << print(*n.cond) << ");";
          } else if constexpr (std::is_same_v<T, For>) {
            label(n.label);
            os_ << "for (";
            for_init(n.init);
            os_ << ';';
            if (n.guard) os_ << ' ' << print(*n.guard);
            os_ << ';';
            for (std::size_t i = 0; i < n.update.size(); ++i) {
              os_ << (i ? ", " : " ") << n.update[i].target << " = " << print(*n.update[i].value);
            }
            os_ << ')';
            branch(*n.body, depth, closed);
          } else if constexpr (std::is_same_v<T, Break>) {
            os_ << "break" << (n.label ? " " + *n.label : "") << ';';
          } else if constexpr (std::is_same_v<T, Continue>) {
            os_ << "continue" << (n.label ? " " + *n.label : "") << ';';
          } else if constexpr (std::is_same_v<T, Return>) {
            os_ << "return";
            if (n.value) os_ << ' ' << print(*n.value);
            os_ << ';';
          } else if constexpr (std::is_same_v<T, Throw>) {
            os_ << "throw " << print(*n.value) << ';';
          } else if constexpr (std::is_same_v<T, Try>) {
            os_ << "try ";
            braced(n.body, depth);
            if (n.handler) {
              os_ << " catch (" << (n.handler->throwable_syntax ? "Throwable " : "int ")
                  << n.handler->binder << ") ";
              braced(n.handler->body, depth);
            }
            if (n.finalizer) {
              os_ << " finally ";
              braced(*n.finalizer, depth);
            }
          } else if constexpr (std::is_same_v<T, Attempt>) {
            os_ << "attempt ";
            if (n.label) os_ << *n.label << ": ";
            braced(n.body, depth);
            os_ << " continuation ";
            braced(n.continuation, depth);
          } else {
            os_ << "halt;";
          }
        },
        s.node);
  }

private:
  static bool is_block(const Stmt& s) {
    const auto* b = std::get_if<Block>(&s.node);
    return b && !b->label;
  }

  void label(const Label& l) {
    if (l) os_ << *l << ": ";
  }

  // Nested statement of if/while/for/do: blocks stay on the same line, any
  // other statement goes on its own indented line.
  void branch(const Stmt& s, int depth, bool closed) {
    if (is_block(s)) {
      os_ << ' ';
      stmt(s, depth, closed);
      return;
    }
    newline(depth + 1);
    stmt(s, depth + 1, closed);
  }

  void for_init(const StmtList& init) {
    std::optional<Type> decl_type;
    for (std::size_t i = 0; i < init.size(); ++i) {
      if (i) os_ << ", ";
      if (auto* d = std::get_if<LocalDecl>(&init[i]->node)) {
        if (decl_type != d->type) os_ << to_string(d->type) << ' ';
        decl_type = d->type;
        os_ << d->name << " = " << print(*d->init);
      } else {
        const auto& a = std::get<Assign>(init[i]->node);
        os_ << a.target << " = " << print(*a.value);
      }
    }
  }

  void newline(int depth) {
    if (opt_.one_line) {
      os_ << ' ';
      return;
    }
    os_ << '\n' << std::string(static_cast<std::size_t>(depth * opt_.indent), ' ');
  }

  const PrintOptions& opt_;
  std::ostringstream os_;
};

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream os;
  emit(os, e, 0);
  return os.str();
}

std::string print(const ExprPtr& e) { return e ? print(*e) : std::string(); }

std::string print(const Stmt& s, const PrintOptions& opt) {
  StmtPrinter p(opt);
  p.stmt(s, 0, false);
  return p.take();
}

std::string print(const StmtList& body, const PrintOptions& opt) {
  StmtPrinter p(opt);
  p.list(body, 0);
  return p.take();
}

std::string print(const Fragment& f, const PrintOptions& opt) {
  std::string out;
  const bool header = opt.params == PrintOptions::Params::Always ||
                      (opt.params == PrintOptions::Params::Auto && f.explicit_params);
  if (header) {
    out = "params (";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out += ", ";
      out += std::string(to_string(f.params[i].type)) + " " + f.params[i].name;
    }
    out += ");";
    if (!f.body.empty()) out += opt.one_line ? " " : "\n";
  }
  out += print(f.body, opt);
  return out;
}

}  // namespace loopdl::lang
