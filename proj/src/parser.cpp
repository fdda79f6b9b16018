#include "loopdl/parser.hpp"

#include <set>

#include "lexer.hpp"

namespace loopdl::lang {

using detail::Tok;
using detail::TokenStream;

namespace {

class Parser {
public:
  Parser(std::string_view text, bool allow_implies)
      : ts_(detail::tokenize(text)), allow_implies_(allow_implies) {}

  Fragment fragment() {
    Fragment f;
    if (ts_.accept("params")) {
      f.explicit_params = true;
      ts_.expect("(");
      if (!ts_.is(")")) {
        do {
          const Type t = type();
          f.params.push_back({t, ts_.expect_ident()});
        } while (ts_.accept(","));
      }
      ts_.expect(")");
      ts_.expect(";");
    }
    while (!ts_.at_end()) append_statement(f.body);
    return f;
  }

  ExprPtr full_expression() {
    auto e = expression();
    if (!ts_.at_end()) ts_.fail("unexpected trailing input");
    return e;
  }

private:
  Type type() {
    if (ts_.accept("int")) return Type::Int;
    if (ts_.accept("boolean")) return Type::Bool;
    ts_.fail("expected type");
  }

  bool at_type() const { return ts_.is("int") || ts_.is("boolean"); }

  // Statements that may expand to several list entries (multi-declarator
  // declarations) go through here.
  void append_statement(StmtList& out) {
    if (at_type()) {
      const SourcePos pos = ts_.peek().pos;
      const Type t = type();
      do {
        const SourcePos npos = ts_.peek().pos;
        std::string name = ts_.expect_ident();
        ts_.expect("=");
        out.push_back(decl(t, std::move(name), expression(), npos.line ? npos : pos));
      } while (ts_.accept(","));
      ts_.expect(";");
      return;
    }
    out.push_back(statement());
  }

  StmtPtr nested_statement() {
    if (at_type()) ts_.fail("declaration is not allowed as a nested statement");
    return statement();
  }

  StmtList braced_body() {
    ts_.expect("{");
    StmtList body;
    while (!ts_.is("}")) {
      if (ts_.at_end()) ts_.fail("expected '}'");
      append_statement(body);
    }
    ts_.expect("}");
    return body;
  }

  StmtPtr statement() {
    const SourcePos pos = ts_.peek().pos;
    if (ts_.peek().kind == Tok::Ident && ts_.is(":", 1)) {
      std::string label = ts_.next().text;
      ts_.next();
      return labeled(std::move(label), pos);
    }
    if (ts_.accept(";")) return skip(pos);
    if (ts_.is("{")) return block(braced_body(), std::nullopt, pos);
    if (ts_.is("while") || ts_.is("do") || ts_.is("for") || ts_.is("attempt")) {
      return labeled(std::nullopt, pos);
    }
    if (ts_.accept("if")) {
      ts_.expect("(");
      auto cond = expression();
      ts_.expect(")");
      auto then_branch = nested_statement();
      StmtPtr else_branch;
      if (ts_.accept("else")) else_branch = nested_statement();
      return if_stmt(std::move(cond), std::move(then_branch), std::move(else_branch), pos);
    }
    if (ts_.accept("break")) {
      Label l;
      if (ts_.peek().kind == Tok::Ident) l = ts_.next().text;
      ts_.expect(";");
      return make_stmt(Break{std::move(l)}, pos);
    }
    if (ts_.accept("continue")) {
      Label l;
      if (ts_.peek().kind == Tok::Ident) l = ts_.next().text;
      ts_.expect(";");
      return make_stmt(Continue{std::move(l)}, pos);
    }
    if (ts_.accept("return")) {
      ExprPtr value;
      if (!ts_.is(";")) value = expression();
      ts_.expect(";");
      return make_stmt(Return{std::move(value)}, pos);
    }
    if (ts_.accept("throw")) {
      auto value = expression();
      ts_.expect(";");
      return make_stmt(Throw{std::move(value)}, pos);
    }
    if (ts_.accept("try")) return try_statement(pos);
    if (ts_.accept("halt")) {
      ts_.expect(";");
      return make_stmt(Halt{}, pos);
    }
    if (ts_.peek().kind == Tok::Ident && ts_.is("=", 1)) {
      std::string target = ts_.next().text;
      ts_.next();
      auto value = expression();
      ts_.expect(";");
      return assign(std::move(target), std::move(value), pos);
    }
    ts_.fail("expected statement");
  }

  StmtPtr labeled(Label label, SourcePos pos) {
    if (ts_.is("{")) return block(braced_body(), std::move(label), pos);
    if (ts_.accept("while")) {
      ts_.expect("(");
      auto cond = expression();
      ts_.expect(")");
      return while_stmt(std::move(cond), nested_statement(), std::move(label), pos);
    }
    if (ts_.accept("do")) {
      auto body = nested_statement();
      ts_.expect("while");
      ts_.expect("(");
      auto cond = expression();
      ts_.expect(")");
      ts_.expect(";");
      return make_stmt(DoWhile{std::move(label), std::move(body), std::move(cond)}, pos);
    }
    if (ts_.accept("for")) return for_statement(std::move(label), pos);
    if (ts_.accept("attempt")) {
      if (ts_.peek().kind == Tok::Ident) {
        if (label) ts_.fail("attempt statement already has a label");
        label = ts_.next().text;
        ts_.accept(":");
      }
      auto body = braced_body();
      ts_.expect("continuation");
      auto cont = braced_body();
      return attempt(std::move(body), std::move(cont), std::move(label), pos);
    }
    ts_.fail("expected block, loop or attempt after label");
  }

  StmtPtr for_statement(Label label, SourcePos pos) {
    ts_.expect("(");
    For f;
    f.label = std::move(label);
    if (!ts_.is(";")) {
      if (at_type()) {
        const Type t = type();
        do {
          const SourcePos npos = ts_.peek().pos;
          std::string name = ts_.expect_ident();
          ts_.expect("=");
          f.init.push_back(decl(t, std::move(name), expression(), npos));
        } while (ts_.accept(","));
      } else {
        do {
          const SourcePos npos = ts_.peek().pos;
          std::string name = ts_.expect_ident();
          ts_.expect("=");
          f.init.push_back(assign(std::move(name), expression(), npos));
        } while (ts_.accept(","));
      }
    }
    ts_.expect(";");
    if (!ts_.is(";")) f.guard = expression();
    ts_.expect(";");
    if (!ts_.is(")")) {
      do {
        std::string name = ts_.expect_ident();
        ts_.expect("=");
        f.update.push_back(Assign{std::move(name), expression()});
      } while (ts_.accept(","));
    }
    ts_.expect(")");
    f.body = nested_statement();
    return make_stmt(std::move(f), pos);
  }

  StmtPtr try_statement(SourcePos pos) {
    Try t;
    t.body = braced_body();
    if (ts_.accept("catch")) {
      ts_.expect("(");
      CatchClause c;
      if (ts_.accept("Throwable")) {
        c.throwable_syntax = true;
      } else if (!ts_.accept("int")) {
        ts_.fail("expected 'int' or 'Throwable' in catch clause");
      }
      c.binder = ts_.expect_ident();
      ts_.expect(")");
      c.body = braced_body();
      t.handler = std::move(c);
    }
    if (ts_.accept("finally")) t.finalizer = braced_body();
    if (!t.handler && !t.finalizer) ts_.fail("try needs a catch or finally clause");
    return make_stmt(std::move(t), pos);
  }

  // Precedence climbing, loosest first: -> || && (== !=) (< <= > >=) (+ -) (* / %)
  ExprPtr expression() { return implication(); }

  ExprPtr implication() {
    auto lhs = disjunction();
    if (allow_implies_ && ts_.is("->")) {
      const SourcePos pos = ts_.next().pos;
      return binary(BinaryOp::Implies, std::move(lhs), implication(), pos);
    }
    return lhs;
  }

  ExprPtr disjunction() {
    auto lhs = conjunction();
    while (ts_.is("||")) {
      const SourcePos pos = ts_.next().pos;
      lhs = binary(BinaryOp::Or, std::move(lhs), conjunction(), pos);
    }
    return lhs;
  }

  ExprPtr conjunction() {
    auto lhs = equality();
    while (ts_.is("&&")) {
      const SourcePos pos = ts_.next().pos;
      lhs = binary(BinaryOp::And, std::move(lhs), equality(), pos);
    }
    return lhs;
  }

  ExprPtr equality() {
    auto lhs = relational();
    while (ts_.is("==") || ts_.is("!=")) {
      const auto& t = ts_.next();
      const BinaryOp op = t.text == "==" ? BinaryOp::Eq : BinaryOp::Ne;
      lhs = binary(op, std::move(lhs), relational(), t.pos);
    }
    return lhs;
  }

  ExprPtr relational() {
    auto lhs = additive();
    while (ts_.is("<") || ts_.is("<=") || ts_.is(">") || ts_.is(">=")) {
      const auto& t = ts_.next();
      BinaryOp op = BinaryOp::Lt;
      if (t.text == "<=") op = BinaryOp::Le;
      if (t.text == ">") op = BinaryOp::Gt;
      if (t.text == ">=") op = BinaryOp::Ge;
      lhs = binary(op, std::move(lhs), additive(), t.pos);
    }
    return lhs;
  }

  ExprPtr additive() {
    auto lhs = multiplicative();
    while (ts_.is("+") || ts_.is("-")) {
      const auto& t = ts_.next();
      const BinaryOp op = t.text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = binary(op, std::move(lhs), multiplicative(), t.pos);
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    auto lhs = prefix();
    while (ts_.is("*") || ts_.is("/") || ts_.is("%")) {
      const auto& t = ts_.next();
      BinaryOp op = BinaryOp::Mul;
      if (t.text == "/") op = BinaryOp::Div;
      if (t.text == "%") op = BinaryOp::Mod;
      lhs = binary(op, std::move(lhs), prefix(), t.pos);
    }
    return lhs;
  }

  ExprPtr prefix() {
    const SourcePos pos = ts_.peek().pos;
    if (ts_.accept("!")) return unary(UnaryOp::Not, prefix(), pos);
    if (ts_.accept("-")) {
      // Fold "-<digits>" into a negative literal so printing round-trips.
      if (ts_.peek().kind == Tok::Number) {
        return int_lit(-Int::parse(ts_.next().text), pos);
      }
      return unary(UnaryOp::Neg, prefix(), pos);
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = ts_.peek();
    if (t.kind == Tok::Number) {
      ts_.next();
      return int_lit(Int::parse(t.text), t.pos);
    }
    if (t.kind == Tok::Ident) {
      ts_.next();
      return var(t.text, t.pos);
    }
    if (ts_.accept("true")) return bool_lit(true, t.pos);
    if (ts_.accept("false")) return bool_lit(false, t.pos);
    if (ts_.accept("(")) {
      auto e = expression();
      ts_.expect(")");
      return e;
    }
    ts_.fail("expected expression");
  }

  using Token = detail::Token;
  TokenStream ts_;
  bool allow_implies_;
};

// ---------------------------------------------------------------------------
// Static checks

class Checker {
public:
  Checker(Fragment& f, const ParseOptions& opt) : f_(f), opt_(opt) {}

  void run() {
    scopes_.emplace_back();
    for (const auto& p : f_.params) declare(p.name, p.type, {1, 1});
    list(f_.body);
  }

private:
  enum class LabelKind { Block, Loop, Attempt };
  struct LabelFrame {
    std::string name;
    LabelKind kind;
  };

  [[noreturn]] static void fail(SourcePos pos, const std::string& msg) {
    throw ParseError(pos.line, pos.column, msg);
  }

  bool in_scope(const std::string& name) const {
    for (const auto& s : scopes_) {
      if (s.count(name)) return true;
    }
    return false;
  }

  void declare(const std::string& name, Type t, SourcePos pos) {
    if (in_scope(name)) fail(pos, "redeclaration of '" + name + "'");
    auto [it, inserted] = types_.emplace(name, t);
    if (!inserted && it->second != t) {
      fail(pos, "'" + name + "' declared with conflicting types");
    }
    scopes_.back().insert(name);
  }

  Type lookup(const std::string& name, SourcePos pos) {
    if (in_scope(name)) return types_.at(name);
    if (!f_.explicit_params) {
      auto [it, inserted] = types_.emplace(name, Type::Int);
      if (!inserted && it->second != Type::Int) {
        fail(pos, "'" + name + "' used outside the scope of its declaration");
      }
      f_.params.push_back({Type::Int, name});
      scopes_.front().insert(name);
      return Type::Int;
    }
    fail(pos, "use of undeclared variable '" + name + "'");
  }

  Type type_of(const Expr& e) {
    if (std::holds_alternative<IntLit>(e.node)) return Type::Int;
    if (std::holds_alternative<BoolLit>(e.node)) return Type::Bool;
    if (auto* v = std::get_if<VarRef>(&e.node)) return lookup(v->name, e.pos);
    if (auto* u = std::get_if<Unary>(&e.node)) {
      const Type want = u->op == UnaryOp::Neg ? Type::Int : Type::Bool;
      expect(*u->operand, want);
      return want;
    }
    const auto& b = std::get<Binary>(e.node);
    switch (b.op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
      case BinaryOp::Mod:
        expect(*b.lhs, Type::Int);
        expect(*b.rhs, Type::Int);
        return Type::Int;
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        expect(*b.lhs, Type::Int);
        expect(*b.rhs, Type::Int);
        return Type::Bool;
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        const Type lt = type_of(*b.lhs);
        expect(*b.rhs, lt);
        return Type::Bool;
      }
      case BinaryOp::And:
      case BinaryOp::Or:
        expect(*b.lhs, Type::Bool);
        expect(*b.rhs, Type::Bool);
        return Type::Bool;
      case BinaryOp::Implies:
        fail(e.pos, "'->' is not a program operator");
    }
    return Type::Int;
  }

  void expect(const Expr& e, Type want) {
    const Type got = type_of(e);
    if (got != want) {
      fail(e.pos, std::string("expected ") + to_string(want) + " expression, found " +
                      to_string(got));
    }
  }

  void push_label(const Label& l, LabelKind kind, SourcePos pos) {
    if (!l) return;
    for (const auto& fr : labels_) {
      if (fr.name == *l) fail(pos, "label '" + *l + "' shadows an enclosing label");
    }
    labels_.push_back({*l, kind});
  }
  void pop_label(const Label& l) {
    if (l) labels_.pop_back();
  }

  void list(const StmtList& body) {
    scopes_.emplace_back();
    for (const auto& s : body) stmt(*s);
    scopes_.pop_back();
  }

  void nested(const Stmt& s) {
    scopes_.emplace_back();
    stmt(s);
    scopes_.pop_back();
  }

  void assignment(const std::string& target, const Expr& value, SourcePos pos) {
    const Type t = lookup(target, pos);
    expect(value, t);
  }

  void stmt(const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Skip>) {
          } else if constexpr (std::is_same_v<T, Assign>) {
            assignment(n.target, *n.value, s.pos);
          } else if constexpr (std::is_same_v<T, LocalDecl>) {
            expect(*n.init, n.type);
            declare(n.name, n.type, s.pos);
          } else if constexpr (std::is_same_v<T, Block>) {
            push_label(n.label, LabelKind::Block, s.pos);
            list(n.body);
            pop_label(n.label);
          } else if constexpr (std::is_same_v<T, If>) {
            expect(*n.cond, Type::Bool);
            nested(*n.then_branch);
            if (n.else_branch) nested(*n.else_branch);
          } else if constexpr (std::is_same_v<T, While>) {
            expect(*n.cond, Type::Bool);
            push_label(n.label, LabelKind::Loop, s.pos);
            nested(*n.body);
            pop_label(n.label);
          } else if constexpr (std::is_same_v<T, DoWhile>) {
            push_label(n.label, LabelKind::Loop, s.pos);
            nested(*n.body);
            pop_label(n.label);
            expect(*n.cond, Type::Bool);
          } else if constexpr (std::is_same_v<T, For>) {
            scopes_.emplace_back();
            for (const auto& i : n.init) stmt(*i);
            if (n.guard) expect(*n.guard, Type::Bool);
            for (const auto& u : n.update) assignment(u.target, *u.value, s.pos);
            push_label(n.label, LabelKind::Loop, s.pos);
            nested(*n.body);
            pop_label(n.label);
            scopes_.pop_back();
          } else if constexpr (std::is_same_v<T, Break>) {
            if (n.label && !find_label(*n.label) && !opt_.allow_free_labels) {
              fail(s.pos, "break to unbound label '" + *n.label + "'");
            }
          } else if constexpr (std::is_same_v<T, Continue>) {
            if (n.label) {
              const LabelFrame* fr = find_label(*n.label);
              if (!fr && !opt_.allow_free_labels) {
                fail(s.pos, "continue to unbound label '" + *n.label + "'");
              }
              if (fr && fr->kind == LabelKind::Block) {
                fail(s.pos, "continue target '" + *n.label + "' is not a loop");
              }
            }
          } else if constexpr (std::is_same_v<T, Return>) {
            if (n.value) type_of(*n.value);
          } else if constexpr (std::is_same_v<T, Throw>) {
            expect(*n.value, Type::Int);
          } else if constexpr (std::is_same_v<T, Try>) {
            list(n.body);
            if (n.handler) {
              scopes_.emplace_back();
              declare(n.handler->binder, Type::Int, s.pos);
              list(n.handler->body);
              scopes_.pop_back();
            }
            if (n.finalizer) list(*n.finalizer);
          } else if constexpr (std::is_same_v<T, Attempt>) {
            if (!opt_.allow_extended) fail(s.pos, "attempt-continuation is an extended statement");
            // The label binds in the attempt body only.
            push_label(n.label, LabelKind::Attempt, s.pos);
            list(n.body);
            pop_label(n.label);
            list(n.continuation);
          } else {
            static_assert(std::is_same_v<T, Halt>);
            if (!opt_.allow_extended) fail(s.pos, "halt is an extended statement");
          }
        },
        s.node);
  }

  const LabelFrame* find_label(const std::string& name) const {
    for (auto it = labels_.rbegin(); it != labels_.rend(); ++it) {
      if (it->name == name) return &*it;
    }
    return nullptr;
  }

  Fragment& f_;
  const ParseOptions& opt_;
  std::vector<std::set<std::string>> scopes_;
  std::map<std::string, Type> types_;
  std::vector<LabelFrame> labels_;
};

void collect_types(const StmtList& body, std::map<std::string, Type>& out);

void collect_types(const Stmt& s, std::map<std::string, Type>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LocalDecl>) {
          out.emplace(n.name, n.type);
        } else if constexpr (std::is_same_v<T, Block>) {
          collect_types(n.body, out);
        } else if constexpr (std::is_same_v<T, If>) {
          collect_types(*n.then_branch, out);
          if (n.else_branch) collect_types(*n.else_branch, out);
        } else if constexpr (std::is_same_v<T, While> || std::is_same_v<T, DoWhile>) {
          collect_types(*n.body, out);
        } else if constexpr (std::is_same_v<T, For>) {
          collect_types(n.init, out);
          collect_types(*n.body, out);
        } else if constexpr (std::is_same_v<T, Try>) {
          collect_types(n.body, out);
          if (n.handler) {
            out.emplace(n.handler->binder, Type::Int);
            collect_types(n.handler->body, out);
          }
          if (n.finalizer) collect_types(*n.finalizer, out);
        } else if constexpr (std::is_same_v<T, Attempt>) {
          collect_types(n.body, out);
          collect_types(n.continuation, out);
        }
      },
      s.node);
}

void collect_types(const StmtList& body, std::map<std::string, Type>& out) {
  for (const auto& s : body) collect_types(*s, out);
}

}  // namespace

Fragment parse_fragment(std::string_view text, const ParseOptions& options) {
  Parser p(text, false);
  Fragment f = p.fragment();
  check_fragment(f, options);
  return f;
}

ExprPtr parse_expression(std::string_view text, bool allow_implies) {
  Parser p(text, allow_implies);
  return p.full_expression();
}

void check_fragment(Fragment& fragment, const ParseOptions& options) {
  Checker(fragment, options).run();
}

std::map<std::string, Type> variable_types(const Fragment& fragment) {
  std::map<std::string, Type> out;
  for (const auto& p : fragment.params) out.emplace(p.name, p.type);
  collect_types(fragment.body, out);
  return out;
}

}  // namespace loopdl::lang
