#include "loopdl/gen.hpp"

#include <algorithm>

namespace loopdl::gen {

using namespace lang;

Generator::Generator(std::uint64_t seed, GenOptions opt) : rng_(seed), opt_(std::move(opt)) {}

int Generator::pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

bool Generator::chance(int percent) { return pick(100) < percent; }

ExprPtr Generator::int_expr(int depth) {
  if (depth <= 0 || chance(40)) {
    if (chance(60)) {
      const int i = pick(static_cast<int>(opt_.vars.size()) + 1);
      return var(i < static_cast<int>(opt_.vars.size()) ? opt_.vars[i] : opt_.counter);
    }
    return int_lit(Int(pick(7) - 3));
  }
  if (chance(10)) return unary(UnaryOp::Neg, int_expr(depth - 1));
  static const BinaryOp plain[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul};
  static const BinaryOp divs[] = {BinaryOp::Div, BinaryOp::Mod};
  if (opt_.division && chance(15)) return binary(divs[pick(2)], int_expr(depth - 1), int_expr(0));
  return binary(plain[pick(3)], int_expr(depth - 1), int_expr(depth - 1));
}

ExprPtr Generator::bool_expr(int depth) {
  static const BinaryOp cmps[] = {BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt,
                                  BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne};
  if (depth <= 0 || chance(60)) {
    if (chance(5)) return bool_lit(chance(50));
    return binary(cmps[pick(6)], int_expr(1), int_expr(1));
  }
  switch (pick(3)) {
    case 0: return unary(UnaryOp::Not, bool_expr(depth - 1));
    case 1: return binary(BinaryOp::And, bool_expr(depth - 1), bool_expr(depth - 1));
    default: return binary(BinaryOp::Or, bool_expr(depth - 1), bool_expr(depth - 1));
  }
}

ExprPtr Generator::pure_bool_expr(int depth) {
  const bool saved = opt_.division;
  opt_.division = false;
  auto e = bool_expr(depth);
  opt_.division = saved;
  return e;
}

logic::FormulaPtr Generator::formula() { return logic::formula_of(*pure_bool_expr(2)); }

std::vector<Param> Generator::params() const {
  std::vector<Param> out;
  for (const auto& v : opt_.vars) out.push_back({Type::Int, v});
  out.push_back({Type::Int, opt_.counter});
  return out;
}

Fragment Generator::fragment(StmtList body) const {
  Fragment f;
  f.params = params();
  f.explicit_params = true;
  f.body = std::move(body);
  return f;
}

std::string Generator::fresh_label() {
  static const char* pool[] = {"l", "m", "n", "o", "p", "q"};
  for (const char* name : pool) {
    bool taken = std::find(opt_.free_labels.begin(), opt_.free_labels.end(), name) !=
                 opt_.free_labels.end();
    for (const auto& fr : frames) taken = taken || fr.label == name;
    if (!taken) return name;
  }
  return "l" + std::to_string(frames.size());
}

// Catch binders may not shadow an enclosing one.
std::string Generator::binder() {
  for (int i = 0;; ++i) {
    std::string name = "t" + std::to_string((binders_ + i) % 3 + (i / 3) * 3);
    if (std::find(binders_in_scope_.begin(), binders_in_scope_.end(), name) ==
        binders_in_scope_.end()) {
      ++binders_;
      return name;
    }
  }
}

ExprPtr Generator::guard() {
  auto bound = binary(BinaryOp::Gt, var(opt_.counter), int_lit(Int(0)));
  if (chance(25)) return bound;
  return binary(BinaryOp::And, bound, pure_bool_expr(1));
}

StmtList Generator::counted_body(int depth) {
  StmtList body{assign(opt_.counter, binary(BinaryOp::Sub, var(opt_.counter), int_lit(Int(1))))};
  for (auto& s : stmts(depth, 1)) body.push_back(std::move(s));
  return body;
}

StmtPtr Generator::loop(int depth, Label label, int kind) {
  if (kind < 0) kind = pick(3);
  frames.push_back({Frame::Kind::Loop, label});
  StmtPtr out;
  if (kind == 0) {
    auto g = guard();
    out = while_stmt(g, block(counted_body(depth - 1)), label);
  } else if (kind == 1) {
    auto body = block(counted_body(depth - 1));
    out = make_stmt(DoWhile{label, body, guard()});
  } else {
    For f;
    f.label = label;
    if (chance(50)) {
      const auto& v = opt_.vars[pick(static_cast<int>(opt_.vars.size()))];
      f.init.push_back(assign(v, int_expr(1)));
    }
    f.guard = guard();
    f.update.push_back({opt_.counter, binary(BinaryOp::Sub, var(opt_.counter), int_lit(Int(1)))});
    if (chance(40)) {
      const auto& v = opt_.vars[pick(static_cast<int>(opt_.vars.size()))];
      f.update.push_back({v, int_expr(1)});
    }
    f.body = block(stmts(depth - 1, 1));
    out = make_stmt(std::move(f));
  }
  frames.pop_back();
  return out;
}

StmtPtr Generator::jump() {
  std::vector<std::string> brk = opt_.free_labels, cnt = opt_.free_labels;
  for (const auto& fr : frames) {
    if (!fr.label) continue;
    brk.push_back(*fr.label);
    if (fr.kind != Frame::Kind::Block) cnt.push_back(*fr.label);
  }
  while (true) {
    switch (pick(8)) {
      case 0: return break_stmt();
      case 1: return continue_stmt();
      case 2:
        if (!brk.empty()) return break_stmt(brk[pick(static_cast<int>(brk.size()))]);
        break;
      case 3:
        if (!cnt.empty()) return continue_stmt(cnt[pick(static_cast<int>(cnt.size()))]);
        break;
      case 4:
        if (opt_.returns) return return_stmt(chance(70) ? int_expr(1) : nullptr);
        break;
      case 5:
        if (opt_.throws) return throw_stmt(int_expr(1));
        break;
      case 6:
        if (opt_.halts) return halt();
        break;
      default:
        if (opt_.halts && chance(50)) return halt();
        return break_stmt();
    }
  }
}

StmtPtr Generator::stmt(int depth) {
  const auto target = [&] { return opt_.vars[pick(static_cast<int>(opt_.vars.size()))]; };
  if (depth <= 0) {
    const int r = pick(10);
    if (r < 5) return assign(target(), int_expr(2));
    if (r < 6) return skip();
    return if_stmt(pure_bool_expr(1), jump(), chance(30) ? assign(target(), int_expr(1)) : nullptr);
  }
  switch (pick(10)) {
    case 0:
    case 1: return assign(target(), int_expr(2));
    case 2: return jump();
    case 3: {
      auto c = chance(80) ? pure_bool_expr(1) : bool_expr(1);
      auto t = block(stmts(depth - 1));
      return if_stmt(c, t, chance(50) ? block(stmts(depth - 1)) : nullptr);
    }
    case 4: {
      if (!opt_.loops) break;
      return loop(depth, chance(40) ? Label(fresh_label()) : std::nullopt);
    }
    case 5: {
      Label l = fresh_label();
      frames.push_back({Frame::Kind::Block, l});
      auto body = stmts(depth - 1);
      frames.pop_back();
      return block(std::move(body), l);
    }
    case 6: {
      if (!opt_.tries) break;
      Try t;
      t.body = stmts(depth - 1);
      const int shape = pick(3);
      if (shape != 1) {
        CatchClause c;
        c.binder = binder();
        binders_in_scope_.push_back(c.binder);
        c.body = stmts(depth - 1, 0);
        binders_in_scope_.pop_back();
        if (chance(40)) c.body.push_back(assign(target(), var(c.binder)));
        t.handler = std::move(c);
      }
      if (shape != 0) t.finalizer = stmts(depth - 1, 0);
      return make_stmt(std::move(t));
    }
    case 7: {
      if (!opt_.attempts) break;
      Label l = chance(50) ? Label(fresh_label()) : std::nullopt;
      frames.push_back({Frame::Kind::Attempt, l});
      auto body = stmts(depth - 1);
      frames.pop_back();
      return attempt(std::move(body), stmts(depth - 1, 0), l);
    }
    default: break;
  }
  return assign(target(), int_expr(2));
}

StmtList Generator::stmts(int depth, int min_len) {
  const int n = min_len + pick(std::max(1, opt_.max_len - min_len + 1));
  StmtList out;
  for (int i = 0; i < n; ++i) out.push_back(stmt(depth));
  return out;
}

namespace {

template <class Pred>
bool any_stmt(const StmtList& body, const Pred& pred);

template <class Pred>
bool any_stmt(const StmtPtr& s, const Pred& pred) {
  if (!s) return false;
  if (pred(*s)) return true;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Block>) {
          return any_stmt(n.body, pred);
        } else if constexpr (std::is_same_v<T, If>) {
          return any_stmt(n.then_branch, pred) || any_stmt(n.else_branch, pred);
        } else if constexpr (std::is_same_v<T, While> || std::is_same_v<T, DoWhile> ||
                             std::is_same_v<T, For>) {
          return any_stmt(n.body, pred);
        } else if constexpr (std::is_same_v<T, Try>) {
          return any_stmt(n.body, pred) || (n.handler && any_stmt(n.handler->body, pred)) ||
                 (n.finalizer && any_stmt(*n.finalizer, pred));
        } else if constexpr (std::is_same_v<T, Attempt>) {
          return any_stmt(n.body, pred) || any_stmt(n.continuation, pred);
        } else {
          return false;
        }
      },
      s->node);
}

template <class Pred>
bool any_stmt(const StmtList& body, const Pred& pred) {
  for (const auto& s : body) {
    if (any_stmt(s, pred)) return true;
  }
  return false;
}

}  // namespace

bool contains_abrupt(const StmtList& body) {
  return any_stmt(body, [](const Stmt& s) {
    return std::holds_alternative<Break>(s.node) || std::holds_alternative<Continue>(s.node) ||
           std::holds_alternative<Return>(s.node) || std::holds_alternative<Throw>(s.node) ||
           std::holds_alternative<Halt>(s.node);
  });
}

bool contains_halt(const StmtList& body) {
  return any_stmt(body, [](const Stmt& s) { return std::holds_alternative<Halt>(s.node); });
}

}  // namespace loopdl::gen
