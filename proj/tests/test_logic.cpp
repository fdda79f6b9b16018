#include "doctest.h"

#include <random>

#include "loopdl/error.hpp"
#include "loopdl/logic.hpp"
#include "loopdl/parser.hpp"

using namespace loopdl;
using namespace loopdl::logic;
using interp::NamedState;

namespace {

Update upd(std::initializer_list<std::pair<const char*, TermPtr>> bs) {
  Update u;
  for (const auto& [n, v] : bs) u = Update::parallel(u, Update::elementary(n, v));
  return u;
}

// Random division-free expressions over x, y (int) evaluated by the
// interpreter, which serves as the reference semantics.
struct ExprGen {
  std::mt19937 rng;
  explicit ExprGen(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  lang::ExprPtr int_expr(int depth) {
    if (depth == 0 || pick(3) == 0) {
      if (pick(2)) return lang::var(pick(2) ? "x" : "y");
      return lang::int_lit(pick(9) - 4);
    }
    static const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul};
    if (pick(5) == 0) return lang::unary(UnaryOp::Neg, int_expr(depth - 1));
    return lang::binary(ops[pick(3)], int_expr(depth - 1), int_expr(depth - 1));
  }

  lang::ExprPtr bool_expr(int depth) {
    if (depth == 0 || pick(3) == 0) {
      static const BinaryOp cmps[] = {BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt,
                                      BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne};
      return lang::binary(cmps[pick(6)], int_expr(2), int_expr(2));
    }
    switch (pick(4)) {
      case 0: return lang::unary(UnaryOp::Not, bool_expr(depth - 1));
      case 1: return lang::binary(BinaryOp::And, bool_expr(depth - 1), bool_expr(depth - 1));
      case 2: return lang::binary(BinaryOp::Or, bool_expr(depth - 1), bool_expr(depth - 1));
      default:
        return lang::binary(BinaryOp::Eq, bool_expr(depth - 1), bool_expr(depth - 1));
    }
  }
};

interp::Value ref_eval(const lang::Expr& e, const NamedState& s) {
  auto r = interp::eval_expr(e, s);
  REQUIRE(!r.div_by_zero);
  return r.value;
}

NamedState xy(int x, int y) { return {{"x", Int(x)}, {"y", Int(y)}}; }

}  // namespace

TEST_CASE("update application on terms") {
  CHECK(print(logic::apply(Update::elementary("x", t_int(1)), t_var("x"))) == "1");
  auto t = t_bin(BinaryOp::Add, t_var("x"), t_var("y"));
  CHECK(equal(logic::apply(Update{}, t), t));
  auto u = upd({{"x", t_int(1)}, {"y", t_var("x")}});
  CHECK(print(logic::apply(u, t_var("y"))) == "x");
}

TEST_CASE("update application on formulas") {
  auto f = parse_formula("x != 0");
  CHECK(print(logic::apply(Update::elementary("x", t_int(1)), f)) == "1 != 0");
  CHECK(print(simplify(logic::apply(Update::elementary("x", t_int(1)), f))) == "true");
  auto g = parse_formula("y != 0");
  CHECK(print(logic::apply(upd({{"x", t_int(1)}, {"y", t_int(1)}}), g)) == "1 != 0");
  auto h = parse_formula("y != x");
  CHECK(print(logic::apply(upd({{"y", t_int(1)}}), h)) == "1 != x");
  CHECK(equal(logic::apply(Update{}, f), f));
  auto box = f_box(lang::parse_fragment("x = 2;").body, f);
  auto applied = logic::apply(Update::elementary("x", t_int(1)), box);
  CHECK(applied->k == Formula::K::Upd);
  CHECK(print(applied) == "{x := 1}[x = 2;](x != 0)");
}

TEST_CASE("compose") {
  auto c = compose(Update::elementary("x", t_int(1)), Update::elementary("y", t_var("x")));
  CHECK(c.str() == "{x := 1 || y := 1}");
  auto u = upd({{"y", t_var("x")}, {"x", t_int(3)}});
  CHECK(equal(compose(Update{}, u), u));
  CHECK(compose(Update::elementary("x", t_int(1)), Update::elementary("x", t_int(2))).str() ==
        "{x := 2}");
  // Inner identity bindings vanish before composition.
  CHECK(compose(Update::elementary("x", t_int(1)), Update::elementary("y", t_var("y"))).str() ==
        "{x := 1}");
}

TEST_CASE("last-wins composition agrees with sequential execution on one variable") {
  auto outer = Update::elementary("x", t_int(1));
  auto inner = Update::elementary("x", t_int(2));
  auto both = compose(outer, inner);
  for (int x = -8; x <= 8; ++x) {
    NamedState s{{"x", Int(x)}};
    // Sequential: first outer, then inner, both evaluated at their own state.
    NamedState s1{{"x", eval_term(*outer.find("x"), s)}};
    NamedState s2{{"x", eval_term(*inner.find("x"), s1)}};
    CHECK(eval_term(logic::apply(both, t_var("x")), s) == s2.at("x"));
  }
}

TEST_CASE("parallel update is last-wins and normalized") {
  auto u = upd({{"x", t_int(1)}, {"y", t_int(2)}, {"x", t_int(3)}});
  CHECK(u.str() == "{x := 3 || y := 2}");
  CHECK(equal(Update::parallel(u, Update{}), u));
  CHECK(equal(Update::parallel(Update::parallel(u, u), u), u));
  CHECK(Update::elementary("x", t_var("x")).empty());
}

TEST_CASE("eval_formula") {
  CHECK(eval_formula(parse_formula("1 != 0"), {}));
  CHECK(eval_formula(parse_formula("x == true -> x == false"), {{"x", false}}));
  auto f = parse_formula("i <= n && !(i < n) -> i == n");
  for (int i = -8; i <= 8; ++i) {
    for (int n = -8; n <= 8; ++n) {
      CHECK(eval_formula(f, {{"i", Int(i)}, {"n", Int(n)}}));
    }
  }
  auto box = f_box(lang::parse_fragment(";").body, f_true());
  CHECK_THROWS_AS(eval_formula(box, {}), Error);
  CHECK_THROWS_AS(eval_formula(parse_formula("z > 0"), {}), Error);
}

TEST_CASE("term division is total") {
  CHECK(eval_term(t_bin(BinaryOp::Div, t_var("x"), t_int(0)), {{"x", Int(5)}}) ==
        interp::Value(Int(0)));
  CHECK(eval_term(t_bin(BinaryOp::Mod, t_var("x"), t_var("y")), xy(7, 0)) ==
        interp::Value(Int(0)));
  CHECK(eval_term(t_bin(BinaryOp::Mod, t_int(-7), t_int(2)), {}) == interp::Value(Int(-1)));
}

TEST_CASE("definedness") {
  auto e = lang::parse_expression("y != 0 && x / y > 1");
  auto d = definedness(*e);
  for (int x = -3; x <= 3; ++x) {
    for (int y = -3; y <= 3; ++y) {
      auto s = xy(x, y);
      CHECK(std::get<bool>(eval_term(d, s)) == !interp::eval_expr(*e, s).div_by_zero);
    }
  }
  CHECK(is_true(definedness(*lang::parse_expression("x + 1"))));
  CHECK(has_division(*lang::parse_expression("1 + x % 2")));
}

TEST_CASE("simplification preserves meaning") {
  ExprGen gen(7);
  for (int round = 0; round < 300; ++round) {
    auto e = gen.bool_expr(3);
    auto t = term_of(*e);
    for (int x = -3; x <= 3; ++x) {
      for (int y = -3; y <= 3; ++y) {
        auto s = xy(x, y);
        REQUIRE(eval_term(t, s) == ref_eval(*e, s));
      }
    }
  }
}

TEST_CASE("printed terms and formulas reparse to the same meaning") {
  ExprGen gen(11);
  for (int round = 0; round < 200; ++round) {
    auto e = gen.bool_expr(3);
    auto f = formula_of(*e);
    auto back = parse_formula(print(f));
    for (int x = -2; x <= 2; ++x) {
      for (int y = -2; y <= 2; ++y) {
        auto s = xy(x, y);
        REQUIRE(eval_formula(back, s) == std::get<bool>(ref_eval(*e, s)));
      }
    }
  }
}

TEST_CASE("update application agrees with the state transform") {
  ExprGen gen(3);
  for (int round = 0; round < 300; ++round) {
    auto vx = gen.int_expr(2);
    auto vy = gen.int_expr(2);
    Update u;
    const int shape = gen.pick(3);
    if (shape != 1) u = Update::parallel(u, Update::elementary("x", term_of(*vx)));
    if (shape != 0) u = Update::parallel(u, Update::elementary("y", term_of(*vy)));
    auto post = gen.bool_expr(2);
    auto applied = logic::apply(u, formula_of(*post));
    for (int x = -3; x <= 3; ++x) {
      for (int y = -3; y <= 3; ++y) {
        auto s = xy(x, y);
        NamedState moved = s;
        if (shape != 1) moved["x"] = ref_eval(*vx, s);
        if (shape != 0) moved["y"] = ref_eval(*vy, s);
        REQUIRE(eval_formula(applied, s) == std::get<bool>(ref_eval(*post, moved)));
      }
    }
  }
}

TEST_CASE("compose agrees with sequential state transforms") {
  ExprGen gen(5);
  for (int round = 0; round < 300; ++round) {
    auto a = gen.int_expr(2), b = gen.int_expr(2), c = gen.int_expr(2);
    auto u1 = upd({{"x", term_of(*a)}, {"y", term_of(*b)}});
    const std::string target = gen.pick(2) ? "x" : "y";
    auto u2 = Update::elementary(target, term_of(*c));
    auto both = compose(u1, u2);
    for (int x = -3; x <= 3; ++x) {
      for (int y = -3; y <= 3; ++y) {
        auto s = xy(x, y);
        NamedState s1{{"x", ref_eval(*a, s)}, {"y", ref_eval(*b, s)}};
        NamedState s2 = s1;
        s2[target] = ref_eval(*c, s1);
        REQUIRE(eval_term(logic::apply(both, t_var("x")), s) == s2.at("x"));
        REQUIRE(eval_term(logic::apply(both, t_var("y")), s) == s2.at("y"));
      }
    }
  }
}

TEST_CASE("formula printing") {
  CHECK(print(parse_formula("a -> b -> c")) == "a -> b -> c");
  CHECK(print(parse_formula("(a -> b) -> c")) == "(a -> b) -> c");
  CHECK(print(parse_formula("x - 3 > y")) == "x - 3 > y");
  CHECK(print(parse_formula("!(x < y) || b")) == "x >= y || b");
  CHECK(print(parse_formula("x == true")) == "x");
  CHECK(print(f_upd(Update::elementary("x", t_int(1)),
                    f_box(lang::parse_fragment("y = x;").body, parse_formula("y != 0")))) ==
        "{x := 1}[y = x;](y != 0)");
}
