#include "doctest.h"

#include "loopdl/error.hpp"
#include "loopdl/fragment.hpp"
#include "loopdl/parser.hpp"
#include "loopdl/printer.hpp"

using namespace loopdl;
using namespace loopdl::lang;

namespace {

std::string line(const std::string& src) { return print_line(parse_fragment(src).body); }

}  // namespace

TEST_CASE("parse: labeled block from the assignment example") {
  auto f = parse_fragment("x = 1; l: { y = x; break l; y = 0; }");
  REQUIRE(f.body.size() == 2);
  const auto& blk = std::get<Block>(f.body[1]->node);
  CHECK(blk.label == Label("l"));
  CHECK(blk.body.size() == 3);
  REQUIRE(f.params.size() == 2);
  CHECK(f.params[0].name == "x");
  CHECK(f.params[1].name == "y");
}

TEST_CASE("parse: single skip") {
  auto f = parse_fragment(";");
  REQUIRE(f.body.size() == 1);
  CHECK(std::holds_alternative<Skip>(f.body[0]->node));
}

TEST_CASE("parse: static errors") {
  CHECK_THROWS_AS(parse_fragment("break l;"), ParseError);
  CHECK_THROWS_AS(parse_fragment("continue l;"), ParseError);
  CHECK_THROWS_AS(parse_fragment("l: { continue l; }"), ParseError);
  CHECK_THROWS_AS(parse_fragment("params (int x); y = 1;"), ParseError);
  CHECK_THROWS_AS(parse_fragment("int x = 1; int x = 2;"), ParseError);
  CHECK_THROWS_AS(parse_fragment("boolean b = 1;"), ParseError);
  CHECK_THROWS_AS(parse_fragment("x = 1 -> 2;"), ParseError);
  CHECK_THROWS_AS(parse_fragment("if (x) y = 1;"), ParseError);
  CHECK_THROWS_AS(parse_fragment("l: { l: { } }"), ParseError);
  CHECK_THROWS_AS(parse_fragment("while (true) int y = 1;"), ParseError);
  CHECK_THROWS_AS(parse_fragment("x = 1"), ParseError);
  CHECK_THROWS_AS(parse_fragment("/* open"), ParseError);
  ParseOptions plain;
  plain.allow_extended = false;
  CHECK_THROWS_AS(parse_fragment("halt;", plain), ParseError);
  CHECK_THROWS_AS(parse_fragment("attempt { } continuation { }", plain), ParseError);
  CHECK_NOTHROW(parse_fragment("while (x > 0) { x = x - 1; break; }", plain));
}

TEST_CASE("parse: error position") {
  try {
    parse_fragment("x = 1;\ny = ;");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 5);
  }
}

TEST_CASE("parse: attempt label scopes over the body only") {
  CHECK_NOTHROW(parse_fragment("attempt l { continue l; } continuation { }"));
  CHECK_NOTHROW(parse_fragment("l: attempt { break l; } continuation { }"));
  CHECK_THROWS_AS(parse_fragment("attempt l: { } continuation { break l; }"), ParseError);
  ParseOptions free;
  free.allow_free_labels = true;
  CHECK_NOTHROW(parse_fragment("attempt { break m; } continuation { }", free));
}

TEST_CASE("parse: params header and declarations") {
  auto f = parse_fragment("params (int x, boolean b); int y = 1, z = y; if (b) x = z;");
  CHECK(f.explicit_params);
  CHECK(f.params.size() == 2);
  CHECK(f.body.size() == 3);
  auto types = variable_types(f);
  CHECK(types.at("b") == Type::Bool);
  CHECK(types.at("z") == Type::Int);
}

TEST_CASE("print: canonical forms") {
  CHECK(line("x = 1; l: { y = x; break l; y = 0; }") == "x = 1; l: { y = x; break l; y = 0; }");
  CHECK(line("x = (1 + 2) * 3 - (4 - 5);") == "x = (1 + 2) * 3 - (4 - 5);");
  CHECK(line("x = -3 - -x;") == "x = -3 - -x;");
  CHECK(line("x = -(3);") == "x = -(3);");
  CHECK(line("attempt l: { continue l; } continuation { halt; }") ==
        "attempt l: { continue l; } continuation { halt; }");
  CHECK(line("for (int i = 0, j = 1; i < j; i = i + 1, j = j - 1) ;") ==
        "for (int i = 0, j = 1; i < j; i = i + 1, j = j - 1) ;");
  CHECK(line("for (;;) break;") == "for (;;) break;");
  CHECK(line("try { throw 1; } catch (Throwable t) { x = t; } finally { }") ==
        "try { throw 1; } catch (Throwable t) { x = t; } finally { }");
}

TEST_CASE("print: dangling else stays attached") {
  // The inner if has no else; printing must not let the outer else bind to it.
  auto inner = if_stmt(var("a"), assign("x", int_lit(1)));
  auto outer = if_stmt(var("b"), inner, assign("x", int_lit(2)));
  StmtList body{outer};
  const std::string text = print_line(body);
  auto back = parse_fragment("params (boolean a, boolean b, int x); " + text);
  CHECK(equal(back.body, body));
}

TEST_CASE("print: multi-line layout reparses") {
  const char* src =
      "b: { while (x > 1) { c: { if (x % 2 == 0) break c; if (x % 3 == 0) break b; } "
      "x = x / 2; } }";
  auto f = parse_fragment(src);
  auto text = print(f.body);
  CHECK(text.find('\n') != std::string::npos);
  CHECK(equal(parse_fragment(text).body, f.body));
}

TEST_CASE("decompose: labeled block") {
  auto f = parse_fragment("l: { y = x; break l; }");
  auto d = decompose(f.body);
  REQUIRE(d.frames.size() == 1);
  CHECK(d.frames[0].kind == PrefixFrame::Kind::Block);
  auto t = describe(d);
  CHECK(t.prefix == "l: {");
  CHECK(t.active == "y = x;");
  CHECK(t.rest == "break l; }");
  CHECK(equal(reassemble(d), f.body));
}

TEST_CASE("decompose: no wrapper") {
  auto f = parse_fragment("x = 1;");
  auto d = decompose(f.body);
  CHECK(d.frames.empty());
  CHECK(describe(d).active == "x = 1;");
  CHECK(describe(d).rest.empty());
}

TEST_CASE("decompose: attempt") {
  auto f = parse_fragment("attempt { continue; } continuation { q = 1; }");
  auto d = decompose(f.body);
  REQUIRE(d.frames.size() == 1);
  CHECK(d.frames[0].kind == PrefixFrame::Kind::Attempt);
  CHECK(describe(d).active == "continue;");
  CHECK(describe(d).rest == "} continuation { q = 1; }");
  CHECK(equal(reassemble(d), f.body));
}

TEST_CASE("decompose: empty bodies and empty fragment") {
  CHECK(decompose({}).empty());
  auto f = parse_fragment("try { } finally { x = 1; } x = 2;");
  auto d = decompose(f.body);
  CHECK(!d.active);
  REQUIRE(d.frames.size() == 1);
  CHECK(equal(reassemble(d), f.body));
}

TEST_CASE("fresh_flag") {
  CHECK(fresh_flag(parse_fragment("x = y;"), "x") == "x_1");
  CHECK(fresh_flag(parse_fragment(";"), "x") == "x");
  CHECK(fresh_flag(parse_fragment("x = x_1;"), "x") == "x_2");
  CHECK(fresh_flag(parse_fragment("x: { break x; }"), "x") == "x_1");
}

TEST_CASE("statement equivalents") {
  std::vector<Assign> upd{{"x", binary(BinaryOp::Div, var("x"), int_lit(2))}};
  CHECK(print_line(statement_equivalents(upd)) == "x = x / 2;");
  CHECK(print(guard_equivalent(nullptr)) == "true");
  std::vector<Assign> two{{"i", binary(BinaryOp::Add, var("i"), int_lit(1))},
                          {"j", binary(BinaryOp::Sub, var("j"), int_lit(1))}};
  CHECK(print_line(statement_equivalents(two)) == "i = i + 1; j = j - 1;");
}

TEST_CASE("loop transformations") {
  auto w = parse_fragment("l: while (x > 0) { x = x - 1; }").body[0];
  CHECK(print_line({unwind_while(*w)}) ==
        "if (x > 0) attempt l: { x = x - 1; } continuation { l: while (x > 0) { x = x - 1; } }");
  auto d = parse_fragment("do { x = x - 1; } while (x > 0);").body[0];
  CHECK(print_line({unwind_do(*d)}) ==
        "attempt { x = x - 1; } continuation { while (x > 0) { x = x - 1; } }");
  CHECK(print_line({do_to_while(*d, "fst")}) ==
        "while (fst || x > 0) { fst = false; x = x - 1; }");
  auto f = parse_fragment("for (; x > 1; x = x / 2) { x = x - 1; }").body[0];
  CHECK(print_line({unwind_for(*f)}) ==
        "if (x > 1) attempt { x = x - 1; } continuation { x = x / 2; for (; x > 1; x = x / 2) "
        "{ x = x - 1; } }");
  auto fi = parse_fragment("for (int i = 0; ; ) break;").body[0];
  CHECK(print_line({pull_out_initializer(*fi)}) == "{ int i = 0; for (;;) break; }");
  CHECK_THROWS_AS(unwind_for(*fi), NotApplicable);
  CHECK_THROWS_AS(pull_out_initializer(*f), NotApplicable);
  auto u = unwind_while(*w);
  const auto& att = std::get<Attempt>(std::get<If>(u->node).then_branch->node);
  CHECK(att.continuation[0]->unrolled == 1);
}

TEST_CASE("unwind_at twice") {
  auto f = parse_fragment("y = 0;\nwhile (x > 0) x = x - 1;");
  auto g = unwind_at(f, 2, 2);
  CHECK(print_line(g.body) ==
        "y = 0; if (x > 0) attempt { x = x - 1; } continuation { if (x > 0) attempt { x = x - "
        "1; } continuation { while (x > 0) x = x - 1; } }");
  CHECK_THROWS_AS(unwind_at(f, 1, 1), ConfigError);
}
