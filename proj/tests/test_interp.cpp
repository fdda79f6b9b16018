#include "doctest.h"

#include <fstream>
#include <sstream>

#include "loopdl/error.hpp"
#include "loopdl/interp.hpp"
#include "loopdl/parser.hpp"

using namespace loopdl;
using namespace loopdl::interp;

namespace {

std::string read_corpus(const std::string& name) {
  std::ifstream in(std::string(LOOPDL_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

NamedOutcome run(const std::string& src, NamedState s, std::int64_t budget = kDefaultBudget) {
  return exec(lang::parse_fragment(src), s, budget);
}

}  // namespace

TEST_CASE("eval_expr") {
  auto e = lang::parse_expression("x > 1");
  CHECK(std::get<bool>(eval_expr(*e, {{"x", Int(4)}}).value));
  auto d = lang::parse_expression("x / 2");
  CHECK(std::get<Int>(eval_expr(*d, {{"x", Int(5)}}).value) == Int(2));
  CHECK(std::get<Int>(eval_expr(*d, {{"x", Int(-5)}}).value) == Int(-2));
  auto m = lang::parse_expression("x % y");
  CHECK(eval_expr(*m, {{"x", Int(1)}, {"y", Int(0)}}).div_by_zero);
  CHECK(std::get<Int>(eval_expr(*m, {{"x", Int(-7)}, {"y", Int(3)}}).value) == Int(-1));
}

TEST_CASE("listing3.mj outcomes") {
  const auto src = read_corpus("listing3.mj");
  auto a = run(src, {{"x", Int(3)}});
  CHECK(!a.budget_exhausted);
  CHECK(to_string(a.reason) == "return 3");
  CHECK(std::get<Int>(a.state.at("x")) == Int(3));
  auto b = run(src, {{"x", Int(0)}});
  CHECK(to_string(b.reason) == "normal");
  auto c = run(src, {{"x", Int(-5)}}, 10000);
  CHECK(c.budget_exhausted);
}

TEST_CASE("attempt semantics") {
  auto a = run("attempt { break; y = 0; } continuation { y = 1; }", {{"y", Int(7)}});
  CHECK(to_string(a.reason) == "normal");
  CHECK(std::get<Int>(a.state.at("y")) == Int(7));
  auto b = run("attempt { continue; y = 0; } continuation { y = 1; }", {{"y", Int(7)}});
  CHECK(std::get<Int>(b.state.at("y")) == Int(1));
  auto c = run("attempt l { continue l; } continuation { y = 1; break; }", {{"y", Int(7)}});
  CHECK(to_string(c.reason) == "break");
  auto d = run("m: { attempt l { break m; } continuation { y = 1; } y = 2; }", {{"y", Int(7)}});
  CHECK(to_string(d.reason) == "normal");
  CHECK(std::get<Int>(d.state.at("y")) == Int(7));
  auto e = run("attempt { return 4; } continuation { y = 1; }", {{"y", Int(7)}});
  CHECK(to_string(e.reason) == "return 4");
}

TEST_CASE("halt skips finally") {
  auto a = run("try { halt; } finally { x = 1; }", {{"x", Int(0)}});
  CHECK(to_string(a.reason) == "halt");
  CHECK(std::get<Int>(a.state.at("x")) == Int(0));
  auto b = run("while (true) { try { x = x + 1; if (x > 3) halt; } finally { continue; } }",
               {{"x", Int(0)}});
  CHECK(to_string(b.reason) == "halt");
  CHECK(std::get<Int>(b.state.at("x")) == Int(4));
}

TEST_CASE("finally supersedes and catch binds") {
  auto a = run("try { return 1; } finally { x = 2; }", {{"x", Int(0)}});
  CHECK(to_string(a.reason) == "return 1");
  CHECK(std::get<Int>(a.state.at("x")) == Int(2));
  auto b = run("l: { try { return 1; } finally { break l; } } x = 5;", {{"x", Int(0)}});
  CHECK(to_string(b.reason) == "normal");
  CHECK(std::get<Int>(b.state.at("x")) == Int(5));
  auto c = run("try { x = 1 / x; } catch (int t) { x = t + 10; }", {{"x", Int(0)}});
  CHECK(to_string(c.reason) == "normal");
  CHECK(std::get<Int>(c.state.at("x")) == Int(10));
  auto d = run("try { throw x + 1; } catch (Throwable t) { x = t; }", {{"x", Int(4)}});
  CHECK(std::get<Int>(d.state.at("x")) == Int(5));
  auto e = run("x = 1 % (x - x);", {{"x", Int(4)}});
  CHECK(to_string(e.reason) == "thrown div_by_zero");
}

TEST_CASE("loops and labels") {
  auto a = run("l: while (true) { m: while (true) { continue l; } }", {}, 1000);
  CHECK(a.budget_exhausted);
  auto b = run("i = 0; do { i = i + 1; if (i == 2) continue; } while (i < 5);", {{"i", Int(9)}});
  CHECK(std::get<Int>(b.state.at("i")) == Int(5));
  auto c = run("s = 0; for (int i = 0; i < 4; i = i + 1) { if (i == 1) continue; s = s + i; }",
               {{"s", Int(0)}});
  CHECK(std::get<Int>(c.state.at("s")) == Int(5));
  auto d = run("l: while (x > 0) { x = x - 1; break; }", {{"x", Int(3)}});
  CHECK(std::get<Int>(d.state.at("x")) == Int(2));
  auto e = run("while (x > 0) { l: { break l; } x = x - 1; }", {{"x", Int(3)}});
  CHECK(std::get<Int>(e.state.at("x")) == Int(0));
}

TEST_CASE("bad start states are rejected") {
  auto f = lang::parse_fragment("params (int x); x = 1;");
  CHECK_THROWS_AS(exec(f, {}), ConfigError);
  CHECK_THROWS_AS(exec(f, {{"x", true}}), ConfigError);
  CHECK_THROWS_AS(exec(f, {{"x", Int(1)}, {"y", Int(2)}}), ConfigError);
}

TEST_CASE("holds_modality") {
  auto skip = lang::parse_fragment(";");
  auto brk = lang::parse_fragment("break;");
  auto post_true = [](const NamedState&) { return true; };
  auto post_false = [](const NamedState&) { return false; };
  CHECK(holds_modality(skip, CompletionSet::normal_only(), post_true, {}) == Tri::True);
  CHECK(holds_modality(skip, CompletionSet::abrupt_jumps(), post_false, {}) == Tri::True);
  CHECK(holds_modality(brk, CompletionSet::break_unlabeled(), post_false, {}) == Tri::False);
  auto loop = lang::parse_fragment("while (true) ;");
  CHECK(holds_modality(loop, CompletionSet::normal_only(), post_false, {}, 100) == Tri::Unknown);
}

TEST_CASE("completion sets") {
  auto s = CompletionSet::abrupt_jumps().minus(Completion::brk());
  CHECK(!s.contains(Completion::brk()));
  CHECK(s.contains(Completion::brk("l")));
  CHECK(!s.contains(Completion::normal()));
  auto t = CompletionSet::continuing("l");
  CHECK(t.contains(Completion::normal()));
  CHECK(t.contains(Completion::cont("l")));
  CHECK(!t.contains(Completion::cont("k")));
  auto u = CompletionSet::abrupt_jumps().minus(Completion::brk("l"));
  CHECK(!u.contains(Completion::brk("l")));
  CHECK(u.contains(Completion::brk("k")));
}
