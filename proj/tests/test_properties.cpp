#include "doctest.h"

#include <fstream>
#include <sstream>

#include "loopdl/fragment.hpp"
#include "loopdl/gen.hpp"
#include "loopdl/interp.hpp"
#include "loopdl/parser.hpp"
#include "loopdl/printer.hpp"

using namespace loopdl;
using namespace loopdl::lang;

namespace {

gen::GenOptions everything() {
  gen::GenOptions o;
  o.depth = 3;
  o.halts = true;
  o.division = true;
  return o;
}

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(LOOPDL_CORPUS_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void collect_loop_lines(const StmtList& body, std::vector<int>& out);

void collect_loop_lines(const StmtPtr& s, std::vector<int>& out) {
  if (!s) return;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, While> || std::is_same_v<T, DoWhile> ||
                      std::is_same_v<T, For>) {
          out.push_back(s->pos.line);
          collect_loop_lines(n.body, out);
        } else if constexpr (std::is_same_v<T, Block>) {
          collect_loop_lines(n.body, out);
        } else if constexpr (std::is_same_v<T, If>) {
          collect_loop_lines(n.then_branch, out);
          collect_loop_lines(n.else_branch, out);
        } else if constexpr (std::is_same_v<T, Try>) {
          collect_loop_lines(n.body, out);
          if (n.handler) collect_loop_lines(n.handler->body, out);
          if (n.finalizer) collect_loop_lines(*n.finalizer, out);
        } else if constexpr (std::is_same_v<T, Attempt>) {
          collect_loop_lines(n.body, out);
          collect_loop_lines(n.continuation, out);
        }
      },
      s->node);
}

void collect_loop_lines(const StmtList& body, std::vector<int>& out) {
  for (const auto& s : body) collect_loop_lines(s, out);
}

}  // namespace

TEST_CASE("property: printing then parsing gives the same AST") {
  for (int n = 0; n < 2000; ++n) {
    gen::Generator g(n, everything());
    const Fragment f = g.fragment(g.stmts(3, 1));
    const std::string text = print(f);
    const Fragment back = parse_fragment(text);
    REQUIRE_MESSAGE(equal(f, back), text);
    PrintOptions one;
    one.one_line = true;
    CHECK(equal(parse_fragment(print(f, one)), f));
  }
}

TEST_CASE("property: decompose then reassemble is the identity") {
  for (int n = 0; n < 2000; ++n) {
    gen::Generator g(10000 + n, everything());
    const StmtList body = g.stmts(3, 0);
    const auto d = decompose(body);
    REQUIRE_MESSAGE(equal(reassemble(d), body), print_line(body));
    if (d.active) {
      CHECK(!std::holds_alternative<Block>(d.active->node));
      CHECK(!std::holds_alternative<Try>(d.active->node));
      CHECK(!std::holds_alternative<Attempt>(d.active->node));
    }
  }
}

TEST_CASE("property: fresh names never collide") {
  for (int n = 0; n < 1000; ++n) {
    gen::Generator g(20000 + n, everything());
    const Fragment f = g.fragment(g.stmts(3, 1));
    const auto taken = identifiers(f);
    for (const char* hint : {"x", "y", "k", "l", "t0", "fst"}) {
      const auto name = fresh_flag(f, hint);
      CHECK(taken.count(name) == 0);
    }
  }
}

TEST_CASE("property: unwound programs reparse to the same AST") {
  std::size_t loops = 0;
  for (int n = 0; n < 600; ++n) {
    gen::Generator g(30000 + n, everything());
    // Print and reparse first so that statements carry real line numbers.
    const Fragment f = parse_fragment(print(g.fragment(g.stmts(3, 1))));
    std::vector<int> lines;
    collect_loop_lines(f.body, lines);
    for (int line : lines) {
      for (int k : {0, 1, 2}) {
        const Fragment u = unwind_at(f, line, k);
        REQUIRE(equal(parse_fragment(print(u)), u));
      }
      ++loops;
    }
  }
  CHECK(loops > 200);
}

TEST_CASE("listing1.mj and its while encoding listing2.mj agree on x in [-8, 64]") {
  const Fragment l1 = parse_fragment(slurp("listing1.mj"));
  const Fragment l2 = parse_fragment(slurp("listing2.mj"));
  for (int x = -8; x <= 64; ++x) {
    interp::NamedState s{{"x", Int(x)}};
    const auto a = interp::exec(l1, s);
    const auto b = interp::exec(l2, s);
    REQUIRE(!a.budget_exhausted);
    REQUIRE(!b.budget_exhausted);
    CHECK(a.reason.kind == interp::Completion::Kind::Normal);
    CHECK(b.reason.kind == interp::Completion::Kind::Normal);
    CHECK_MESSAGE(interp::to_string(a.state.at("x")) == interp::to_string(b.state.at("x")),
                  "x = " << x);
  }
}
