// One line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "loopdl/calculus.hpp"
#include "loopdl/harness.hpp"
#include "loopdl/interp.hpp"
#include "loopdl/parser.hpp"
#include "loopdl/printer.hpp"
#include "loopdl/prover.hpp"

using namespace loopdl;

namespace {

// Pinned thresholds.
constexpr int kProgramsPerFamily = 500;
constexpr double kSuiteSeconds = 300;
constexpr std::size_t kTheoremLoops = 200;
constexpr double kConjectureUnknownRate = 0.05;
constexpr int kFuzzPairs = 1000;
constexpr double kFuzzSeconds = 600;
constexpr int kDoLoops = 100;
const prover::Interval kDomain{-4, 4};

int failures = 0;

void report(int n, bool ok, const std::string& what) {
  std::printf("criterion %d %s  %s\n", n, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const harness::FamilyReport* family(const harness::SuiteReport& r, const std::string& name) {
  for (const auto& f : r.families) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::size_t counter(const harness::FamilyReport& f, const std::string& key) {
  for (const auto& [k, v] : f.counters) {
    if (k == key) return v;
  }
  return 0;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const lang::Attempt* attempt_in(const lang::StmtList& body) {
  for (const auto& s : body) {
    if (auto* a = std::get_if<lang::Attempt>(&s->node)) return a;
    if (auto* i = std::get_if<lang::If>(&s->node)) {
      if (auto* a = std::get_if<lang::Attempt>(&i->then_branch->node)) return a;
    }
  }
  return nullptr;
}

}  // namespace

int main() {
  const std::string corpus = LOOPDL_CORPUS_DIR;
  const std::string golden = LOOPDL_GOLDEN_DIR;

  // 1-4 share one run of the whole suite.
  harness::SuiteOptions so;
  so.domain = kDomain;
  so.programs = kProgramsPerFamily;
  const auto t0 = std::chrono::steady_clock::now();
  const auto all = harness::run_suite("all", so);
  const double suite_s = seconds_since(t0);
  {
    std::size_t min_programs = SIZE_MAX;
    for (const auto& f : all.families) min_programs = std::min(min_programs, f.programs);
    const bool ok = all.mismatches() == 0 && min_programs >= kProgramsPerFamily &&
                    suite_s <= kSuiteSeconds;
    report(1, ok,
           "axiom suite: " + std::to_string(all.families.size()) + " families, min " +
               std::to_string(min_programs) + " programs, " + std::to_string(all.mismatches()) +
               " mismatches, " + fmt("%.1f", suite_s) + " s (limit " + fmt("%.0f", kSuiteSeconds) +
               " s)");
  }
  {
    const auto* f = family(all, "unrollWhile");
    const bool ok = f && f->programs >= kTheoremLoops && f->mismatch_count == 0 &&
                    counter(*f, "bodies with halt") + counter(*f, "bodies with another abrupt statement") > 0;
    report(2, ok,
           f ? "while unrolling: " + std::to_string(f->programs) + " loops, " +
                   std::to_string(f->checks) + " checks, " + std::to_string(f->mismatch_count) +
                   " mismatches"
             : "unrollWhile family missing");
  }
  {
    const auto* f = family(all, "unrollWhileHalt");
    const bool ok = f && f->programs >= kTheoremLoops && f->mismatch_count == 0 &&
                    counter(*f, "bodies with halt") == f->programs;
    report(3, ok,
           f ? "while unrolling under halt: " + std::to_string(f->programs) + " loops, " +
                   std::to_string(counter(*f, "bodies with halt")) + " with halt, " +
                   std::to_string(f->mismatch_count) + " mismatches"
             : "unrollWhileHalt family missing");
  }
  {
    const auto* f = family(all, "boxIsNormalAndHalt");
    bool traced = true;
    std::size_t unknown_reasons = 0;
    if (f) {
      for (const auto& [k, v] : f->counters) {
        if (k.rfind("unknown: ", 0) != 0) continue;
        unknown_reasons += v;
        traced = traced && (k == "unknown: budget" || k == "unknown: oracle budget");
      }
    }
    const double rate = f && f->programs ? double(f->unknown) / double(f->programs) : 1;
    const bool ok = f && f->programs >= kTheoremLoops && f->mismatch_count == 0 &&
                    rate <= kConjectureUnknownRate && traced && unknown_reasons >= f->unknown;
    report(4, ok,
           f ? "box vs normal and halt: " + std::to_string(f->programs) + " loops, " +
                   std::to_string(f->mismatch_count) + " disagreements, " +
                   std::to_string(f->unknown) + " unknown (" + fmt("%.1f", rate * 100) +
                   "%, limit 5%)" + (traced ? "" : ", unknown not from budget")
             : "boxIsNormalAndHalt family missing");
  }

  // 5. example1.prob.
  {
    const auto p = prover::load_problem(corpus + "/example1.prob");
    const auto res = prover::prove(p);
    const auto seq = prover::rule_sequence(*res.root);
    const bool shape = seq == std::vector<std::string>{"assignment", "assignment", "blockBreak",
                                                       "emptyModality"};
    const std::string tree = prover::tree_json(res, 2) + "\n";
    const bool same = tree == slurp(golden + "/example1.tree.json");
    const bool closes = tree.find("\"sequent\": \"==> 1 != 0\"") != std::string::npos;
    const bool ok = res.verdict.kind == prover::Verdict::Kind::Proved && shape && same && closes;
    std::string rules;
    for (const auto& r : seq) rules += (rules.empty() ? "" : ", ") + r;
    report(5, ok,
           "example1.prob: " + std::string(prover::to_string(res.verdict.kind)) + ", rules " + rules +
               ", closes on 1 != 0: " + (closes ? "yes" : "no") + ", golden tree " +
               (same ? "matches" : "differs"));
  }

  // 6. listing3.mj.
  {
    const auto f = lang::parse_fragment(slurp(corpus + "/listing3.mj"));
    using K = interp::Completion::Kind;
    auto run = [&](int x, std::int64_t budget) {
      return interp::exec(f, {{"x", Int(x)}}, budget);
    };
    const auto a = run(3, interp::kDefaultBudget);
    const auto b = run(0, interp::kDefaultBudget);
    const auto c = run(-5, 10000);
    const bool ok = !a.budget_exhausted && a.reason.kind == K::Return &&
                    interp::to_string(a.reason.value) == "3" && !b.budget_exhausted &&
                    b.reason.kind == K::Normal && c.budget_exhausted;
    report(6, ok,
           "listing3.mj: x=3 " + (a.budget_exhausted ? "budget" : interp::to_string(a.reason)) +
               ", x=0 " + (b.budget_exhausted ? "budget" : interp::to_string(b.reason)) +
               ", x=-5 " + (c.budget_exhausted ? "budget_exhausted" : interp::to_string(c.reason)));
  }

  // 7. Invariant soundness fuzz.
  {
    harness::FuzzOptions fo;
    fo.pairs = kFuzzPairs;
    fo.domain = kDomain;
    const auto t = std::chrono::steady_clock::now();
    const auto r = harness::soundness_fuzz(fo);
    const double s = seconds_since(t);
    const bool ok = r.programs >= static_cast<std::size_t>(kFuzzPairs) && r.mismatch_count == 0 &&
                    counter(r, "proved") > 0 && s <= kFuzzSeconds;
    report(7, ok,
           "invariant fuzz: " + std::to_string(r.programs) + " pairs, " +
               std::to_string(counter(r, "proved")) + " proved and re-checked, " +
               std::to_string(r.mismatch_count) + " unsound, " + fmt("%.1f", s) + " s (limit " +
               fmt("%.0f", kFuzzSeconds) + " s)");
  }

  // 8. loopInvariantFor premiss 2.
  {
    const auto frag =
        lang::parse_fragment("params (int i, int n, int x); for (; i < n; i = i + 1) { n = n - x; }");
    calculus::Sequent s;
    s.succ.push_back(logic::f_box(frag.body, logic::parse_formula("i >= n")));
    s.types = std::make_shared<const calculus::TypeMap>(lang::variable_types(frag));
    const auto r = calculus::apply_loop_invariant(s, logic::parse_formula("i <= n + x"));
    bool ok = r.rule == "loopInvariantFor" && r.premisses.size() == 2;
    std::string cont = "?";
    if (ok) {
      const auto& prog = r.premisses[1].sequent.succ[0]->program;
      const auto* att = attempt_in(prog);
      ok = att != nullptr;
      if (att) {
        cont = lang::print_line(att->continuation);
        ok = cont == "i = i + 1; x_1 = false; halt;" &&
             lang::identifiers(frag).count("x_1") == 0 &&
             lang::print_line(prog) ==
                 "boolean x_1 = false; x_1 = true; if (i < n) attempt { n = n - x; } "
                 "continuation { i = i + 1; x_1 = false; halt; }";
      }
    }
    report(8, ok, "loopInvariantFor continuation: " + cont);
  }

  // 9. Do-loop routes.
  {
    const auto r = harness::do_loop_routes(0, kDoLoops, kDomain, so.budget);
    const bool ok = r.programs >= static_cast<std::size_t>(kDoLoops) && r.mismatch_count == 0 &&
                    counter(r, "both decided") > 0;
    report(9, ok,
           "do loops: " + std::to_string(r.programs) + " loops, " +
               std::to_string(counter(r, "both decided")) + " decided by both routes, " +
               std::to_string(r.mismatch_count) + " disagreements");
  }

  std::printf("%s\n", failures == 0 ? "all criteria pass" : "some criteria fail");
  return failures == 0 ? 0 : 1;
}
