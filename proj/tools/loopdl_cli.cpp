// Command-line front end over the C API. Machine output is JSON on stdout;
// --pretty switches to a human rendering.
//
// Exit codes: 0 proved / ok, 1 refuted / mismatches, 2 unknown,
// 3 usage or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "loopdl/loopdl.h"

namespace {

constexpr int kUsage = 3;

struct Domain {
  bool given = false;
  long long lo = 0, hi = 0;
};

bool parse_domain(const std::string& text, Domain& d) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return false;
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    d.lo = std::stoll(a, &used);
    if (used != a.size()) return false;
    d.hi = std::stoll(b, &used);
    if (used != b.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  d.given = true;
  return d.lo <= d.hi;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Prints the result or its error; returns the exit code for a failed call,
// or -1 when the call succeeded.
int failure(loopdl_status st, loopdl_result* r) {
  if (st == LOOPDL_OK) return -1;
  std::cerr << "error: " << loopdl_result_error(r) << "\n";
  loopdl_result_free(r);
  return kUsage;
}

void emit(loopdl_result* r, bool pretty) {
  const char* p = pretty ? loopdl_result_part(r, "pretty") : nullptr;
  if (p) {
    std::cout << p;
    const std::string s(p);
    if (!s.empty() && s.back() != '\n') std::cout << "\n";
  } else {
    std::cout << loopdl_result_text(r) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for a Java-like language with abrupt completion"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Human-readable output instead of JSON");
  app.set_version_flag("--version", std::string(loopdl_version()));

  std::string domain_text;
  Domain domain;
  auto domain_check = [&](const std::string& s) -> std::string {
    Domain d;
    return parse_domain(s, d) ? "" : "expected lo..hi with lo <= hi";
  };

  // interpret
  auto* interp = app.add_subcommand("interpret", "Run a fragment and print its outcome");
  std::string interp_file, state_text;
  long long budget = 0;
  bool plain = false;
  interp->add_option("file", interp_file, "Program file (.mj)")->required();
  interp->add_option("--state", state_text, "Initial state, e.g. x=3,b=true");
  interp->add_option("--budget", budget, "Step budget");
  interp->add_flag("--plain", plain, "Reject attempt and halt statements");

  // prove
  auto* prove = app.add_subcommand("prove", "Prove a problem file");
  std::string prob_file, tree_out;
  bool stats = false, do_to_while = false;
  int unwind_k = 0;
  long long node_limit = 0;
  prove->add_option("problem", prob_file, "Problem file (.prob)")->required();
  prove->add_option("--tree", tree_out, "Write the proof tree as JSON to this file");
  prove->add_flag("--stats", stats, "Include node and branch counts");
  prove->add_option("--domain", domain_text, "Default domain lo..hi")->check(domain_check);
  prove->add_option("--unwind", unwind_k, "Default unwinding bound")->check(CLI::PositiveNumber);
  prove->add_flag("--do-to-while", do_to_while, "Unwind do loops through transformDoToWhile");
  prove->add_option("--node-limit", node_limit, "Maximum proof nodes")->check(CLI::PositiveNumber);

  // unwind
  auto* unwind = app.add_subcommand("unwind", "Unwind the loop on a line k times");
  std::string unwind_file;
  int at = 0, k = 1;
  unwind->add_option("file", unwind_file, "Program file (.mj)")->required();
  unwind->add_option("--at", at, "Line of the loop header")->required();
  unwind->add_option("-k", k, "Number of unwindings")->check(CLI::NonNegativeNumber);

  // check-axioms, fuzz and do-loops share their options.
  loopdl_check_options copt;
  loopdl_check_options_init(&copt);
  std::string suite = "all";
  auto* check = app.add_subcommand("check-axioms", "Differential check of the axioms");
  check->add_option("--suite", suite, "fig1|fig2|fig3|fig4|thm1|thm2|conj1|all")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "thm1", "thm2", "conj1", "all"}));
  auto* fuzz = app.add_subcommand("fuzz", "Soundness fuzzing of the invariant rules");
  auto* doloops = app.add_subcommand("do-loops", "Compare the two do-loop routes");
  int count = 0;
  for (auto* sub : {check, fuzz, doloops}) {
    sub->add_option("--domain", domain_text, "Variable domain lo..hi")->check(domain_check);
    sub->add_option("--seed", copt.seed, "Generator seed");
    sub->add_option("--budget", copt.budget, "Interpreter step budget");
  }
  check->add_option("--programs", count, "Programs per family")->check(CLI::PositiveNumber);
  fuzz->add_option("--pairs", count, "Program and invariant pairs")->check(CLI::PositiveNumber);
  doloops->add_option("--loops", count, "Generated do loops")->check(CLI::PositiveNumber);

  // explain
  auto* explain = app.add_subcommand("explain", "Show a calculus rule, or list them all");
  std::string rule;
  explain->add_option("rule", rule, "Rule name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (!domain_text.empty()) {
    parse_domain(domain_text, domain);
  } else if (const char* env = std::getenv("LOOPDL_DOMAIN"); env && *env) {
    if (!parse_domain(env, domain)) {
      std::cerr << "error: LOOPDL_DOMAIN must be lo..hi, got '" << env << "'\n";
      return kUsage;
    }
  }

  loopdl_result* r = nullptr;
  try {
    if (*interp) {
      const std::string src = read_file(interp_file);
      const auto st = loopdl_interpret(src.c_str(), state_text.c_str(), budget, plain ? 1 : 0, &r);
      if (int code = failure(st, r); code >= 0) return code;
      emit(r, pretty);
      loopdl_result_free(r);
      return 0;
    }
    if (*prove) {
      loopdl_prove_options opt;
      loopdl_prove_options_init(&opt);
      if (domain.given) {
        opt.has_domain = 1;
        opt.domain_lo = domain.lo;
        opt.domain_hi = domain.hi;
      }
      opt.default_unwind = unwind_k;
      opt.do_to_while = do_to_while ? 1 : 0;
      opt.node_limit = node_limit;
      const auto st = loopdl_prove_file(prob_file.c_str(), &opt, &r);
      if (int code = failure(st, r); code >= 0) return code;
      if (!tree_out.empty()) {
        std::ofstream out(tree_out);
        if (!out) {
          std::cerr << "error: cannot write " << tree_out << "\n";
          loopdl_result_free(r);
          return kUsage;
        }
        out << loopdl_result_part(r, "tree") << "\n";
      }
      if (pretty) {
        emit(r, true);
      } else {
        auto j = nlohmann::ordered_json::parse(loopdl_result_text(r));
        if (!stats) j.erase("stats");
        std::cout << j.dump() << "\n";
      }
      const int verdict = loopdl_result_verdict(r);
      loopdl_result_free(r);
      return verdict;
    }
    if (*unwind) {
      const std::string src = read_file(unwind_file);
      const auto st = loopdl_unwind(src.c_str(), at, k, &r);
      if (int code = failure(st, r); code >= 0) return code;
      const std::string text = loopdl_result_text(r);
      std::cout << text << (text.empty() || text.back() != '\n' ? "\n" : "");
      loopdl_result_free(r);
      return 0;
    }
    if (*check || *fuzz || *doloops) {
      if (domain.given) {
        copt.domain_lo = domain.lo;
        copt.domain_hi = domain.hi;
      } else {
        copt.domain_lo = -4;
        copt.domain_hi = 4;
      }
      if (count > 0) {
        copt.programs = count;
      } else {
        copt.programs = *check ? 500 : *fuzz ? 1000 : 100;
      }
      loopdl_status st;
      if (*check) {
        st = loopdl_check_axioms(suite.c_str(), &copt, &r);
      } else if (*fuzz) {
        st = loopdl_fuzz(&copt, &r);
      } else {
        st = loopdl_do_loops(&copt, &r);
      }
      if (int code = failure(st, r); code >= 0) return code;
      emit(r, pretty);
      const int verdict = loopdl_result_verdict(r);
      loopdl_result_free(r);
      return verdict == LOOPDL_PROVED ? 0 : 1;
    }
    if (*explain) {
      const auto st = loopdl_explain(rule.empty() ? nullptr : rule.c_str(), &r);
      if (int code = failure(st, r); code >= 0) return code;
      emit(r, pretty);
      loopdl_result_free(r);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (r) loopdl_result_free(r);
    return kUsage;
  }
  std::cerr << app.help();
  return kUsage;
}
