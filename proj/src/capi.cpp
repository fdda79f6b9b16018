#include "loopdl/loopdl.h"

#include <chrono>
#include <map>
#include <sstream>

#include "json.hpp"
#include "loopdl/calculus.hpp"
#include "loopdl/error.hpp"
#include "loopdl/fragment.hpp"
#include "loopdl/harness.hpp"
#include "loopdl/interp.hpp"
#include "loopdl/parser.hpp"
#include "loopdl/printer.hpp"
#include "loopdl/prover.hpp"

struct loopdl_result {
  std::string text;
  std::map<std::string, std::string> parts;
  std::string error;
  int verdict = LOOPDL_PROVED;
};

using namespace loopdl;
using Json = nlohmann::ordered_json;

namespace {

template <class F>
loopdl_status guarded(loopdl_result** out, F&& body) {
  auto r = std::make_unique<loopdl_result>();
  loopdl_status st = LOOPDL_OK;
  try {
    body(*r);
  } catch (const ParseError& e) {
    st = LOOPDL_ERR_PARSE;
    r->error = e.what();
  } catch (const Error& e) {
    st = LOOPDL_ERR_CONFIG;
    r->error = e.what();
  } catch (const std::exception& e) {
    st = LOOPDL_ERR_INTERNAL;
    r->error = e.what();
  }
  if (out) *out = r.release();
  return st;
}

Json value_json(const interp::Value& v) {
  if (auto* b = std::get_if<bool>(&v)) return *b;
  if (auto* i = std::get_if<Int>(&v)) {
    if (auto small = i->to_int64()) return *small;
    return i->str();
  }
  return nullptr;
}

Json reason_json(const interp::Completion& c) {
  using K = interp::Completion::Kind;
  Json label = c.label ? Json(*c.label) : Json(nullptr);
  switch (c.kind) {
    case K::Normal: return "normal";
    case K::Halt: return "halt";
    case K::Break: return Json{{"break", label}};
    case K::Continue: return Json{{"continue", label}};
    case K::Return: return Json{{"return", value_json(c.value)}};
    case K::Thrown:
      return Json{{"thrown", c.div_by_zero ? Json("div_by_zero") : value_json(c.value)}};
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

interp::NamedState parse_state(const std::string& text, const lang::Fragment& f) {
  const auto types = lang::variable_types(f);
  interp::NamedState s;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("state entry '" + item + "' is not name=value");
    const std::string name = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    auto it = types.find(name);
    if (it == types.end()) throw ConfigError("state names unknown variable '" + name + "'");
    if (it->second == lang::Type::Bool) {
      if (value != "true" && value != "false") {
        throw ConfigError("'" + name + "' needs true or false");
      }
      s[name] = value == "true";
    } else {
      try {
        s[name] = Int::parse(value);
      } catch (const std::exception&) {
        throw ConfigError("'" + name + "' needs an integer, got '" + value + "'");
      }
    }
  }
  return s;
}

std::string named_text(const interp::NamedState& s) {
  std::string out;
  for (const auto& [k, v] : s) {
    if (!out.empty()) out += ", ";
    out += k + " = " + interp::to_string(v);
  }
  return out;
}

}  // namespace

extern "C" {

void loopdl_prove_options_init(loopdl_prove_options* opt) {
  *opt = loopdl_prove_options{0, -8, 8, 0, 0, 0};
}

void loopdl_check_options_init(loopdl_check_options* opt) {
  *opt = loopdl_check_options{-4, 4, 0, 500, 20000};
}

loopdl_status loopdl_interpret(const char* source, const char* state, long long budget, int plain,
                               loopdl_result** out) {
  return guarded(out, [&](loopdl_result& r) {
    lang::ParseOptions po;
    po.allow_extended = plain == 0;
    auto f = lang::parse_fragment(source ? source : "", po);
    auto start = parse_state(state ? state : "", f);
    auto o = interp::exec(f, start, budget > 0 ? budget : interp::kDefaultBudget);
    Json j;
    if (o.budget_exhausted) {
      j["reason"] = "budget_exhausted";
      r.parts["pretty"] = "budget exhausted";
    } else {
      j["reason"] = reason_json(o.reason);
      Json st = Json::object();
      for (const auto& [k, v] : o.state) st[k] = value_json(v);
      j["state"] = st;
      r.parts["pretty"] = interp::to_string(o.reason) + "\n" + named_text(o.state);
    }
    r.text = j.dump();
  });
}

loopdl_status loopdl_prove_file(const char* path, const loopdl_prove_options* opt,
                                loopdl_result** out) {
  return guarded(out, [&](loopdl_result& r) {
    if (!path) throw ConfigError("no problem file");
    prover::Problem p = prover::load_problem(path);
    prover::Options o;
    if (opt) {
      if (opt->has_domain) {
        if (opt->domain_lo > opt->domain_hi) throw ConfigError("empty default domain");
        // An explicit `*=` entry in the problem still wins.
        if (!p.domain.fallback_given) p.domain.fallback = {opt->domain_lo, opt->domain_hi};
      }
      if (opt->default_unwind > 0) o.default_unwind = opt->default_unwind;
      if (opt->node_limit > 0) o.node_limit = static_cast<std::size_t>(opt->node_limit);
      o.do_to_while = opt->do_to_while != 0;
    }
    auto res = prover::prove(p, o);
    r.text = prover::report_json(res, p, false);
    r.parts["tree"] = prover::tree_json(res, 2);
    std::string pretty = std::string(prover::to_string(res.verdict.kind));
    if (res.verdict.kind == prover::Verdict::Kind::Refuted) {
      pretty += " (" + named_text(res.verdict.counterexample) + ")";
    }
    for (const auto& why : res.verdict.reasons) pretty += " [" + why + "]";
    pretty += "\n" + prover::pretty_tree(res);
    r.parts["pretty"] = pretty;
    r.verdict = static_cast<int>(res.verdict.kind);
  });
}

loopdl_status loopdl_unwind(const char* source, int line, int k, loopdl_result** out) {
  return guarded(out, [&](loopdl_result& r) {
    if (k < 0) throw ConfigError("k must not be negative");
    auto f = lang::parse_fragment(source ? source : "");
    r.text = lang::print(lang::unwind_at(f, line, k));
  });
}

loopdl_status loopdl_check_axioms(const char* suite, const loopdl_check_options* opt,
                                  loopdl_result** out) {
  return guarded(out, [&](loopdl_result& r) {
    loopdl_check_options o;
    loopdl_check_options_init(&o);
    if (opt) o = *opt;
    harness::SuiteOptions so;
    if (o.domain_lo > o.domain_hi) throw ConfigError("empty domain");
    so.domain = {o.domain_lo, o.domain_hi};
    so.seed = o.seed;
    so.programs = o.programs;
    so.budget = o.budget;
    auto rep = harness::run_suite(suite ? suite : "all", so);
    r.text = harness::report_json(rep);
    r.parts["pretty"] = harness::report_text(rep);
    r.verdict = rep.mismatches() == 0 ? LOOPDL_PROVED : LOOPDL_REFUTED;
  });
}

loopdl_status loopdl_fuzz(const loopdl_check_options* opt, loopdl_result** out) {
  return guarded(out, [&](loopdl_result& r) {
    loopdl_check_options o;
    loopdl_check_options_init(&o);
    if (opt) o = *opt;
    harness::FuzzOptions fo;
    fo.seed = o.seed;
    fo.pairs = o.programs;
    fo.domain = {o.domain_lo, o.domain_hi};
    fo.budget = o.budget;
    const auto t0 = std::chrono::steady_clock::now();
    auto rep = harness::soundness_fuzz(fo);
    r.text = harness::report_json(rep);
    harness::SuiteReport sr;
    sr.suite = "fuzz";
    sr.options.domain = fo.domain;
    sr.options.seed = fo.seed;
    sr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sr.families.push_back(rep);
    r.parts["pretty"] = harness::report_text(sr);
    r.verdict = rep.mismatch_count == 0 ? LOOPDL_PROVED : LOOPDL_REFUTED;
  });
}

loopdl_status loopdl_do_loops(const loopdl_check_options* opt, loopdl_result** out) {
  return guarded(out, [&](loopdl_result& r) {
    loopdl_check_options o;
    loopdl_check_options_init(&o);
    if (opt) o = *opt;
    const auto t0 = std::chrono::steady_clock::now();
    auto rep = harness::do_loop_routes(o.seed, o.programs, {o.domain_lo, o.domain_hi}, o.budget);
    r.text = harness::report_json(rep);
    harness::SuiteReport sr;
    sr.suite = "do-loops";
    sr.options.domain = {o.domain_lo, o.domain_hi};
    sr.options.seed = o.seed;
    sr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sr.families.push_back(rep);
    r.parts["pretty"] = harness::report_text(sr);
    r.verdict = rep.mismatch_count == 0 ? LOOPDL_PROVED : LOOPDL_REFUTED;
  });
}

loopdl_status loopdl_explain(const char* rule, loopdl_result** out) {
  return guarded(out, [&](loopdl_result& r) {
    auto entry = [](const calculus::RuleInfo& i) {
      return Json{{"name", i.name}, {"premisses", i.premisses}, {"schema", i.schema},
                  {"origin", i.origin}};
    };
    Json j;
    j["format"] = 1;
    if (!rule) {
      Json all = Json::array();
      std::string pretty;
      for (const auto& i : calculus::rule_catalog()) {
        all.push_back(entry(i));
        pretty += i.name + "\n";
      }
      j["rules"] = all;
      r.parts["pretty"] = pretty;
    } else {
      const auto* i = calculus::find_rule(rule);
      if (!i) throw ConfigError(std::string("unknown rule '") + rule + "'");
      j["rule"] = entry(*i);
      r.parts["pretty"] = i->name + " (" + std::to_string(i->premisses) + " premiss" +
                          (i->premisses == 1 ? "" : "es") + ")\n" + i->schema + "\n" + i->origin +
                          "\n";
    }
    r.text = j.dump();
  });
}

const char* loopdl_result_text(const loopdl_result* r) { return r ? r->text.c_str() : ""; }

const char* loopdl_result_part(const loopdl_result* r, const char* name) {
  if (!r || !name) return nullptr;
  auto it = r->parts.find(name);
  return it == r->parts.end() ? nullptr : it->second.c_str();
}

const char* loopdl_result_error(const loopdl_result* r) { return r ? r->error.c_str() : ""; }

int loopdl_result_verdict(const loopdl_result* r) { return r ? r->verdict : LOOPDL_UNKNOWN; }

void loopdl_result_free(loopdl_result* r) { delete r; }

const char* loopdl_version(void) { return "0.1.0"; }

}  // extern "C"
