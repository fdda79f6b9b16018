#include "loopdl/prover.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "loopdl/error.hpp"
#include "loopdl/parser.hpp"
#include "loopdl/printer.hpp"

namespace loopdl::prover {

using calculus::RuleApp;
using interp::State;
using interp::Value;
using Json = nlohmann::ordered_json;

std::string Interval::str() const { return std::to_string(lo) + ".." + std::to_string(hi); }

Interval parse_interval(const std::string& text) {
  static const std::regex re(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw ConfigError("bad interval '" + text + "'");
  Interval iv{std::stoll(m[1]), std::stoll(m[2])};
  if (iv.lo > iv.hi) throw ConfigError("empty interval '" + text + "'");
  return iv;
}

const Interval& DomainSpec::of(const std::string& name) const {
  auto it = vars.find(name);
  return it == vars.end() ? fallback : it->second;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Open: return "open";
    case Status::Closed: return "closed";
    case Status::Unknown: return "unknown";
    case Status::Refuted: return "refuted";
  }
  return "?";
}

const char* to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Proved: return "proved";
    case Verdict::Kind::Refuted: return "refuted";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// State sets

namespace {

struct DomainTooLarge {};

struct StateSet {
  std::vector<std::string> vars;
  std::vector<lang::Type> types;
  std::vector<State> states;

  interp::VarTable table() const {
    interp::VarTable t;
    for (std::size_t i = 0; i < vars.size(); ++i) t.add(vars[i], types[i]);
    return t;
  }
  bool has(const std::string& v) const {
    return std::find(vars.begin(), vars.end(), v) != vars.end();
  }
};
using SetPtr = std::shared_ptr<const StateSet>;

SetPtr unit_set() {
  auto s = std::make_shared<StateSet>();
  s->states.emplace_back();
  return s;
}

struct Env {
  const calculus::TypeMap* types;
  const DomainSpec* domain;
  std::size_t cap;
};

SetPtr ensure(const SetPtr& s, const std::set<std::string>& names, const Env& env) {
  std::vector<std::string> missing;
  for (const auto& n : names) {
    if (!s->has(n)) missing.push_back(n);
  }
  if (missing.empty()) return s;
  auto out = std::make_shared<StateSet>(*s);
  for (const auto& n : missing) {
    auto it = env.types->find(n);
    if (it == env.types->end()) throw Error("no type for variable '" + n + "'");
    std::vector<Value> values;
    if (it->second == lang::Type::Bool) {
      values = {false, true};
    } else {
      const Interval& iv = env.domain->of(n);
      for (std::int64_t v = iv.lo; v <= iv.hi; ++v) values.emplace_back(Int(v));
    }
    if (out->states.size() * values.size() > env.cap) throw DomainTooLarge{};
    std::vector<State> next;
    next.reserve(out->states.size() * values.size());
    for (const auto& st : out->states) {
      for (const auto& v : values) {
        State ext = st;
        ext.push_back(v);
        next.push_back(std::move(ext));
      }
    }
    out->vars.push_back(n);
    out->types.push_back(it->second);
    out->states = std::move(next);
  }
  return out;
}

SetPtr filter(const SetPtr& s0, const FormulaPtr& f, bool keep, const Env& env) {
  std::set<std::string> fv;
  logic::free_vars(f, fv);
  SetPtr s = ensure(s0, fv, env);
  auto cf = logic::CompiledFormula::compile(f, s->table());
  auto out = std::make_shared<StateSet>();
  out->vars = s->vars;
  out->types = s->types;
  for (const auto& st : s->states) {
    if (cf.eval(st) == keep) out->states.push_back(st);
  }
  if (out->states.size() == s->states.size()) return s;
  return out;
}

// Order of states by variable name, first name most significant.
bool value_less(const Value& a, const Value& b) {
  if (auto* x = std::get_if<Int>(&a)) return *x < std::get<Int>(b);
  return !std::get<bool>(a) && std::get<bool>(b);
}

interp::NamedState named(const StateSet& s, const State& st) {
  interp::NamedState out;
  for (std::size_t i = 0; i < s.vars.size(); ++i) out[s.vars[i]] = st[i];
  return out;
}

// First state (in lexicographic order) falsifying every succedent formula.
std::optional<interp::NamedState> first_falsifier(const SetPtr& s0,
                                                  const std::vector<FormulaPtr>& succ,
                                                  const Env& env, SetPtr* used = nullptr) {
  std::set<std::string> fv;
  for (const auto& f : succ) logic::free_vars(f, fv);
  SetPtr s = ensure(s0, fv, env);
  if (used) *used = s;
  auto table = s->table();
  std::vector<logic::CompiledFormula> cfs;
  for (const auto& f : succ) cfs.push_back(logic::CompiledFormula::compile(f, table));
  std::vector<std::size_t> order(s->vars.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s->vars[a] < s->vars[b]; });
  const State* best = nullptr;
  for (const auto& st : s->states) {
    bool falsified = true;
    for (const auto& cf : cfs) {
      if (cf.eval(st)) {
        falsified = false;
        break;
      }
    }
    if (!falsified) continue;
    if (!best) {
      best = &st;
      continue;
    }
    for (std::size_t i : order) {
      if (value_less(st[i], (*best)[i])) {
        best = &st;
        break;
      }
      if (value_less((*best)[i], st[i])) break;
    }
  }
  if (!best) return std::nullopt;
  return named(*s, *best);
}

bool trivially_closed(const Sequent& s) {
  for (const auto& f : s.ante) {
    if (logic::simplify(f)->k == logic::Formula::K::False) return true;
  }
  for (const auto& f : s.succ) {
    if (logic::simplify(f)->k == logic::Formula::K::True) return true;
  }
  return false;
}

}  // namespace

FoResult close_fo_goal(const Sequent& s, const DomainSpec& domain, std::size_t cap) {
  for (const auto& f : s.ante) {
    if (logic::has_modality(f)) throw Error("goal is not first-order");
  }
  for (const auto& f : s.succ) {
    if (logic::has_modality(f)) throw Error("goal is not first-order");
  }
  FoResult r;
  if (trivially_closed(s)) return r;
  calculus::TypeMap types = s.types ? *s.types : calculus::TypeMap{};
  // Variables without a declared type are integers.
  std::set<std::string> fv;
  for (const auto& f : s.ante) logic::free_vars(f, fv);
  for (const auto& f : s.succ) logic::free_vars(f, fv);
  for (const auto& v : fv) types.emplace(v, lang::Type::Int);
  Env env{&types, &domain, cap};
  try {
    SetPtr set = unit_set();
    for (const auto& f : s.ante) set = filter(set, f, true, env);
    if (auto cex = first_falsifier(set, s.succ, env)) {
      r.kind = FoResult::Kind::Counterexample;
      r.counterexample = std::move(*cex);
    }
  } catch (const DomainTooLarge&) {
    r.kind = FoResult::Kind::Unknown;
    r.reason = "domain-too-large";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Scope {
  std::string flag;
  std::set<std::string> universe;
  std::vector<std::pair<SetPtr, logic::Update>> pending;  // states after one iteration
};

class Search {
public:
  Search(const Problem& p, const Options& o) : p_(p), opt_(o) {
    types_ = std::make_shared<calculus::TypeMap>(lang::variable_types(p.fragment));
  }

  ProofResult run() {
    ProofResult r;
    r.root = std::make_unique<ProofNode>();
    Sequent& root = r.root->sequent;
    if (p_.pre && p_.pre->k != logic::Formula::K::True) root.ante.push_back(p_.pre);
    root.succ.push_back(logic::f_box(p_.fragment.body, p_.post));
    root.types = types_;
    r.root->id = next_id_++;
    SetPtr start = unit_set();
    try {
      for (const auto& f : root.ante) start = filter(start, f, true, env(root));
      expand(r.root.get(), start);
    } catch (const DomainTooLarge&) {
      mark_unknown(r.root.get(), "domain-too-large");
    }
    settle(r.root.get());
    r.stats = stats_;
    r.verdict = verdict_;
    if (refuted_) {
      r.verdict.kind = Verdict::Kind::Refuted;
    } else if (!reasons_.empty()) {
      r.verdict.kind = Verdict::Kind::Unknown;
    }
    r.verdict.reasons.assign(reasons_.begin(), reasons_.end());
    return r;
  }

private:
  Env env(const Sequent& s) const {
    return Env{s.types ? s.types.get() : types_.get(), &p_.domain, opt_.domain_cap};
  }

  ProofNode* add_child(ProofNode* parent, Sequent s) {
    auto child = std::make_unique<ProofNode>();
    child->id = next_id_++;
    child->sequent = std::move(s);
    parent->children.push_back(std::move(child));
    return parent->children.back().get();
  }

  void note_universe(const SetPtr& s) {
    for (auto& sc : scopes_) sc.universe.insert(s->vars.begin(), s->vars.end());
  }

  void finish_leaf(ProofNode* n, Status st, std::string note, const SetPtr& s) {
    n->status = st;
    n->note = std::move(note);
    ++stats_.branches;
    if (s) note_universe(s);
  }

  void mark_unknown(ProofNode* n, const std::string& reason, const std::string& detail = "") {
    finish_leaf(n, Status::Unknown, detail.empty() ? reason : reason + ": " + detail, nullptr);
    reasons_.insert(reason);
  }

  SetPtr premiss_set(const SetPtr& s, const Sequent& parent, const calculus::Premiss& pr) {
    const Env e = env(pr.sequent);
    if (pr.fresh_context) {
      SetPtr out = unit_set();
      for (const auto& f : pr.sequent.ante) out = filter(out, f, true, e);
      return out;
    }
    SetPtr out = s;
    for (std::size_t i = parent.ante.size(); i < pr.sequent.ante.size(); ++i) {
      out = filter(out, pr.sequent.ante[i], true, e);
    }
    return out;
  }

  void fo_leaf(ProofNode* n, const SetPtr& s) {
    if (trivially_closed(n->sequent)) {
      finish_leaf(n, Status::Closed, "closed by simplification", s);
      return;
    }
    SetPtr used;
    auto cex = first_falsifier(s, n->sequent.succ, env(n->sequent), &used);
    if (!cex) {
      finish_leaf(n, Status::Closed,
                  "closed by enumeration of " + std::to_string(used->states.size()) + " states",
                  used);
      return;
    }
    finish_leaf(n, Status::Refuted, "counterexample", used);
    n->counterexample = *cex;
    if (!refuted_) {
      refuted_ = true;
      verdict_.counterexample = *cex;
      verdict_.confirmed = replay(*cex);
    }
  }

  // Runs the fragment from the counterexample and checks that it ends
  // normally or halting in a state violating the postcondition.
  bool replay(const interp::NamedState& cex) const {
    interp::NamedState start;
    for (const auto& prm : p_.fragment.params) {
      auto it = cex.find(prm.name);
      if (it != cex.end()) {
        start[prm.name] = it->second;
      } else if (prm.type == lang::Type::Bool) {
        start[prm.name] = false;
      } else {
        start[prm.name] = Int(p_.domain.of(prm.name).lo);
      }
    }
    try {
      if (p_.pre && !logic::eval_formula(p_.pre, start)) return false;
      auto out = interp::exec(p_.fragment, start, p_.budget);
      if (out.budget_exhausted) return false;
      const auto k = out.reason.kind;
      if (k != interp::Completion::Kind::Normal && k != interp::Completion::Kind::Halt) {
        return false;
      }
      return !logic::eval_formula(p_.post, out.state);
    } catch (const Error&) {
      return false;
    }
  }

  LoopPolicy policy_for(int line) const {
    if (auto it = p_.policies.find(line); it != p_.policies.end()) return it->second;
    if (p_.invariants.count(line)) return {LoopPolicy::Kind::Invariant, 0};
    return {LoopPolicy::Kind::Unwind, opt_.default_unwind};
  }

  // The rule for an active loop, or nullopt when the unwind bound is hit.
  std::optional<RuleApp> loop_rule(const Sequent& s, const lang::Stmt& loop) {
    if (auto* f = std::get_if<lang::For>(&loop.node); f && !f->init.empty()) {
      return calculus::pull_out_initializer(s);
    }
    const int line = loop.pos.line;
    const bool is_do = std::holds_alternative<lang::DoWhile>(loop.node);
    const LoopPolicy pol = policy_for(line);
    if (pol.kind == LoopPolicy::Kind::Invariant) {
      if (is_do) return calculus::transform_do_to_while(s);
      auto it = p_.invariants.find(line);
      if (it == p_.invariants.end()) {
        throw ConfigError("no invariant for the loop at line " + std::to_string(line));
      }
      return calculus::apply_loop_invariant(s, it->second);
    }
    if (is_do && opt_.do_to_while) return calculus::transform_do_to_while(s);
    if (loop.unrolled >= pol.max_unwind) return std::nullopt;
    return calculus::unwind_loop(s);
  }

  void expand(ProofNode* node, SetPtr s) {
    while (true) {
      if (++stats_.nodes > opt_.node_limit) {
        mark_unknown(node, "node-limit");
        return;
      }
      if (s->states.empty()) {
        finish_leaf(node, Status::Closed, "no state in the domain satisfies the antecedent", s);
        return;
      }
      const Sequent& seq = node->sequent;
      auto focus = calculus::find_focus(seq);
      if (!focus) {
        try {
          fo_leaf(node, s);
        } catch (const DomainTooLarge&) {
          mark_unknown(node, "domain-too-large");
        }
        return;
      }
      RuleApp app;
      if (const lang::Stmt* loop = calculus::focus_loop(seq)) {
        auto r = loop_rule(seq, *loop);
        if (!r) {
          note_universe(s);
          mark_unknown(node, "budget",
                       "loop at line " + std::to_string(loop->pos.line) + " unwound " +
                           std::to_string(loop->unrolled) + " times");
          return;
        }
        app = std::move(*r);
      } else {
        app = calculus::symbolic_step(seq);
      }
      node->rule = app.rule;
      node->inst = app.inst;
      ++stats_.rules[app.rule];

      if (app.rule == "halt" || app.rule == "emptyModality") {
        for (auto& sc : scopes_) {
          const logic::TermPtr* v = focus->update.find(sc.flag);
          if (v && logic::is_false(*v)) sc.pending.emplace_back(s, focus->update);
        }
      }
      if (app.premisses.empty()) {
        finish_leaf(node, Status::Closed, "closed by " + app.rule, s);
        return;
      }
      if (app.rule == "loopInvariantWhile" || app.rule == "loopInvariantFor") {
        invariant_step(node, s, app, focus->update);
        return;
      }
      if (app.premisses.size() == 1) {
        SetPtr next;
        try {
          next = premiss_set(s, seq, app.premisses[0]);
        } catch (const DomainTooLarge&) {
          ProofNode* child = add_child(node, app.premisses[0].sequent);
          mark_unknown(child, "domain-too-large");
          return;
        }
        node = add_child(node, std::move(app.premisses[0].sequent));
        s = std::move(next);
        continue;
      }
      const Sequent parent = seq;
      for (auto& pr : app.premisses) {
        ProofNode* child = add_child(node, pr.sequent);
        SetPtr cs;
        try {
          cs = premiss_set(s, parent, pr);
        } catch (const DomainTooLarge&) {
          ++stats_.nodes;
          mark_unknown(child, "domain-too-large");
          continue;
        }
        expand(child, std::move(cs));
      }
      return;
    }
  }

  void invariant_step(ProofNode* node, const SetPtr& s, RuleApp& app, const logic::Update& u) {
    std::string flag;
    for (const auto& [k, v] : app.inst) {
      if (k == "flag") flag = v;
    }
    const Sequent parent = node->sequent;
    ProofNode* initially = add_child(node, app.premisses[0].sequent);
    ProofNode* preserved = add_child(node, app.premisses[1].sequent);
    expand(initially, s);

    scopes_.push_back(Scope{flag, {}, {}});
    try {
      expand(preserved, premiss_set(s, parent, app.premisses[1]));
    } catch (const DomainTooLarge&) {
      ++stats_.nodes;
      mark_unknown(preserved, "domain-too-large");
    }
    Scope done = std::move(scopes_.back());
    scopes_.pop_back();
    for (auto& sc : scopes_) sc.universe.insert(done.universe.begin(), done.universe.end());

    // The induction over the bounded domain needs the loop to be entered,
    // and each iteration to end, inside the domain for every variable the
    // preservation premiss reads.
    std::vector<std::string> watched;
    for (const auto& v : done.universe) {
      auto it = types_for(parent).find(v);
      if (v != flag && it != types_for(parent).end() && it->second == lang::Type::Int) {
        watched.push_back(v);
      }
    }
    bool escapes = leaves_domain(s, u, watched, parent);
    for (const auto& [ps, pu] : done.pending) {
      if (escapes) break;
      escapes = leaves_domain(ps, pu, watched, app.premisses[1].sequent);
    }
    if (escapes) {
      escaped_.insert(node->id);
      reasons_.insert("domain-escape");
      node->note = "a state entering or continuing the loop leaves the domain";
    }
  }

  const calculus::TypeMap& types_for(const Sequent& s) const {
    return s.types ? *s.types : *types_;
  }

  bool leaves_domain(const SetPtr& s, const logic::Update& u, const std::vector<std::string>& vars,
                     const Sequent& context) {
    for (const auto& v : vars) {
      const logic::TermPtr* t = u.find(v);
      if (!t) continue;
      const Interval& iv = p_.domain.of(v);
      auto inside = logic::f_atom(
          logic::t_bin(lang::BinaryOp::And,
                       logic::t_bin(lang::BinaryOp::Le, logic::t_int(Int(iv.lo)), *t),
                       logic::t_bin(lang::BinaryOp::Le, *t, logic::t_int(Int(iv.hi)))));
      try {
        if (!filter(s, inside, false, env(context))->states.empty()) return true;
      } catch (const DomainTooLarge&) {
        return true;
      }
    }
    return false;
  }

  // Statuses of inner nodes from their children.
  Status settle(ProofNode* n) {
    if (n->children.empty()) {
      if (n->status == Status::Open) n->status = Status::Unknown;
      return n->status;
    }
    bool refuted = false, unknown = false;
    for (auto& c : n->children) {
      const Status st = settle(c.get());
      refuted = refuted || st == Status::Refuted;
      unknown = unknown || st == Status::Unknown || st == Status::Open;
    }
    if (escaped_.count(n->id)) unknown = true;
    n->status = refuted ? Status::Refuted : unknown ? Status::Unknown : Status::Closed;
    return n->status;
  }

  const Problem& p_;
  Options opt_;
  std::shared_ptr<const calculus::TypeMap> types_;
  int next_id_ = 0;
  Stats stats_;
  Verdict verdict_;
  bool refuted_ = false;
  std::set<std::string> reasons_;
  std::set<int> escaped_;
  std::vector<Scope> scopes_;
};

}  // namespace

ProofResult prove(const Problem& p, const Options& opt) {
  validate(p);
  return Search(p, opt).run();
}

// ---------------------------------------------------------------------------
// Problems

void validate(const Problem& p) {
  if (!p.post) throw ConfigError("problem has no postcondition");
  const auto types = lang::variable_types(p.fragment);
  auto check = [&](const FormulaPtr& f, const std::string& what) {
    if (!f) return;
    if (logic::has_modality(f)) throw ConfigError(what + " must be first-order");
    std::set<std::string> fv;
    logic::free_vars(f, fv);
    for (const auto& v : fv) {
      if (!types.count(v)) throw ConfigError(what + " mentions unknown variable '" + v + "'");
    }
  };
  check(p.pre, "precondition");
  check(p.post, "postcondition");
  for (const auto& [line, inv] : p.invariants) {
    check(inv, "invariant at line " + std::to_string(line));
    if (!lang::find_loop_at(p.fragment.body, line)) {
      throw ConfigError("no loop header at line " + std::to_string(line));
    }
  }
  for (const auto& [line, pol] : p.policies) {
    if (!lang::find_loop_at(p.fragment.body, line)) {
      throw ConfigError("no loop header at line " + std::to_string(line));
    }
    if (pol.kind == LoopPolicy::Kind::Invariant && !p.invariants.count(line)) {
      throw ConfigError("invariant policy without invariant at line " + std::to_string(line));
    }
  }
  for (const auto& [v, iv] : p.domain.vars) {
    if (!types.count(v)) throw ConfigError("domain for unknown variable '" + v + "'");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FormulaPtr formula_field(const std::string& text, const std::string& what) {
  try {
    return logic::parse_formula(text);
  } catch (const ParseError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

int line_key(const std::string& key, const std::string& prefix) {
  try {
    std::size_t used = 0;
    int line = std::stoi(key.substr(prefix.size()), &used);
    if (used == key.size() - prefix.size() && line > 0) return line;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad line number in '" + key + "'");
}

}  // namespace

Problem parse_problem(const std::string& text, const std::string& base_dir) {
  Problem p;
  p.pre = logic::f_true();
  std::string program_path;
  std::vector<std::pair<std::string, std::string>> domains;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key: value'");
    }
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (key == "program") {
      program_path = value;
    } else if (key == "pre") {
      p.pre = formula_field(value, "pre");
    } else if (key == "post") {
      p.post = formula_field(value, "post");
    } else if (key.rfind("invariant@", 0) == 0) {
      p.invariants[line_key(key, "invariant@")] = formula_field(value, key);
    } else if (key.rfind("policy@", 0) == 0) {
      const int l = line_key(key, "policy@");
      static const std::regex unwind_re(R"(unwind\((\d+)\))");
      std::smatch m;
      if (value == "invariant") {
        p.policies[l] = {LoopPolicy::Kind::Invariant, 0};
      } else if (std::regex_match(value, m, unwind_re)) {
        p.policies[l] = {LoopPolicy::Kind::Unwind, std::stoi(m[1])};
      } else {
        throw ConfigError(key + ": expected 'invariant' or 'unwind(<k>)'");
      }
    } else if (key == "domain") {
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("domain: expected '<var>=<lo>..<hi>'");
        domains.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
      }
    } else if (key == "budget") {
      try {
        p.budget = std::stoll(value);
      } catch (const std::exception&) {
        throw ConfigError("budget: expected a number");
      }
      if (p.budget <= 0) throw ConfigError("budget must be positive");
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (program_path.empty()) throw ConfigError("problem has no 'program:' line");
  if (!p.post) throw ConfigError("problem has no 'post:' line");
  std::string path = program_path;
  if (!path.empty() && path[0] != '/' && !base_dir.empty()) path = base_dir + "/" + path;
  try {
    p.fragment = lang::parse_fragment(read_file(path));
  } catch (const ParseError& e) {
    throw ConfigError(program_path + ":" + e.what());
  }
  for (const auto& [v, iv] : domains) {
    if (v == "*") {
      p.domain.fallback = parse_interval(iv);
      p.domain.fallback_given = true;
    } else {
      p.domain.vars[v] = parse_interval(iv);
    }
  }
  validate(p);
  return p;
}

Problem load_problem(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const std::string dir = slash == std::string::npos ? "." : path.substr(0, slash);
  return parse_problem(read_file(path), dir);
}

// ---------------------------------------------------------------------------
// Output

namespace {

Json value_json(const Value& v) {
  if (auto* b = std::get_if<bool>(&v)) return *b;
  if (auto* i = std::get_if<Int>(&v)) {
    if (auto small = i->to_int64()) return *small;
    return i->str();
  }
  return nullptr;
}

Json state_json(const interp::NamedState& s) {
  Json o = Json::object();
  for (const auto& [k, v] : s) o[k] = value_json(v);
  return o;
}

Json node_json(const ProofNode& n) {
  Json o;
  o["id"] = n.id;
  o["rule"] = n.rule.empty() ? Json(nullptr) : Json(n.rule);
  Json inst = Json::object();
  for (const auto& [k, v] : n.inst) inst[k] = v;
  o["inst"] = inst;
  o["sequent"] = calculus::print(n.sequent);
  o["status"] = to_string(n.status);
  if (!n.note.empty()) o["note"] = n.note;
  if (n.counterexample) o["counterexample"] = state_json(*n.counterexample);
  Json kids = Json::array();
  for (const auto& c : n.children) kids.push_back(node_json(*c));
  o["children"] = kids;
  return o;
}

void collect_rules(const ProofNode& n, std::vector<std::string>& out) {
  if (!n.rule.empty()) out.push_back(n.rule);
  for (const auto& c : n.children) collect_rules(*c, out);
}

void pretty(const ProofNode& n, int depth, std::ostringstream& os) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << '[' << n.id << "] ";
  os << (n.rule.empty() ? std::string("-") : n.rule) << "  " << calculus::print(n.sequent);
  if (n.children.empty()) {
    os << "  <" << to_string(n.status);
    if (!n.note.empty()) os << ": " << n.note;
    os << '>';
  }
  os << '\n';
  for (const auto& c : n.children) pretty(*c, depth + 1, os);
}

}  // namespace

std::vector<std::string> rule_sequence(const ProofNode& root) {
  std::vector<std::string> out;
  collect_rules(root, out);
  return out;
}

std::string report_json(const ProofResult& r, const Problem& p, bool with_tree, int indent) {
  Json o;
  o["format"] = 1;
  o["verdict"] = to_string(r.verdict.kind);
  Json dom;
  dom["default"] = p.domain.fallback.str();
  Json vars = Json::object();
  for (const auto& [k, v] : p.domain.vars) vars[k] = v.str();
  dom["vars"] = vars;
  o["domain"] = dom;
  if (r.verdict.kind == Verdict::Kind::Refuted) {
    o["counterexample"] = state_json(r.verdict.counterexample);
    o["confirmed"] = r.verdict.confirmed;
  }
  if (r.verdict.kind == Verdict::Kind::Unknown) o["reasons"] = r.verdict.reasons;
  Json stats;
  stats["nodes"] = r.stats.nodes;
  stats["branches"] = r.stats.branches;
  Json rules = Json::object();
  for (const auto& [k, v] : r.stats.rules) rules[k] = v;
  stats["rules"] = rules;
  o["stats"] = stats;
  if (with_tree && r.root) o["tree"] = node_json(*r.root);
  return o.dump(indent);
}

std::string tree_json(const ProofResult& r, int indent) {
  Json o;
  o["format"] = 1;
  o["root"] = r.root ? node_json(*r.root) : Json(nullptr);
  return o.dump(indent);
}

std::string pretty_tree(const ProofResult& r) {
  std::ostringstream os;
  if (r.root) pretty(*r.root, 0, os);
  return os.str();
}

}  // namespace loopdl::prover
