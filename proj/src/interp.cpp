#include "loopdl/interp.hpp"

#include <algorithm>

#include "loopdl/error.hpp"
#include "loopdl/parser.hpp"

namespace loopdl::interp {

using lang::BinaryOp;

std::string to_string(const Value& v) {
  if (auto* i = std::get_if<Int>(&v)) return i->str();
  if (auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return "unset";
}

bool operator==(const Completion& a, const Completion& b) {
  return a.kind == b.kind && a.label == b.label && a.value == b.value &&
         a.div_by_zero == b.div_by_zero;
}

std::string to_string(const Completion& c) {
  switch (c.kind) {
    case Completion::Kind::Normal: return "normal";
    case Completion::Kind::Break: return c.label ? "break " + *c.label : "break";
    case Completion::Kind::Continue: return c.label ? "continue " + *c.label : "continue";
    case Completion::Kind::Return:
      return is_set(c.value) ? "return " + to_string(c.value) : "return";
    case Completion::Kind::Thrown:
      return c.div_by_zero ? "thrown div_by_zero" : "thrown " + to_string(c.value);
    case Completion::Kind::Halt: return "halt";
  }
  return "?";
}

bool CompletionSet::contains(const Completion& c) const {
  switch (c.kind) {
    case Completion::Kind::Normal: return normal;
    case Completion::Kind::Break: return c.label ? brk_labels.contains(*c.label) : brk;
    case Completion::Kind::Continue: return c.label ? cont_labels.contains(*c.label) : cont;
    case Completion::Kind::Return: return ret;
    case Completion::Kind::Thrown: return thrown;
    case Completion::Kind::Halt: return halt;
  }
  return false;
}

CompletionSet CompletionSet::normal_only() {
  CompletionSet s;
  s.normal = true;
  return s;
}
CompletionSet CompletionSet::halt_only() {
  CompletionSet s;
  s.halt = true;
  return s;
}
CompletionSet CompletionSet::break_unlabeled() {
  CompletionSet s;
  s.brk = true;
  return s;
}
CompletionSet CompletionSet::continue_unlabeled() {
  CompletionSet s;
  s.cont = true;
  return s;
}
CompletionSet CompletionSet::break_label(const std::string& l) {
  CompletionSet s;
  s.brk_labels = LabelSet::only(l);
  return s;
}
CompletionSet CompletionSet::continue_label(const std::string& l) {
  CompletionSet s;
  s.cont_labels = LabelSet::only(l);
  return s;
}
CompletionSet CompletionSet::return_only() {
  CompletionSet s;
  s.ret = true;
  return s;
}
CompletionSet CompletionSet::thrown_only() {
  CompletionSet s;
  s.thrown = true;
  return s;
}
CompletionSet CompletionSet::abrupt_jumps() {
  CompletionSet s;
  s.brk = s.cont = true;
  s.brk_labels = s.cont_labels = LabelSet::all();
  return s;
}
CompletionSet CompletionSet::all_but_halt() {
  CompletionSet s = abrupt_jumps();
  s.normal = s.ret = s.thrown = true;
  return s;
}
CompletionSet CompletionSet::breaking(const lang::Label& l) {
  CompletionSet s = break_unlabeled();
  if (l) s.brk_labels = LabelSet::only(*l);
  return s;
}
CompletionSet CompletionSet::continuing(const lang::Label& l) {
  CompletionSet s = continue_unlabeled();
  s.normal = true;
  if (l) s.cont_labels = LabelSet::only(*l);
  return s;
}

namespace {

LabelSet unite(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  if (!a.cofinite && !b.cofinite) {
    out.names = a.names;
    out.names.insert(b.names.begin(), b.names.end());
  } else if (a.cofinite && b.cofinite) {
    out.cofinite = true;
    for (const auto& n : a.names) {
      if (b.names.count(n)) out.names.insert(n);
    }
  } else {
    const LabelSet& co = a.cofinite ? a : b;
    const LabelSet& fin = a.cofinite ? b : a;
    out.cofinite = true;
    for (const auto& n : co.names) {
      if (!fin.names.count(n)) out.names.insert(n);
    }
  }
  return out;
}

LabelSet remove(const LabelSet& a, const std::string& l) {
  LabelSet out = a;
  if (a.cofinite) {
    out.names.insert(l);
  } else {
    out.names.erase(l);
  }
  return out;
}

std::string label_set_str(const LabelSet& s) {
  std::string out = s.cofinite ? "*" : "";
  if (s.cofinite && s.names.empty()) return out;
  out += s.cofinite ? "\\{" : "{";
  bool first = true;
  for (const auto& n : s.names) {
    out += (first ? "" : ",") + n;
    first = false;
  }
  return out + "}";
}

}  // namespace

CompletionSet CompletionSet::operator|(const CompletionSet& o) const {
  CompletionSet s;
  s.normal = normal || o.normal;
  s.brk = brk || o.brk;
  s.cont = cont || o.cont;
  s.brk_labels = unite(brk_labels, o.brk_labels);
  s.cont_labels = unite(cont_labels, o.cont_labels);
  s.ret = ret || o.ret;
  s.thrown = thrown || o.thrown;
  s.halt = halt || o.halt;
  return s;
}

CompletionSet CompletionSet::minus(const Completion& c) const {
  CompletionSet s = *this;
  switch (c.kind) {
    case Completion::Kind::Normal: s.normal = false; break;
    case Completion::Kind::Break:
      if (c.label) {
        s.brk_labels = remove(s.brk_labels, *c.label);
      } else {
        s.brk = false;
      }
      break;
    case Completion::Kind::Continue:
      if (c.label) {
        s.cont_labels = remove(s.cont_labels, *c.label);
      } else {
        s.cont = false;
      }
      break;
    case Completion::Kind::Return: s.ret = false; break;
    case Completion::Kind::Thrown: s.thrown = false; break;
    case Completion::Kind::Halt: s.halt = false; break;
  }
  return s;
}

std::string CompletionSet::str() const {
  std::vector<std::string> parts;
  if (normal) parts.push_back("normal");
  if (brk) parts.push_back("break");
  if (cont) parts.push_back("continue");
  if (!brk_labels.is_empty()) parts.push_back("break_" + label_set_str(brk_labels));
  if (!cont_labels.is_empty()) parts.push_back("continue_" + label_set_str(cont_labels));
  if (ret) parts.push_back("return");
  if (thrown) parts.push_back("thrown");
  if (halt) parts.push_back("halt");
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out + "}";
}

// ---------------------------------------------------------------------------

int VarTable::index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int VarTable::add(const std::string& name, lang::Type type) {
  const int i = index(name);
  if (i >= 0) return i;
  names_.push_back(name);
  types_.push_back(type);
  return static_cast<int>(names_.size() - 1);
}

void VarTable::add_all(const lang::Fragment& f) {
  for (const auto& p : f.params) add(p.name, p.type);
  for (const auto& [name, type] : lang::variable_types(f)) add(name, type);
}

VarTable VarTable::for_fragment(const lang::Fragment& f) {
  VarTable t;
  t.add_all(f);
  return t;
}

std::size_t StateHash::operator()(const State& s) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& v : s) {
    std::size_t x = v.index();
    if (auto* i = std::get_if<Int>(&v)) x = i->hash() * 3 + 1;
    if (auto* b = std::get_if<bool>(&v)) x = *b ? 7 : 5;
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Compiled form

namespace detail {

struct CExpr {
  enum class K { Lit, Var, Neg, Not, Bin } k = K::Lit;
  BinaryOp op = BinaryOp::Add;
  int slot = -1;
  Value lit;
  std::unique_ptr<CExpr> a, b;
};

using CList = std::vector<std::unique_ptr<CStmt>>;

struct CStmt {
  enum class K {
    Skip, Assign, Block, If, While, Do, For, Break, Continue, Return, Throw, Try, Attempt, Halt
  } k = K::Skip;
  int slot = -1;   // assignment target, catch binder
  int label = -1;  // interned label, -1 when absent
  std::unique_ptr<CExpr> e;
  CList body;  // block, then-branch, loop body, try body, attempt body
  CList alt;   // else-branch, catch handler, continuation, for init
  CList fin;   // finally
  bool has_handler = false;
  bool has_finally = false;
  std::vector<std::pair<int, std::unique_ptr<CExpr>>> update;
};

}  // namespace detail

namespace {

using detail::CExpr;
using detail::CList;
using detail::CStmt;

class Compiler {
public:
  Compiler(const VarTable& vars, std::vector<std::string>& labels)
      : vars_(vars), labels_(labels) {}

  std::unique_ptr<CExpr> expr(const lang::Expr& e) {
    auto out = std::make_unique<CExpr>();
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, lang::IntLit>) {
            out->k = CExpr::K::Lit;
            out->lit = n.value;
          } else if constexpr (std::is_same_v<T, lang::BoolLit>) {
            out->k = CExpr::K::Lit;
            out->lit = n.value;
          } else if constexpr (std::is_same_v<T, lang::VarRef>) {
            out->k = CExpr::K::Var;
            out->slot = slot(n.name);
          } else if constexpr (std::is_same_v<T, lang::Unary>) {
            out->k = n.op == lang::UnaryOp::Neg ? CExpr::K::Neg : CExpr::K::Not;
            out->a = expr(*n.operand);
          } else {
            if (n.op == BinaryOp::Implies) throw Error("'->' in a program expression");
            out->k = CExpr::K::Bin;
            out->op = n.op;
            out->a = expr(*n.lhs);
            out->b = expr(*n.rhs);
          }
        },
        e.node);
    return out;
  }

  CList list(const lang::StmtList& body) {
    CList out;
    out.reserve(body.size());
    for (const auto& s : body) out.push_back(stmt(*s));
    return out;
  }

  std::unique_ptr<CStmt> stmt(const lang::Stmt& s) {
    auto out = std::make_unique<CStmt>();
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, lang::Skip>) {
            out->k = CStmt::K::Skip;
          } else if constexpr (std::is_same_v<T, lang::Assign>) {
            out->k = CStmt::K::Assign;
            out->slot = slot(n.target);
            out->e = expr(*n.value);
          } else if constexpr (std::is_same_v<T, lang::LocalDecl>) {
            out->k = CStmt::K::Assign;
            out->slot = slot(n.name);
            out->e = expr(*n.init);
          } else if constexpr (std::is_same_v<T, lang::Block>) {
            out->k = CStmt::K::Block;
            out->label = label(n.label);
            out->body = list(n.body);
          } else if constexpr (std::is_same_v<T, lang::If>) {
            out->k = CStmt::K::If;
            out->e = expr(*n.cond);
            out->body.push_back(stmt(*n.then_branch));
            if (n.else_branch) out->alt.push_back(stmt(*n.else_branch));
          } else if constexpr (std::is_same_v<T, lang::While>) {
            out->k = CStmt::K::While;
            out->label = label(n.label);
            out->e = expr(*n.cond);
            out->body.push_back(stmt(*n.body));
          } else if constexpr (std::is_same_v<T, lang::DoWhile>) {
            out->k = CStmt::K::Do;
            out->label = label(n.label);
            out->e = expr(*n.cond);
            out->body.push_back(stmt(*n.body));
          } else if constexpr (std::is_same_v<T, lang::For>) {
            out->k = CStmt::K::For;
            out->label = label(n.label);
            out->alt = list(n.init);
            if (n.guard) out->e = expr(*n.guard);
            for (const auto& u : n.update) out->update.emplace_back(slot(u.target), expr(*u.value));
            out->body.push_back(stmt(*n.body));
          } else if constexpr (std::is_same_v<T, lang::Break>) {
            out->k = CStmt::K::Break;
            out->label = label(n.label);
          } else if constexpr (std::is_same_v<T, lang::Continue>) {
            out->k = CStmt::K::Continue;
            out->label = label(n.label);
          } else if constexpr (std::is_same_v<T, lang::Return>) {
            out->k = CStmt::K::Return;
            if (n.value) out->e = expr(*n.value);
          } else if constexpr (std::is_same_v<T, lang::Throw>) {
            out->k = CStmt::K::Throw;
            out->e = expr(*n.value);
          } else if constexpr (std::is_same_v<T, lang::Try>) {
            out->k = CStmt::K::Try;
            out->body = list(n.body);
            if (n.handler) {
              out->has_handler = true;
              out->slot = slot(n.handler->binder);
              out->alt = list(n.handler->body);
            }
            if (n.finalizer) {
              out->has_finally = true;
              out->fin = list(*n.finalizer);
            }
          } else if constexpr (std::is_same_v<T, lang::Attempt>) {
            out->k = CStmt::K::Attempt;
            out->label = label(n.label);
            out->body = list(n.body);
            out->alt = list(n.continuation);
          } else {
            out->k = CStmt::K::Halt;
          }
        },
        s.node);
    return out;
  }

private:
  int slot(const std::string& name) {
    const int i = vars_.index(name);
    if (i < 0) throw Error("variable '" + name + "' missing from the variable table");
    return i;
  }

  int label(const lang::Label& l) {
    if (!l) return -1;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == *l) return static_cast<int>(i);
    }
    labels_.push_back(*l);
    return static_cast<int>(labels_.size() - 1);
  }

  const VarTable& vars_;
  std::vector<std::string>& labels_;
};

// Internal completion record; labels are interned ids.
struct RC {
  enum class K : std::uint8_t { Normal, Break, Continue, Return, Thrown, Halt, Budget };
  K k = K::Normal;
  int label = -1;
  bool div_by_zero = false;
  Value value;
};

const RC kNormal{};

bool eval(const CExpr& e, const State& s, Value& out);

bool eval_int(const CExpr& e, const State& s, Int& out) {
  if (e.k == CExpr::K::Var) {
    const Value& v = s[static_cast<std::size_t>(e.slot)];
    if (auto* i = std::get_if<Int>(&v)) {
      out = *i;
      return true;
    }
    throw Error("read of an unset or non-integer variable");
  }
  if (e.k == CExpr::K::Lit) {
    out = std::get<Int>(e.lit);
    return true;
  }
  Value v;
  if (!eval(e, s, v)) return false;
  out = std::get<Int>(std::move(v));
  return true;
}

bool eval_bool(const CExpr& e, const State& s, bool& out) {
  Value v;
  if (!eval(e, s, v)) return false;
  if (auto* b = std::get_if<bool>(&v)) {
    out = *b;
    return true;
  }
  throw Error("condition is not boolean");
}

// Returns false on division by zero.
bool eval(const CExpr& e, const State& s, Value& out) {
  switch (e.k) {
    case CExpr::K::Lit: out = e.lit; return true;
    case CExpr::K::Var: {
      const Value& v = s[static_cast<std::size_t>(e.slot)];
      if (!is_set(v)) throw Error("read of an unset variable");
      out = v;
      return true;
    }
    case CExpr::K::Neg: {
      Int x;
      if (!eval_int(*e.a, s, x)) return false;
      out = -x;
      return true;
    }
    case CExpr::K::Not: {
      bool b;
      if (!eval_bool(*e.a, s, b)) return false;
      out = !b;
      return true;
    }
    case CExpr::K::Bin: break;
  }
  switch (e.op) {
    case BinaryOp::And:
    case BinaryOp::Or: {
      bool l;
      if (!eval_bool(*e.a, s, l)) return false;
      if (e.op == BinaryOp::And ? !l : l) {
        out = l;
        return true;
      }
      bool r;
      if (!eval_bool(*e.b, s, r)) return false;
      out = r;
      return true;
    }
    case BinaryOp::Eq:
    case BinaryOp::Ne: {
      Value l, r;
      if (!eval(*e.a, s, l) || !eval(*e.b, s, r)) return false;
      out = (l == r) == (e.op == BinaryOp::Eq);
      return true;
    }
    default: break;
  }
  Int l, r;
  if (!eval_int(*e.a, s, l) || !eval_int(*e.b, s, r)) return false;
  switch (e.op) {
    case BinaryOp::Add: out = l + r; return true;
    case BinaryOp::Sub: out = l - r; return true;
    case BinaryOp::Mul: out = l * r; return true;
    case BinaryOp::Div:
      if (r.is_zero()) return false;
      out = l / r;
      return true;
    case BinaryOp::Mod:
      if (r.is_zero()) return false;
      out = l % r;
      return true;
    case BinaryOp::Lt: out = l < r; return true;
    case BinaryOp::Le: out = l <= r; return true;
    case BinaryOp::Gt: out = l > r; return true;
    case BinaryOp::Ge: out = l >= r; return true;
    default: break;
  }
  throw Error("bad operator");
}

RC thrown_div_by_zero() {
  RC r;
  r.k = RC::K::Thrown;
  r.div_by_zero = true;
  return r;
}

class Machine {
public:
  Machine(State& s, std::int64_t budget) : s_(s), budget_(budget) {}

  RC list(const CList& body) {
    for (const auto& st : body) {
      RC r = stmt(*st);
      if (r.k != RC::K::Normal) return r;
    }
    return kNormal;
  }

  RC stmt(const CStmt& st) {
    if (++steps_ > budget_) return budget();
    switch (st.k) {
      case CStmt::K::Skip: return kNormal;
      case CStmt::K::Assign: {
        Value v;
        if (!eval(*st.e, s_, v)) return thrown_div_by_zero();
        s_[static_cast<std::size_t>(st.slot)] = std::move(v);
        return kNormal;
      }
      case CStmt::K::Block: {
        RC r = list(st.body);
        if (r.k == RC::K::Break && st.label >= 0 && r.label == st.label) return kNormal;
        return r;
      }
      case CStmt::K::If: {
        bool c;
        if (!eval_bool(*st.e, s_, c)) return thrown_div_by_zero();
        if (c) return stmt(*st.body[0]);
        if (!st.alt.empty()) return stmt(*st.alt[0]);
        return kNormal;
      }
      case CStmt::K::While:
        while (true) {
          bool c;
          if (!eval_bool(*st.e, s_, c)) return thrown_div_by_zero();
          if (!c) return kNormal;
          RC r = stmt(*st.body[0]);
          if (breaks(r, st.label)) return kNormal;
          if (!continues(r, st.label)) return r;
          if (++steps_ > budget_) return budget();
        }
      case CStmt::K::Do:
        while (true) {
          RC r = stmt(*st.body[0]);
          if (breaks(r, st.label)) return kNormal;
          if (!continues(r, st.label)) return r;
          if (++steps_ > budget_) return budget();
          bool c;
          if (!eval_bool(*st.e, s_, c)) return thrown_div_by_zero();
          if (!c) return kNormal;
        }
      case CStmt::K::For: {
        RC init = list(st.alt);
        if (init.k != RC::K::Normal) return init;
        while (true) {
          bool c = true;
          if (st.e && !eval_bool(*st.e, s_, c)) return thrown_div_by_zero();
          if (!c) return kNormal;
          RC r = stmt(*st.body[0]);
          if (breaks(r, st.label)) return kNormal;
          if (!continues(r, st.label)) return r;
          for (const auto& [slot, e] : st.update) {
            Value v;
            if (!eval(*e, s_, v)) return thrown_div_by_zero();
            s_[static_cast<std::size_t>(slot)] = std::move(v);
          }
          if (++steps_ > budget_) return budget();
        }
      }
      case CStmt::K::Break: {
        RC r;
        r.k = RC::K::Break;
        r.label = st.label;
        return r;
      }
      case CStmt::K::Continue: {
        RC r;
        r.k = RC::K::Continue;
        r.label = st.label;
        return r;
      }
      case CStmt::K::Return: {
        RC r;
        r.k = RC::K::Return;
        if (st.e && !eval(*st.e, s_, r.value)) return thrown_div_by_zero();
        return r;
      }
      case CStmt::K::Throw: {
        RC r;
        r.k = RC::K::Thrown;
        if (!eval(*st.e, s_, r.value)) return thrown_div_by_zero();
        return r;
      }
      case CStmt::K::Try: {
        RC r = list(st.body);
        if (r.k == RC::K::Halt || r.k == RC::K::Budget) return r;
        if (r.k == RC::K::Thrown && st.has_handler) {
          s_[static_cast<std::size_t>(st.slot)] = r.div_by_zero ? Value(Int(0)) : r.value;
          r = list(st.alt);
          if (r.k == RC::K::Halt || r.k == RC::K::Budget) return r;
        }
        if (st.has_finally) {
          RC f = list(st.fin);
          if (f.k != RC::K::Normal) return f;
        }
        return r;
      }
      case CStmt::K::Attempt: {
        RC r = list(st.body);
        if (continues(r, st.label)) return list(st.alt);
        if (breaks(r, st.label)) return kNormal;
        return r;
      }
      case CStmt::K::Halt: {
        RC r;
        r.k = RC::K::Halt;
        return r;
      }
    }
    return kNormal;
  }

private:
  static bool breaks(const RC& r, int label) {
    return r.k == RC::K::Break && (r.label < 0 || (label >= 0 && r.label == label));
  }
  static bool continues(const RC& r, int label) {
    return r.k == RC::K::Normal ||
           (r.k == RC::K::Continue && (r.label < 0 || (label >= 0 && r.label == label)));
  }
  static RC budget() {
    RC r;
    r.k = RC::K::Budget;
    return r;
  }

  State& s_;
  std::int64_t budget_;
  std::int64_t steps_ = 0;
};

}  // namespace

Program Program::compile(const lang::StmtList& body, const VarTable& vars) {
  auto labels = std::make_shared<std::vector<std::string>>();
  Compiler c(vars, *labels);
  Program p;
  p.body_ = std::make_shared<const CList>(c.list(body));
  p.labels_ = std::move(labels);
  return p;
}

Outcome Program::run(const State& start, std::int64_t budget) const {
  Outcome out;
  out.state = start;
  if (!body_) return out;
  Machine m(out.state, budget);
  RC r = m.list(*body_);
  auto label = [&]() -> lang::Label {
    if (r.label < 0) return std::nullopt;
    return (*labels_)[static_cast<std::size_t>(r.label)];
  };
  switch (r.k) {
    case RC::K::Normal: break;
    case RC::K::Break: out.reason = Completion::brk(label()); break;
    case RC::K::Continue: out.reason = Completion::cont(label()); break;
    case RC::K::Return:
      out.reason.kind = Completion::Kind::Return;
      out.reason.value = std::move(r.value);
      break;
    case RC::K::Thrown:
      out.reason.kind = Completion::Kind::Thrown;
      out.reason.value = std::move(r.value);
      out.reason.div_by_zero = r.div_by_zero;
      break;
    case RC::K::Halt: out.reason = Completion::halt(); break;
    case RC::K::Budget: out.budget_exhausted = true; break;
  }
  return out;
}

EvalResult eval_expr(const lang::Expr& e, const VarTable& vars, const State& s) {
  std::vector<std::string> labels;
  Compiler c(vars, labels);
  auto ce = c.expr(e);
  EvalResult r;
  r.div_by_zero = !eval(*ce, s, r.value);
  return r;
}

State to_slots(const NamedState& named, const VarTable& vars) {
  State s(vars.size());
  for (const auto& [name, v] : named) {
    const int i = vars.index(name);
    if (i >= 0) s[static_cast<std::size_t>(i)] = v;
  }
  return s;
}

NamedState to_named(const State& s, const VarTable& vars) {
  NamedState out;
  for (std::size_t i = 0; i < s.size() && i < vars.size(); ++i) {
    if (is_set(s[i])) out.emplace(vars.name(i), s[i]);
  }
  return out;
}

EvalResult eval_expr(const lang::Expr& e, const NamedState& s) {
  VarTable vars;
  State st;
  for (const auto& [name, v] : s) {
    vars.add(name, std::holds_alternative<bool>(v) ? lang::Type::Bool : lang::Type::Int);
    st.push_back(v);
  }
  return eval_expr(e, vars, st);
}

NamedOutcome exec(const lang::Fragment& f, const NamedState& start, std::int64_t budget) {
  const VarTable vars = VarTable::for_fragment(f);
  for (const auto& [name, v] : start) {
    const auto it = std::find_if(f.params.begin(), f.params.end(),
                                 [&](const lang::Param& p) { return p.name == name; });
    if (it == f.params.end()) throw ConfigError("'" + name + "' is not a parameter");
    const bool want_bool = it->type == lang::Type::Bool;
    if (want_bool != std::holds_alternative<bool>(v)) {
      throw ConfigError("value for '" + name + "' does not match its type");
    }
  }
  for (const auto& p : f.params) {
    if (!start.count(p.name)) throw ConfigError("parameter '" + p.name + "' is not bound");
  }
  const Program prog = Program::compile(f.body, vars);
  Outcome o = prog.run(to_slots(start, vars), budget);
  NamedOutcome out;
  out.budget_exhausted = o.budget_exhausted;
  out.reason = o.reason;
  out.state = to_named(o.state, vars);
  return out;
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::False: return "false";
    case Tri::True: return "true";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

Tri holds_modality(const lang::Fragment& p, const CompletionSet& types,
                   const std::function<bool(const NamedState&)>& post, const NamedState& s,
                   std::int64_t budget) {
  NamedOutcome o = exec(p, s, budget);
  if (o.budget_exhausted) return Tri::Unknown;
  if (!types.contains(o.reason)) return Tri::True;
  return post(o.state) ? Tri::True : Tri::False;
}

}  // namespace loopdl::interp
