#include "loopdl/logic.hpp"

#include <sstream>

#include "loopdl/error.hpp"
#include "loopdl/fragment.hpp"
#include "loopdl/parser.hpp"
#include "loopdl/printer.hpp"

namespace loopdl::logic {

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

bool is_int_lit(const TermPtr& t) { return t->k == Term::K::Int; }
bool is_bool_lit(const TermPtr& t) { return t->k == Term::K::Bool; }

Int total_div(const Int& a, const Int& b) { return b.is_zero() ? Int(0) : a / b; }
Int total_mod(const Int& a, const Int& b) { return b.is_zero() ? Int(0) : a % b; }

bool compare(BinaryOp op, const Int& a, const Int& b) {
  switch (op) {
    case BinaryOp::Lt: return a < b;
    case BinaryOp::Le: return a <= b;
    case BinaryOp::Gt: return a > b;
    case BinaryOp::Ge: return a >= b;
    case BinaryOp::Eq: return a == b;
    case BinaryOp::Ne: return a != b;
    default: break;
  }
  throw Error("not a comparison");
}

bool is_comparison(BinaryOp op) {
  return op == BinaryOp::Lt || op == BinaryOp::Le || op == BinaryOp::Gt || op == BinaryOp::Ge ||
         op == BinaryOp::Eq || op == BinaryOp::Ne;
}

BinaryOp negate_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Lt: return BinaryOp::Ge;
    case BinaryOp::Le: return BinaryOp::Gt;
    case BinaryOp::Gt: return BinaryOp::Le;
    case BinaryOp::Ge: return BinaryOp::Lt;
    case BinaryOp::Eq: return BinaryOp::Ne;
    case BinaryOp::Ne: return BinaryOp::Eq;
    default: break;
  }
  throw Error("not a comparison");
}

// t + c as (t, c); anything else as (t, 0).
std::pair<TermPtr, Int> split_offset(const TermPtr& t) {
  if (t->k == Term::K::Bin && t->op == BinaryOp::Add && is_int_lit(t->b)) return {t->a, t->b->ival};
  return {t, Int(0)};
}

}  // namespace

TermPtr t_int(Int v) {
  Term t;
  t.k = Term::K::Int;
  t.ival = std::move(v);
  return make(std::move(t));
}

TermPtr t_bool(bool v) {
  static const TermPtr kTrue = make(Term{Term::K::Bool, Int(0), true, {}, BinaryOp::Add, {}, {}, {}});
  static const TermPtr kFalse =
      make(Term{Term::K::Bool, Int(0), false, {}, BinaryOp::Add, {}, {}, {}});
  return v ? kTrue : kFalse;
}

TermPtr t_var(std::string name) {
  Term t;
  t.k = Term::K::Var;
  t.name = std::move(name);
  return make(std::move(t));
}

TermPtr t_neg(TermPtr a) {
  if (is_int_lit(a)) return t_int(-a->ival);
  if (a->k == Term::K::Neg) return a->a;
  Term t;
  t.k = Term::K::Neg;
  t.a = std::move(a);
  return make(std::move(t));
}

TermPtr t_not(TermPtr a) {
  if (is_bool_lit(a)) return t_bool(!a->bval);
  if (a->k == Term::K::Not) return a->a;
  if (a->k == Term::K::Bin && is_comparison(a->op)) {
    return t_bin(negate_comparison(a->op), a->a, a->b);
  }
  Term t;
  t.k = Term::K::Not;
  t.a = std::move(a);
  return make(std::move(t));
}

TermPtr t_bin(BinaryOp op, TermPtr a, TermPtr b) {
  if (op == BinaryOp::Implies) return t_bin(BinaryOp::Or, t_not(std::move(a)), std::move(b));
  const bool lits = is_int_lit(a) && is_int_lit(b);
  switch (op) {
    case BinaryOp::Add:
      if (lits) return t_int(a->ival + b->ival);
      if (is_int_lit(a)) std::swap(a, b);
      if (is_int_lit(b)) {
        if (b->ival.is_zero()) return a;
        auto [base, off] = split_offset(a);
        if (!off.is_zero()) return t_bin(BinaryOp::Add, base, t_int(off + b->ival));
      }
      break;
    case BinaryOp::Sub:
      if (lits) return t_int(a->ival - b->ival);
      if (is_int_lit(b)) return t_bin(BinaryOp::Add, a, t_int(-b->ival));
      if (equal(a, b)) return t_int(0);
      break;
    case BinaryOp::Mul:
      if (lits) return t_int(a->ival * b->ival);
      if (is_int_lit(a)) std::swap(a, b);
      if (is_int_lit(b)) {
        if (b->ival.is_zero()) return b;
        if (b->ival == Int(1)) return a;
      }
      break;
    case BinaryOp::Div:
      if (lits) return t_int(total_div(a->ival, b->ival));
      if (is_int_lit(b) && b->ival == Int(1)) return a;
      if (is_int_lit(b) && b->ival.is_zero()) return t_int(0);
      break;
    case BinaryOp::Mod:
      if (lits) return t_int(total_mod(a->ival, b->ival));
      if (is_int_lit(b) && (b->ival == Int(1) || b->ival == Int(-1) || b->ival.is_zero())) {
        return t_int(0);
      }
      break;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
    case BinaryOp::Eq:
    case BinaryOp::Ne: {
      if (lits) return t_bool(compare(op, a->ival, b->ival));
      if (is_bool_lit(a) && is_bool_lit(b)) {
        return t_bool((a->bval == b->bval) == (op == BinaryOp::Eq));
      }
      if ((op == BinaryOp::Eq || op == BinaryOp::Ne) && (is_bool_lit(a) || is_bool_lit(b))) {
        if (is_bool_lit(a)) std::swap(a, b);
        const bool positive = (b->bval == (op == BinaryOp::Eq));
        return positive ? a : t_not(a);
      }
      if (equal(a, b)) {
        return t_bool(op == BinaryOp::Eq || op == BinaryOp::Le || op == BinaryOp::Ge);
      }
      // (t + c1) op c2  ->  t op (c2 - c1)
      if (is_int_lit(b)) {
        auto [base, off] = split_offset(a);
        if (!off.is_zero()) return t_bin(op, base, t_int(b->ival - off));
      }
      break;
    }
    case BinaryOp::And:
      if (is_bool_lit(a)) return a->bval ? b : a;
      if (is_bool_lit(b)) return b->bval ? a : b;
      if (equal(a, b)) return a;
      break;
    case BinaryOp::Or:
      if (is_bool_lit(a)) return a->bval ? a : b;
      if (is_bool_lit(b)) return b->bval ? b : a;
      if (equal(a, b)) return a;
      break;
    case BinaryOp::Implies: break;
  }
  Term t;
  t.k = Term::K::Bin;
  t.op = op;
  t.a = std::move(a);
  t.b = std::move(b);
  return make(std::move(t));
}

TermPtr t_ite(TermPtr c, TermPtr a, TermPtr b) {
  if (is_bool_lit(c)) return c->bval ? a : b;
  if (equal(a, b)) return a;
  Term t;
  t.k = Term::K::Ite;
  t.a = std::move(c);
  t.b = std::move(a);
  t.c = std::move(b);
  return make(std::move(t));
}

TermPtr t_raw(BinaryOp op, TermPtr a, TermPtr b) {
  Term t;
  t.k = Term::K::Bin;
  t.op = op;
  t.a = std::move(a);
  t.b = std::move(b);
  return make(std::move(t));
}

TermPtr term_of(const lang::Expr& e) {
  return std::visit(
      [&](const auto& n) -> TermPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, lang::IntLit>) {
          return t_int(n.value);
        } else if constexpr (std::is_same_v<T, lang::BoolLit>) {
          return t_bool(n.value);
        } else if constexpr (std::is_same_v<T, lang::VarRef>) {
          return t_var(n.name);
        } else if constexpr (std::is_same_v<T, lang::Unary>) {
          auto a = term_of(*n.operand);
          return n.op == UnaryOp::Neg ? t_neg(a) : t_not(a);
        } else {
          return t_bin(n.op, term_of(*n.lhs), term_of(*n.rhs));
        }
      },
      e.node);
}

bool has_division(const lang::Expr& e) {
  if (auto* u = std::get_if<lang::Unary>(&e.node)) return has_division(*u->operand);
  if (auto* b = std::get_if<lang::Binary>(&e.node)) {
    return b->op == BinaryOp::Div || b->op == BinaryOp::Mod || has_division(*b->lhs) ||
           has_division(*b->rhs);
  }
  return false;
}

TermPtr definedness(const lang::Expr& e) {
  if (auto* u = std::get_if<lang::Unary>(&e.node)) return definedness(*u->operand);
  const auto* b = std::get_if<lang::Binary>(&e.node);
  if (!b) return t_bool(true);
  auto da = definedness(*b->lhs);
  auto db = definedness(*b->rhs);
  switch (b->op) {
    case BinaryOp::And:
      return t_bin(BinaryOp::And, da, t_bin(BinaryOp::Or, t_not(term_of(*b->lhs)), db));
    case BinaryOp::Or:
      return t_bin(BinaryOp::And, da, t_bin(BinaryOp::Or, term_of(*b->lhs), db));
    case BinaryOp::Div:
    case BinaryOp::Mod:
      return t_bin(BinaryOp::And, t_bin(BinaryOp::And, da, db),
                   t_bin(BinaryOp::Ne, term_of(*b->rhs), t_int(0)));
    default:
      return t_bin(BinaryOp::And, da, db);
  }
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->k != b->k) return false;
  switch (a->k) {
    case Term::K::Int: return a->ival == b->ival;
    case Term::K::Bool: return a->bval == b->bval;
    case Term::K::Var: return a->name == b->name;
    case Term::K::Neg:
    case Term::K::Not: return equal(a->a, b->a);
    case Term::K::Bin: return a->op == b->op && equal(a->a, b->a) && equal(a->b, b->b);
    case Term::K::Ite: return equal(a->a, b->a) && equal(a->b, b->b) && equal(a->c, b->c);
  }
  return false;
}

bool is_true(const TermPtr& t) { return is_bool_lit(t) && t->bval; }
bool is_false(const TermPtr& t) { return is_bool_lit(t) && !t->bval; }

namespace {

int term_prec(const Term& t) {
  switch (t.k) {
    case Term::K::Bin:
      switch (t.op) {
        case BinaryOp::Or: return 2;
        case BinaryOp::And: return 3;
        case BinaryOp::Eq:
        case BinaryOp::Ne: return 4;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return 5;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 6;
        default: return 7;
      }
    case Term::K::Neg:
    case Term::K::Not: return 8;
    case Term::K::Int: return t.ival < Int(0) ? 8 : 9;
    default: return 9;
  }
}

void emit(std::ostream& os, const TermPtr& t);

void emit_operand(std::ostream& os, const TermPtr& t, int min_prec) {
  if (term_prec(*t) < min_prec) {
    os << '(';
    emit(os, t);
    os << ')';
  } else {
    emit(os, t);
  }
}

void emit(std::ostream& os, const TermPtr& t) {
  switch (t->k) {
    case Term::K::Int: os << t->ival; return;
    case Term::K::Bool: os << (t->bval ? "true" : "false"); return;
    case Term::K::Var: os << t->name; return;
    case Term::K::Neg:
      os << '-';
      emit_operand(os, t->a, 9);
      return;
    case Term::K::Not:
      os << '!';
      emit_operand(os, t->a, 8);
      return;
    case Term::K::Ite:
      os << '(';
      emit(os, t->a);
      os << " ? ";
      emit(os, t->b);
      os << " : ";
      emit(os, t->c);
      os << ')';
      return;
    case Term::K::Bin: break;
  }
  const int p = term_prec(*t);
  // Keep "x + -3" readable as "x - 3".
  if (t->op == BinaryOp::Add && is_int_lit(t->b) && t->b->ival < Int(0)) {
    emit_operand(os, t->a, p);
    os << " - " << -t->b->ival;
    return;
  }
  emit_operand(os, t->a, p);
  os << ' ' << lang::to_string(t->op) << ' ';
  emit_operand(os, t->b, p + 1);
}

}  // namespace

std::string print(const TermPtr& t) {
  std::ostringstream os;
  emit(os, t);
  return os.str();
}

// ---------------------------------------------------------------------------
// Updates

Update Update::elementary(std::string target, TermPtr value) {
  Update u;
  u.bind(target, std::move(value));
  return u;
}

void Update::bind(const std::string& target, TermPtr value) {
  const bool identity = value->k == Term::K::Var && value->name == target;
  for (auto it = bindings_.begin(); it != bindings_.end(); ++it) {
    if (it->first == target) {
      if (identity) {
        bindings_.erase(it);
      } else {
        it->second = std::move(value);
      }
      return;
    }
  }
  if (!identity) bindings_.emplace_back(target, std::move(value));
}

const TermPtr* Update::find(const std::string& target) const {
  for (const auto& [name, value] : bindings_) {
    if (name == target) return &value;
  }
  return nullptr;
}

Update Update::parallel(const Update& u1, const Update& u2) {
  Update out = u1;
  for (const auto& [name, value] : u2.bindings_) out.bind(name, value);
  return out;
}

std::string Update::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    if (i) out += " || ";
    out += bindings_[i].first + " := " + print(bindings_[i].second);
  }
  return out + "}";
}

bool equal(const Update& a, const Update& b) {
  if (a.bindings().size() != b.bindings().size()) return false;
  for (std::size_t i = 0; i < a.bindings().size(); ++i) {
    if (a.bindings()[i].first != b.bindings()[i].first ||
        !equal(a.bindings()[i].second, b.bindings()[i].second)) {
      return false;
    }
  }
  return true;
}

TermPtr apply(const Update& u, const TermPtr& t) {
  if (u.empty()) return t;
  switch (t->k) {
    case Term::K::Int:
    case Term::K::Bool: return t;
    case Term::K::Var: {
      const TermPtr* v = u.find(t->name);
      return v ? *v : t;
    }
    case Term::K::Neg: return t_neg(logic::apply(u, t->a));
    case Term::K::Not: return t_not(logic::apply(u, t->a));
    case Term::K::Bin: return t_bin(t->op, logic::apply(u, t->a), logic::apply(u, t->b));
    case Term::K::Ite:
      return t_ite(logic::apply(u, t->a), logic::apply(u, t->b), logic::apply(u, t->c));
  }
  return t;
}

TermPtr substitute(const Update& u, const TermPtr& t) {
  if (u.empty()) return t;
  switch (t->k) {
    case Term::K::Int:
    case Term::K::Bool: return t;
    case Term::K::Var: {
      const TermPtr* v = u.find(t->name);
      return v ? *v : t;
    }
    default: break;
  }
  Term copy = *t;
  if (copy.a) copy.a = substitute(u, copy.a);
  if (copy.b) copy.b = substitute(u, copy.b);
  if (copy.c) copy.c = substitute(u, copy.c);
  return make(std::move(copy));
}

TermPtr simplify(const TermPtr& t) {
  switch (t->k) {
    case Term::K::Neg: return t_neg(simplify(t->a));
    case Term::K::Not: return t_not(simplify(t->a));
    case Term::K::Bin: return t_bin(t->op, simplify(t->a), simplify(t->b));
    case Term::K::Ite: return t_ite(simplify(t->a), simplify(t->b), simplify(t->c));
    default: return t;
  }
}

Update compose(const Update& outer, const Update& inner) {
  // Targets of inner shadow outer. A rewritten inner value can turn into the
  // identity x := x; it still shadows outer's binding of x and is then dropped.
  Update out;
  for (const auto& [name, value] : outer.bindings()) {
    if (!inner.find(name)) out = Update::parallel(out, Update::elementary(name, value));
  }
  for (const auto& [name, value] : inner.bindings()) {
    out = Update::parallel(out, Update::elementary(name, logic::apply(outer, value)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formulas

namespace {

FormulaPtr makef(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

FormulaPtr f_true() {
  static const FormulaPtr k = makef(Formula{Formula::K::True, {}, {}, {}, {}, {}});
  return k;
}

FormulaPtr f_false() {
  static const FormulaPtr k = makef(Formula{Formula::K::False, {}, {}, {}, {}, {}});
  return k;
}

FormulaPtr f_atom(TermPtr t) {
  if (is_bool_lit(t)) return t->bval ? f_true() : f_false();
  Formula f;
  f.k = Formula::K::Atom;
  f.atom = std::move(t);
  return makef(std::move(f));
}

FormulaPtr f_not(FormulaPtr a) {
  if (a->k == Formula::K::True) return f_false();
  if (a->k == Formula::K::False) return f_true();
  if (a->k == Formula::K::Not) return a->a;
  if (a->k == Formula::K::Atom) return f_atom(t_not(a->atom));
  Formula f;
  f.k = Formula::K::Not;
  f.a = std::move(a);
  return makef(std::move(f));
}

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  if (a->k == Formula::K::False || b->k == Formula::K::True) return a;
  if (b->k == Formula::K::False || a->k == Formula::K::True) return b;
  Formula f;
  f.k = Formula::K::And;
  f.a = std::move(a);
  f.b = std::move(b);
  return makef(std::move(f));
}

FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  if (a->k == Formula::K::True || b->k == Formula::K::False) return a;
  if (b->k == Formula::K::True || a->k == Formula::K::False) return b;
  Formula f;
  f.k = Formula::K::Or;
  f.a = std::move(a);
  f.b = std::move(b);
  return makef(std::move(f));
}

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  if (a->k == Formula::K::False || b->k == Formula::K::True) return f_true();
  if (a->k == Formula::K::True) return b;
  if (b->k == Formula::K::False) return f_not(std::move(a));
  Formula f;
  f.k = Formula::K::Implies;
  f.a = std::move(a);
  f.b = std::move(b);
  return makef(std::move(f));
}

FormulaPtr f_box(lang::StmtList program, FormulaPtr post) {
  Formula f;
  f.k = Formula::K::Box;
  f.program = std::move(program);
  f.a = std::move(post);
  return makef(std::move(f));
}

FormulaPtr f_upd(Update u, FormulaPtr target) {
  if (u.empty()) return target;
  if (target->k == Formula::K::True || target->k == Formula::K::False) return target;
  if (target->k == Formula::K::Upd) return f_upd(compose(u, target->update), target->a);
  Formula f;
  f.k = Formula::K::Upd;
  f.update = std::move(u);
  f.a = std::move(target);
  return makef(std::move(f));
}

FormulaPtr apply(const Update& u, const FormulaPtr& f) {
  if (u.empty()) return f;
  switch (f->k) {
    case Formula::K::True:
    case Formula::K::False: return f;
    case Formula::K::Atom: return f_atom(substitute(u, f->atom));
    case Formula::K::Not: return f_not(logic::apply(u, f->a));
    case Formula::K::And: return f_and(logic::apply(u, f->a), logic::apply(u, f->b));
    case Formula::K::Or: return f_or(logic::apply(u, f->a), logic::apply(u, f->b));
    case Formula::K::Implies: return f_implies(logic::apply(u, f->a), logic::apply(u, f->b));
    case Formula::K::Box: return f_upd(u, f);
    case Formula::K::Upd:
      // Apply the inner update first when its target is modality-free.
      if (!has_modality(f->a)) return logic::apply(u, logic::apply(f->update, f->a));
      return f_upd(compose(u, f->update), f->a);
  }
  return f;
}

FormulaPtr simplify(const FormulaPtr& f) {
  switch (f->k) {
    case Formula::K::True:
    case Formula::K::False: return f;
    case Formula::K::Atom: return f_atom(simplify(f->atom));
    case Formula::K::Not: return f_not(simplify(f->a));
    case Formula::K::And: return f_and(simplify(f->a), simplify(f->b));
    case Formula::K::Or: return f_or(simplify(f->a), simplify(f->b));
    case Formula::K::Implies: return f_implies(simplify(f->a), simplify(f->b));
    case Formula::K::Box: return f_box(f->program, simplify(f->a));
    case Formula::K::Upd: return f_upd(f->update, simplify(f->a));
  }
  return f;
}

bool has_modality(const FormulaPtr& f) {
  switch (f->k) {
    case Formula::K::Box: return true;
    case Formula::K::Not: return has_modality(f->a);
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies: return has_modality(f->a) || has_modality(f->b);
    case Formula::K::Upd: return has_modality(f->a);
    default: return false;
  }
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->k != b->k) return false;
  switch (a->k) {
    case Formula::K::True:
    case Formula::K::False: return true;
    case Formula::K::Atom: return equal(a->atom, b->atom);
    case Formula::K::Not: return equal(a->a, b->a);
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies: return equal(a->a, b->a) && equal(a->b, b->b);
    case Formula::K::Box: return lang::equal(a->program, b->program) && equal(a->a, b->a);
    case Formula::K::Upd: return equal(a->update, b->update) && equal(a->a, b->a);
  }
  return false;
}

namespace {

int formula_prec(const Formula& f) {
  switch (f.k) {
    case Formula::K::Implies: return 1;
    case Formula::K::Or: return 2;
    case Formula::K::And: return 3;
    case Formula::K::Atom: return term_prec(*f.atom) <= 3 ? 3 : 9;
    default: return 9;
  }
}

void emitf(std::ostream& os, const FormulaPtr& f);

void emitf_operand(std::ostream& os, const FormulaPtr& f, int min_prec) {
  if (formula_prec(*f) < min_prec) {
    os << '(';
    emitf(os, f);
    os << ')';
  } else {
    emitf(os, f);
  }
}

// Modality and update targets are parenthesized unless atomic.
void emit_post(std::ostream& os, const FormulaPtr& f) {
  const bool bare = f->k == Formula::K::True || f->k == Formula::K::False ||
                    f->k == Formula::K::Box || f->k == Formula::K::Upd;
  if (!bare) os << '(';
  emitf(os, f);
  if (!bare) os << ')';
}

void emitf(std::ostream& os, const FormulaPtr& f) {
  switch (f->k) {
    case Formula::K::True: os << "true"; return;
    case Formula::K::False: os << "false"; return;
    case Formula::K::Atom: os << print(f->atom); return;
    case Formula::K::Not:
      os << '!';
      emitf_operand(os, f->a, 9);
      return;
    case Formula::K::And:
      emitf_operand(os, f->a, 3);
      os << " && ";
      emitf_operand(os, f->b, 4);
      return;
    case Formula::K::Or:
      emitf_operand(os, f->a, 2);
      os << " || ";
      emitf_operand(os, f->b, 3);
      return;
    case Formula::K::Implies:
      emitf_operand(os, f->a, 2);
      os << " -> ";
      emitf_operand(os, f->b, 1);
      return;
    case Formula::K::Box: {
      os << '[' << lang::print_line(f->program) << ']';
      emit_post(os, f->a);
      return;
    }
    case Formula::K::Upd:
      os << f->update.str();
      emit_post(os, f->a);
      return;
  }
}

}  // namespace

std::string print(const FormulaPtr& f) {
  std::ostringstream os;
  emitf(os, f);
  return os.str();
}

FormulaPtr formula_of(const lang::Expr& e) {
  if (auto* u = std::get_if<lang::Unary>(&e.node); u && u->op == UnaryOp::Not) {
    return f_not(formula_of(*u->operand));
  }
  if (auto* b = std::get_if<lang::Binary>(&e.node)) {
    switch (b->op) {
      case BinaryOp::And: return f_and(formula_of(*b->lhs), formula_of(*b->rhs));
      case BinaryOp::Or: return f_or(formula_of(*b->lhs), formula_of(*b->rhs));
      case BinaryOp::Implies: return f_implies(formula_of(*b->lhs), formula_of(*b->rhs));
      default: break;
    }
  }
  return f_atom(term_of(e));
}

FormulaPtr parse_formula(std::string_view text) {
  return formula_of(*lang::parse_expression(text, true));
}

void free_vars(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->k == Term::K::Var) {
    out.insert(t->name);
    return;
  }
  free_vars(t->a, out);
  free_vars(t->b, out);
  free_vars(t->c, out);
}

void free_vars(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  switch (f->k) {
    case Formula::K::Atom: free_vars(f->atom, out); return;
    case Formula::K::Box: {
      // Labels are harmless extras: they never collide with variables.
      auto ids = lang::identifiers(f->program);
      out.insert(ids.begin(), ids.end());
      free_vars(f->a, out);
      return;
    }
    case Formula::K::Upd:
      for (const auto& [name, value] : f->update.bindings()) {
        out.insert(name);
        free_vars(value, out);
      }
      free_vars(f->a, out);
      return;
    default:
      free_vars(f->a, out);
      free_vars(f->b, out);
      return;
  }
}

// ---------------------------------------------------------------------------
// Evaluation

struct CTerm {
  Term::K k = Term::K::Int;
  BinaryOp op = BinaryOp::Add;
  Value lit;
  int slot = -1;
  std::shared_ptr<const CTerm> a, b, c;
};

struct CompiledFormula::Node {
  enum class K { True, False, Not, And, Or, Implies, Atom } k = K::True;
  std::shared_ptr<const Node> a, b;
  std::shared_ptr<const CTerm> term;
};

namespace {

std::shared_ptr<const CTerm> compile_term(const TermPtr& t, const interp::VarTable& vars) {
  auto out = std::make_shared<CTerm>();
  out->k = t->k;
  out->op = t->op;
  switch (t->k) {
    case Term::K::Int: out->lit = t->ival; break;
    case Term::K::Bool: out->lit = t->bval; break;
    case Term::K::Var:
      out->slot = vars.index(t->name);
      if (out->slot < 0) throw Error("unbound variable '" + t->name + "' in formula");
      break;
    default:
      if (t->a) out->a = compile_term(t->a, vars);
      if (t->b) out->b = compile_term(t->b, vars);
      if (t->c) out->c = compile_term(t->c, vars);
  }
  return out;
}

Value eval_cterm(const CTerm& t, const interp::State& s) {
  switch (t.k) {
    case Term::K::Int:
    case Term::K::Bool: return t.lit;
    case Term::K::Var: {
      const Value& v = s[static_cast<std::size_t>(t.slot)];
      if (!interp::is_set(v)) throw Error("formula reads an unset variable");
      return v;
    }
    case Term::K::Neg: return -std::get<Int>(eval_cterm(*t.a, s));
    case Term::K::Not: return !std::get<bool>(eval_cterm(*t.a, s));
    case Term::K::Ite:
      return std::get<bool>(eval_cterm(*t.a, s)) ? eval_cterm(*t.b, s) : eval_cterm(*t.c, s);
    case Term::K::Bin: break;
  }
  switch (t.op) {
    case BinaryOp::And:
      return std::get<bool>(eval_cterm(*t.a, s)) && std::get<bool>(eval_cterm(*t.b, s));
    case BinaryOp::Or:
      return std::get<bool>(eval_cterm(*t.a, s)) || std::get<bool>(eval_cterm(*t.b, s));
    case BinaryOp::Eq: return eval_cterm(*t.a, s) == eval_cterm(*t.b, s);
    case BinaryOp::Ne: return eval_cterm(*t.a, s) != eval_cterm(*t.b, s);
    default: break;
  }
  const Value va = eval_cterm(*t.a, s);
  const Value vb = eval_cterm(*t.b, s);
  const auto* x = std::get_if<Int>(&va);
  const auto* y = std::get_if<Int>(&vb);
  if (!x || !y) throw Error("arithmetic on a non-integer value");
  switch (t.op) {
    case BinaryOp::Add: return *x + *y;
    case BinaryOp::Sub: return *x - *y;
    case BinaryOp::Mul: return *x * *y;
    case BinaryOp::Div: return total_div(*x, *y);
    case BinaryOp::Mod: return total_mod(*x, *y);
    default: return compare(t.op, *x, *y);
  }
}

std::shared_ptr<const CompiledFormula::Node> compile_node(const FormulaPtr& f,
                                                          const interp::VarTable& vars) {
  using N = CompiledFormula::Node;
  auto out = std::make_shared<N>();
  switch (f->k) {
    case Formula::K::True: out->k = N::K::True; break;
    case Formula::K::False: out->k = N::K::False; break;
    case Formula::K::Atom:
      out->k = N::K::Atom;
      out->term = compile_term(f->atom, vars);
      break;
    case Formula::K::Not:
      out->k = N::K::Not;
      out->a = compile_node(f->a, vars);
      break;
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
      out->k = f->k == Formula::K::And ? N::K::And
                                       : (f->k == Formula::K::Or ? N::K::Or : N::K::Implies);
      out->a = compile_node(f->a, vars);
      out->b = compile_node(f->b, vars);
      break;
    case Formula::K::Box:
    case Formula::K::Upd: throw Error("cannot evaluate a formula with a modality or update");
  }
  return out;
}

bool eval_node(const CompiledFormula::Node& n, const interp::State& s) {
  using N = CompiledFormula::Node;
  switch (n.k) {
    case N::K::True: return true;
    case N::K::False: return false;
    case N::K::Atom: {
      Value v = eval_cterm(*n.term, s);
      if (auto* b = std::get_if<bool>(&v)) return *b;
      throw Error("atom is not boolean");
    }
    case N::K::Not: return !eval_node(*n.a, s);
    case N::K::And: return eval_node(*n.a, s) && eval_node(*n.b, s);
    case N::K::Or: return eval_node(*n.a, s) || eval_node(*n.b, s);
    case N::K::Implies: return !eval_node(*n.a, s) || eval_node(*n.b, s);
  }
  return false;
}

interp::VarTable table_of(const interp::NamedState& s, interp::State& slots) {
  interp::VarTable vars;
  for (const auto& [name, v] : s) {
    vars.add(name, std::holds_alternative<bool>(v) ? lang::Type::Bool : lang::Type::Int);
    slots.push_back(v);
  }
  return vars;
}

}  // namespace

CompiledFormula CompiledFormula::compile(const FormulaPtr& f, const interp::VarTable& vars) {
  CompiledFormula c;
  c.root_ = compile_node(f, vars);
  return c;
}

bool CompiledFormula::eval(const interp::State& s) const { return eval_node(*root_, s); }

bool eval_formula(const FormulaPtr& f, const interp::NamedState& s) {
  interp::State slots;
  auto vars = table_of(s, slots);
  return CompiledFormula::compile(f, vars).eval(slots);
}

Value eval_term(const TermPtr& t, const interp::NamedState& s) {
  interp::State slots;
  auto vars = table_of(s, slots);
  return eval_cterm(*compile_term(t, vars), slots);
}

}  // namespace loopdl::logic
