#include "loopdl/fragment.hpp"

#include <functional>

#include "loopdl/error.hpp"
#include "loopdl/printer.hpp"

namespace loopdl::lang {

Decomposition decompose(const StmtList& body) {
  Decomposition d;
  const StmtList* cur = &body;
  std::size_t skip = 0;  // elements of *cur already consumed
  while (true) {
    if (cur->size() == skip) return d;
    const StmtPtr& first = (*cur)[skip];
    StmtList after(cur->begin() + static_cast<std::ptrdiff_t>(skip) + 1, cur->end());
    PrefixFrame f;
    f.pos = first->pos;
    f.unrolled = first->unrolled;
    f.after = std::move(after);
    if (auto* b = std::get_if<Block>(&first->node)) {
      f.kind = PrefixFrame::Kind::Block;
      f.label = b->label;
      d.frames.push_back(std::move(f));
      cur = &b->body;
    } else if (auto* t = std::get_if<Try>(&first->node)) {
      f.kind = PrefixFrame::Kind::Try;
      f.handler = t->handler;
      f.finalizer = t->finalizer;
      d.frames.push_back(std::move(f));
      cur = &t->body;
    } else if (auto* a = std::get_if<Attempt>(&first->node)) {
      f.kind = PrefixFrame::Kind::Attempt;
      f.label = a->label;
      f.continuation = a->continuation;
      d.frames.push_back(std::move(f));
      cur = &a->body;
    } else {
      d.active = first;
      d.rest = std::move(f.after);
      return d;
    }
    skip = 0;
  }
}

StmtList reassemble(const Decomposition& d) {
  StmtList list;
  if (d.active) list.push_back(d.active);
  list.insert(list.end(), d.rest.begin(), d.rest.end());
  for (auto it = d.frames.rbegin(); it != d.frames.rend(); ++it) {
    StmtPtr s;
    switch (it->kind) {
      case PrefixFrame::Kind::Block:
        s = make_stmt(Block{it->label, std::move(list)}, it->pos, it->unrolled);
        break;
      case PrefixFrame::Kind::Try:
        s = make_stmt(Try{std::move(list), it->handler, it->finalizer}, it->pos, it->unrolled);
        break;
      case PrefixFrame::Kind::Attempt:
        s = make_stmt(Attempt{it->label, std::move(list), it->continuation}, it->pos,
                      it->unrolled);
        break;
    }
    list.clear();
    list.push_back(std::move(s));
    list.insert(list.end(), it->after.begin(), it->after.end());
  }
  return list;
}

namespace {

void append_word(std::string& out, const std::string& w) {
  if (w.empty()) return;
  if (!out.empty()) out += ' ';
  out += w;
}

}  // namespace

DecompositionText describe(const Decomposition& d) {
  DecompositionText t;
  for (const auto& f : d.frames) {
    switch (f.kind) {
      case PrefixFrame::Kind::Block:
        append_word(t.prefix, f.label ? *f.label + ": {" : "{");
        break;
      case PrefixFrame::Kind::Try:
        append_word(t.prefix, "try {");
        break;
      case PrefixFrame::Kind::Attempt:
        append_word(t.prefix, f.label ? "attempt " + *f.label + ": {" : "attempt {");
        break;
    }
  }
  if (d.active) t.active = print_line({d.active});
  append_word(t.rest, print_line(d.rest));
  for (auto it = d.frames.rbegin(); it != d.frames.rend(); ++it) {
    append_word(t.rest, "}");
    if (it->kind == PrefixFrame::Kind::Try) {
      if (it->handler) {
        append_word(t.rest, std::string("catch (") +
                                (it->handler->throwable_syntax ? "Throwable " : "int ") +
                                it->handler->binder + ") {");
        append_word(t.rest, print_line(it->handler->body));
        append_word(t.rest, "}");
      }
      if (it->finalizer) {
        append_word(t.rest, "finally {");
        append_word(t.rest, print_line(*it->finalizer));
        append_word(t.rest, "}");
      }
    } else if (it->kind == PrefixFrame::Kind::Attempt) {
      append_word(t.rest, "continuation {");
      append_word(t.rest, print_line(it->continuation));
      append_word(t.rest, "}");
    }
    append_word(t.rest, print_line(it->after));
  }
  return t;
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Unary>) {
          collect_variables(*n.operand, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_variables(*n.lhs, out);
          collect_variables(*n.rhs, out);
        }
      },
      e.node);
}

namespace {

void collect_ids(const StmtList& body, std::set<std::string>& out);

void collect_ids(const Stmt& s, std::set<std::string>& out) {
  auto label = [&](const Label& l) {
    if (l) out.insert(*l);
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Assign>) {
          out.insert(n.target);
          collect_variables(*n.value, out);
        } else if constexpr (std::is_same_v<T, LocalDecl>) {
          out.insert(n.name);
          collect_variables(*n.init, out);
        } else if constexpr (std::is_same_v<T, Block>) {
          label(n.label);
          collect_ids(n.body, out);
        } else if constexpr (std::is_same_v<T, If>) {
          collect_variables(*n.cond, out);
          collect_ids(*n.then_branch, out);
          if (n.else_branch) collect_ids(*n.else_branch, out);
        } else if constexpr (std::is_same_v<T, While>) {
          label(n.label);
          collect_variables(*n.cond, out);
          collect_ids(*n.body, out);
        } else if constexpr (std::is_same_v<T, DoWhile>) {
          label(n.label);
          collect_variables(*n.cond, out);
          collect_ids(*n.body, out);
        } else if constexpr (std::is_same_v<T, For>) {
          label(n.label);
          collect_ids(n.init, out);
          if (n.guard) collect_variables(*n.guard, out);
          for (const auto& u : n.update) {
            out.insert(u.target);
            collect_variables(*u.value, out);
          }
          collect_ids(*n.body, out);
        } else if constexpr (std::is_same_v<T, Break> || std::is_same_v<T, Continue>) {
          label(n.label);
        } else if constexpr (std::is_same_v<T, Return>) {
          if (n.value) collect_variables(*n.value, out);
        } else if constexpr (std::is_same_v<T, Throw>) {
          collect_variables(*n.value, out);
        } else if constexpr (std::is_same_v<T, Try>) {
          collect_ids(n.body, out);
          if (n.handler) {
            out.insert(n.handler->binder);
            collect_ids(n.handler->body, out);
          }
          if (n.finalizer) collect_ids(*n.finalizer, out);
        } else if constexpr (std::is_same_v<T, Attempt>) {
          label(n.label);
          collect_ids(n.body, out);
          collect_ids(n.continuation, out);
        }
      },
      s.node);
}

void collect_ids(const StmtList& body, std::set<std::string>& out) {
  for (const auto& s : body) collect_ids(*s, out);
}

}  // namespace

std::set<std::string> identifiers(const StmtList& body) {
  std::set<std::string> out;
  collect_ids(body, out);
  return out;
}

std::set<std::string> identifiers(const Fragment& f) {
  auto out = identifiers(f.body);
  for (const auto& p : f.params) out.insert(p.name);
  return out;
}

std::string fresh_name(const std::set<std::string>& taken, const std::string& hint) {
  if (!taken.count(hint)) return hint;
  for (int i = 1;; ++i) {
    std::string candidate = hint + "_" + std::to_string(i);
    if (!taken.count(candidate)) return candidate;
  }
}

std::string fresh_flag(const Fragment& f, const std::string& hint) {
  return fresh_name(identifiers(f), hint);
}

StmtList statement_equivalents(const std::vector<Assign>& update) {
  StmtList out;
  out.reserve(update.size());
  for (const auto& a : update) out.push_back(assign(a.target, a.value));
  return out;
}

ExprPtr guard_equivalent(const ExprPtr& guard) { return guard ? guard : bool_lit(true); }

StmtList body_list(const StmtPtr& body) {
  if (auto* b = std::get_if<Block>(&body->node); b && !b->label) return b->body;
  return {body};
}

namespace {

StmtPtr copy_loop(const Stmt& loop) {
  return std::make_shared<const Stmt>(Stmt{loop.node, loop.pos, loop.unrolled + 1});
}

// Builds the unwound form with `tail` in place of the reintroduced loop copy.
StmtPtr unwind_with(const Stmt& loop, const std::function<StmtPtr(StmtPtr)>& tail) {
  if (auto* w = std::get_if<While>(&loop.node)) {
    auto att = attempt(body_list(w->body), {tail(copy_loop(loop))}, w->label, loop.pos);
    return if_stmt(w->cond, att, nullptr, loop.pos);
  }
  if (auto* d = std::get_if<DoWhile>(&loop.node)) {
    auto copy = make_stmt(While{d->label, d->cond, d->body}, loop.pos, loop.unrolled + 1);
    return attempt(body_list(d->body), {tail(copy)}, d->label, loop.pos);
  }
  if (auto* f = std::get_if<For>(&loop.node)) {
    if (!f->init.empty()) throw NotApplicable("for loop has an initializer");
    StmtList cont = statement_equivalents(f->update);
    cont.push_back(tail(copy_loop(loop)));
    auto att = attempt(body_list(f->body), std::move(cont), f->label, loop.pos);
    return if_stmt(guard_equivalent(f->guard), att, nullptr, loop.pos);
  }
  throw NotApplicable("not a loop");
}

StmtPtr unwind_times(const StmtPtr& loop, int k) {
  if (k <= 0) return loop;
  return unwind_with(*loop, [k](StmtPtr copy) { return unwind_times(copy, k - 1); });
}

StmtPtr identity(StmtPtr s) { return s; }

}  // namespace

StmtPtr unwind_while(const Stmt& loop) {
  if (!std::holds_alternative<While>(loop.node)) throw NotApplicable("not a while loop");
  return unwind_with(loop, identity);
}

StmtPtr unwind_do(const Stmt& loop) {
  if (!std::holds_alternative<DoWhile>(loop.node)) throw NotApplicable("not a do loop");
  return unwind_with(loop, identity);
}

StmtPtr unwind_for(const Stmt& loop) {
  if (!std::holds_alternative<For>(loop.node)) throw NotApplicable("not a for loop");
  return unwind_with(loop, identity);
}

StmtPtr unwind_loop(const Stmt& loop) { return unwind_with(loop, identity); }

StmtPtr pull_out_initializer(const Stmt& loop) {
  const auto* f = std::get_if<For>(&loop.node);
  if (!f) throw NotApplicable("not a for loop");
  if (f->init.empty()) throw NotApplicable("for loop has no initializer");
  StmtList body = f->init;
  body.push_back(
      make_stmt(For{f->label, {}, f->guard, f->update, f->body}, loop.pos, loop.unrolled));
  return block(std::move(body), std::nullopt, loop.pos);
}

StmtPtr do_to_while(const Stmt& loop, const std::string& fst) {
  const auto* d = std::get_if<DoWhile>(&loop.node);
  if (!d) throw NotApplicable("not a do loop");
  StmtList body{assign(fst, bool_lit(false))};
  for (auto& s : body_list(d->body)) body.push_back(s);
  auto cond = binary(BinaryOp::Or, var(fst), d->cond);
  return make_stmt(While{d->label, cond, block(std::move(body))}, loop.pos, loop.unrolled);
}

namespace {

bool header_on(const Stmt& s, int line) { return is_loop(s) && s.pos.line == line; }

const Stmt* find_in(const StmtPtr& s, int line);

const Stmt* find_in(const StmtList& body, int line) {
  for (const auto& s : body) {
    if (auto* hit = find_in(s, line)) return hit;
  }
  return nullptr;
}

const Stmt* find_in(const StmtPtr& s, int line) {
  if (!s) return nullptr;
  if (header_on(*s, line)) return s.get();
  return std::visit(
      [&](const auto& n) -> const Stmt* {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Block>) {
          return find_in(n.body, line);
        } else if constexpr (std::is_same_v<T, If>) {
          if (auto* h = find_in(n.then_branch, line)) return h;
          return find_in(n.else_branch, line);
        } else if constexpr (std::is_same_v<T, While> || std::is_same_v<T, DoWhile>) {
          return find_in(n.body, line);
        } else if constexpr (std::is_same_v<T, For>) {
          return find_in(n.body, line);
        } else if constexpr (std::is_same_v<T, Try>) {
          if (auto* h = find_in(n.body, line)) return h;
          if (n.handler) {
            if (auto* h2 = find_in(n.handler->body, line)) return h2;
          }
          return n.finalizer ? find_in(*n.finalizer, line) : nullptr;
        } else if constexpr (std::is_same_v<T, Attempt>) {
          if (auto* h = find_in(n.body, line)) return h;
          return find_in(n.continuation, line);
        } else {
          return nullptr;
        }
      },
      s->node);
}

StmtPtr replace_in(const StmtPtr& s, const Stmt* target, const StmtPtr& with);

StmtList replace_in(const StmtList& body, const Stmt* target, const StmtPtr& with) {
  StmtList out;
  out.reserve(body.size());
  for (const auto& s : body) out.push_back(replace_in(s, target, with));
  return out;
}

StmtPtr replace_in(const StmtPtr& s, const Stmt* target, const StmtPtr& with) {
  if (!s) return s;
  if (s.get() == target) return with;
  return std::visit(
      [&](const auto& n) -> StmtPtr {
        using T = std::decay_t<decltype(n)>;
        T copy = n;
        if constexpr (std::is_same_v<T, Block>) {
          copy.body = replace_in(n.body, target, with);
        } else if constexpr (std::is_same_v<T, If>) {
          copy.then_branch = replace_in(n.then_branch, target, with);
          copy.else_branch = replace_in(n.else_branch, target, with);
        } else if constexpr (std::is_same_v<T, While> || std::is_same_v<T, DoWhile> ||
                             std::is_same_v<T, For>) {
          copy.body = replace_in(n.body, target, with);
        } else if constexpr (std::is_same_v<T, Try>) {
          copy.body = replace_in(n.body, target, with);
          if (n.handler) copy.handler->body = replace_in(n.handler->body, target, with);
          if (n.finalizer) copy.finalizer = replace_in(*n.finalizer, target, with);
        } else if constexpr (std::is_same_v<T, Attempt>) {
          copy.body = replace_in(n.body, target, with);
          copy.continuation = replace_in(n.continuation, target, with);
        } else {
          return s;
        }
        return make_stmt(std::move(copy), s->pos, s->unrolled);
      },
      s->node);
}

}  // namespace

const Stmt* find_loop_at(const StmtList& body, int line) { return find_in(body, line); }

Fragment unwind_at(const Fragment& f, int line, int k) {
  const Stmt* loop = find_loop_at(f.body, line);
  if (!loop) throw ConfigError("no loop starts on line " + std::to_string(line));
  StmtPtr replacement;
  const auto* fl = std::get_if<For>(&loop->node);
  if (fl && !fl->init.empty()) {
    auto pulled = pull_out_initializer(*loop);
    const auto& blk = std::get<Block>(pulled->node);
    StmtList body = blk.body;
    body.back() = unwind_times(body.back(), k);
    replacement = block(std::move(body), std::nullopt, pulled->pos);
  } else {
    replacement = unwind_times(std::make_shared<const Stmt>(*loop), k);
  }
  Fragment out = f;
  out.body = replace_in(f.body, loop, replacement);
  return out;
}

}  // namespace loopdl::lang
