#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stlc/term.hpp"

namespace stlc {
namespace detail {

// Pre-terms: general applicative syntax produced by the parser and by
// substitution splicing.  Unlike Term, a PreTerm may contain beta-redexes
// and underapplied heads; normalization evaluates them away.
struct PreTerm;
using PrePtr = std::shared_ptr<const PreTerm>;

struct PreTerm {
  enum class K { Leaf, Name, Lam, App } k = K::Leaf;
  Head leaf{};        // K::Leaf
  std::string name;   // K::Name (unresolved identifier, parser only)
  std::string binder; // K::Lam
  TypePtr binder_ty;
  PrePtr body;
  PrePtr fn, arg;     // K::App
};

inline PrePtr pre_leaf(Head h) {
  auto p = std::make_shared<PreTerm>();
  p->k = PreTerm::K::Leaf;
  p->leaf = std::move(h);
  return p;
}

inline PrePtr pre_name(std::string n) {
  auto p = std::make_shared<PreTerm>();
  p->k = PreTerm::K::Name;
  p->name = std::move(n);
  return p;
}

inline PrePtr pre_lam(std::string b, TypePtr ty, PrePtr body) {
  auto p = std::make_shared<PreTerm>();
  p->k = PreTerm::K::Lam;
  p->binder = std::move(b);
  p->binder_ty = std::move(ty);
  p->body = std::move(body);
  return p;
}

inline PrePtr pre_app(PrePtr f, PrePtr a) {
  auto p = std::make_shared<PreTerm>();
  p->k = PreTerm::K::App;
  p->fn = std::move(f);
  p->arg = std::move(a);
  return p;
}

// Embeds a spine-form term, optionally splicing replacement pre-terms for
// free-variable heads.  The splice map is consulted once; spliced subtrees
// are not walked again, which gives simultaneous single-pass substitution.
inline PrePtr embed(const TermPtr& t,
                    const std::map<std::string, PrePtr>* splice = nullptr) {
  if (t->is_abs)
    return pre_lam(t->binder, t->binder_type, embed(t->body, splice));
  PrePtr head;
  if (splice && t->head.kind == HeadKind::Free) {
    auto it = splice->find(t->head.name);
    head = it != splice->end() ? it->second : pre_leaf(t->head);
  } else {
    head = pre_leaf(t->head);
  }
  for (const auto& a : t->args) head = pre_app(head, embed(a, splice));
  return head;
}

// ---------------------------------------------------------------------------
// Normalization by evaluation
// ---------------------------------------------------------------------------

struct Value;
using ValPtr = std::shared_ptr<const Value>;
using Env = std::map<std::string, ValPtr>;

struct Value {
  bool is_lam = false;
  // closure
  std::string hint;
  std::function<ValPtr(const ValPtr&)> apply;
  // neutral
  Head head{};
  std::vector<ValPtr> args;
};

inline ValPtr vlam(std::string hint, std::function<ValPtr(const ValPtr&)> f) {
  auto v = std::make_shared<Value>();
  v->is_lam = true;
  v->hint = std::move(hint);
  v->apply = std::move(f);
  return v;
}

inline ValPtr vneutral(Head h, std::vector<ValPtr> args = {}) {
  auto v = std::make_shared<Value>();
  v->head = std::move(h);
  v->args = std::move(args);
  return v;
}

inline ValPtr vapp(const ValPtr& f, const ValPtr& a) {
  if (f->is_lam) return f->apply(a);
  auto v = std::make_shared<Value>();
  v->head = f->head;
  v->args = f->args;
  v->args.push_back(a);
  return v;
}

inline ValPtr eval(const PrePtr& e, const Env& env) {
  switch (e->k) {
    case PreTerm::K::Leaf: {
      if (e->leaf.kind == HeadKind::Bound) {
        auto it = env.find(e->leaf.name);
        if (it != env.end()) return it->second;
      }
      return vneutral(e->leaf);
    }
    case PreTerm::K::Name:
      throw InternalError("unresolved identifier during evaluation: " + e->name);
    case PreTerm::K::Lam: {
      PrePtr body = e->body;
      std::string binder = e->binder;
      Env captured = env;
      return vlam(binder, [body, binder, captured](const ValPtr& a) {
        Env inner = captured;
        inner[binder] = a;
        return eval(body, inner);
      });
    }
    case PreTerm::K::App:
      return vapp(eval(e->fn, env), eval(e->arg, env));
  }
  throw InternalError("corrupt pre-term");
}

inline std::string fresh_in(const std::string& hint,
                            const std::set<std::string>& used) {
  if (!used.count(hint)) return hint;
  for (int i = 1;; ++i) {
    std::string cand = hint + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

// Reads a value back at the given type, producing the eta-long beta-normal
// term.  `scope` holds names a fresh binder must not shadow on this path.
inline TermPtr reify(const ValPtr& v, const TypePtr& ty,
                     const std::set<std::string>& scope) {
  if (ty->is_arrow()) {
    std::string name = fresh_in(v->is_lam && !v->hint.empty() ? v->hint : "z", scope);
    auto inner = scope;
    inner.insert(name);
    ValPtr var = vneutral(Head{HeadKind::Bound, name, ty->from});
    TermPtr body = reify(vapp(v, var), ty->to, inner);
    return mk_abs(name, ty->from, body);
  }
  if (v->is_lam)
    throw InternalError("function value at base type during readback");
  auto params = param_types(v->head.type);
  if (params.size() != v->args.size())
    throw InternalError("underapplied head at base type: " + v->head.name);
  std::vector<TermPtr> args;
  args.reserve(v->args.size());
  for (std::size_t i = 0; i < v->args.size(); ++i)
    args.push_back(reify(v->args[i], params[i], scope));
  return mk_spine(v->head, std::move(args));
}

inline TermPtr normalize_pre(const PrePtr& e, const TypePtr& ty,
                             std::set<std::string> avoid) {
  return reify(eval(e, {}), ty, avoid);
}

// Names fresh binders must avoid: free variables and constants of t.
inline std::set<std::string> leaf_names(const TermPtr& t) {
  std::set<std::string> out;
  std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
    if (u->is_abs) {
      go(u->body);
      return;
    }
    if (u->head.kind != HeadKind::Bound) out.insert(u->head.name);
    for (const auto& a : u->args) go(a);
  };
  go(t);
  return out;
}

}  // namespace detail

// Recomputes the eta-long beta-normal form.  Idempotent up to alpha
// equality on kernel-constructed terms; also accepts eta-reduced input.
inline TermPtr beta_eta_normalize(const TermPtr& t,
                                  const std::set<std::string>& avoid = {}) {
  auto scope = detail::leaf_names(t);
  scope.insert(avoid.begin(), avoid.end());
  return detail::normalize_pre(detail::embed(t), t->type, std::move(scope));
}

// Contracts every eta-redex, bottom-up.  The result may have underapplied
// heads and is the eta-normal form of the paper's t|eta notation.
inline TermPtr eta_reduce(const TermPtr& t) {
  if (t->is_abs) {
    TermPtr body = eta_reduce(t->body);
    if (!body->is_abs && !body->args.empty()) {
      const TermPtr& last = body->args.back();
      bool last_is_binder = !last->is_abs && last->args.empty() &&
                            last->head.kind == HeadKind::Bound &&
                            last->head.name == t->binder;
      if (last_is_binder) {
        bool occurs_elsewhere =
            (body->head.kind == HeadKind::Bound && body->head.name == t->binder);
        for (std::size_t i = 0; !occurs_elsewhere && i + 1 < body->args.size(); ++i)
          occurs_elsewhere =
              occ(Head{HeadKind::Bound, t->binder, t->binder_type},
                  body->args[i]) > 0;
        if (!occurs_elsewhere) {
          std::vector<TermPtr> args(body->args.begin(), body->args.end() - 1);
          return mk_spine(body->head, std::move(args));
        }
      }
    }
    return mk_abs(t->binder, t->binder_type, body);
  }
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(eta_reduce(a));
    changed = changed || args.back() != a;
  }
  return changed ? mk_spine(t->head, std::move(args)) : t;
}

// The eta-long form of a lone head, e.g. a free variable or constant.
inline TermPtr eta_expand_head(const Head& h) {
  return detail::normalize_pre(detail::pre_leaf(h), h.type, {h.name});
}

}  // namespace stlc
