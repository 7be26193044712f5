#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stlc/type.hpp"

namespace stlc {

// Bound variables, free variables, and constants live in disjoint name
// spaces.  Free variables start with an uppercase letter at the surface
// syntax; the kind tag is authoritative internally.
enum class HeadKind { Bound, Free, Const };

struct Head {
  HeadKind kind;
  std::string name;
  TypePtr type;  // the head's full type, before application
};

inline bool same_head(const Head& a, const Head& b) {
  return a.kind == b.kind && a.name == b.name;
}

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Spine-form lambda terms.  A node is either an abstraction or a head
// applied to a (possibly empty) list of arguments.  Terms built through
// the kernel constructors are kept in eta-long beta-normal form; only
// eta_reduce produces terms with underapplied heads.
struct Term {
  bool is_abs = false;

  // abstraction
  std::string binder;
  TypePtr binder_type;
  TermPtr body;

  // spine
  Head head{};
  std::vector<TermPtr> args;

  TypePtr type;
};

inline TermPtr mk_abs(std::string binder, TypePtr binder_ty, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->is_abs = true;
  t->binder = std::move(binder);
  t->binder_type = binder_ty;
  t->type = arrow(binder_ty, body->type);
  t->body = std::move(body);
  return t;
}

inline TermPtr mk_spine(Head head, std::vector<TermPtr> args) {
  auto params = param_types(head.type);
  if (args.size() > params.size())
    throw TypeCheckError("arity overflow: " + head.name + " applied to " +
                         std::to_string(args.size()) + " arguments");
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!type_eq(args[i]->type, params[i]))
      throw TypeCheckError("argument type mismatch under " + head.name +
                           ": expected " + show(params[i]) + ", got " +
                           show(args[i]->type));
  }
  auto t = std::make_shared<Term>();
  t->type = drop_params(head.type, static_cast<int>(args.size()));
  t->head = std::move(head);
  t->args = std::move(args);
  return t;
}

inline TermPtr mk_var(HeadKind kind, std::string name, TypePtr ty) {
  return mk_spine(Head{kind, std::move(name), std::move(ty)}, {});
}

// ---------------------------------------------------------------------------
// Positions
// ---------------------------------------------------------------------------

// Strings of positive integers addressing subterms: the body of an
// abstraction is at 1, the i-th spine argument at i.
struct Position {
  std::vector<int> ix;

  bool empty() const { return ix.empty(); }
  bool operator<(const Position& o) const { return ix < o.ix; }
  bool operator==(const Position& o) const { return ix == o.ix; }

  Position then(int i) const {
    Position p = *this;
    p.ix.push_back(i);
    return p;
  }
  // p is a proper prefix of q, i.e. p < q in the subterm ordering.
  bool proper_prefix_of(const Position& q) const {
    if (ix.size() >= q.ix.size()) return false;
    return std::equal(ix.begin(), ix.end(), q.ix.begin());
  }
};

inline std::string show(const Position& p) {
  std::string out;
  for (std::size_t i = 0; i < p.ix.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p.ix[i]);
  }
  return out;
}

namespace detail {
inline void collect_positions(const TermPtr& t, Position here,
                              std::set<Position>& out) {
  out.insert(here);
  if (t->is_abs) {
    collect_positions(t->body, here.then(1), out);
  } else {
    for (std::size_t i = 0; i < t->args.size(); ++i)
      collect_positions(t->args[i], here.then(static_cast<int>(i) + 1), out);
  }
}
}  // namespace detail

inline std::set<Position> positions(const TermPtr& t) {
  std::set<Position> out;
  detail::collect_positions(t, {}, out);
  return out;
}

inline TermPtr subterm_at(TermPtr t, const Position& p) {
  for (int i : p.ix) {
    if (t->is_abs) {
      if (i != 1) throw PositionError("invalid position " + show(p));
      t = t->body;
    } else {
      if (i < 1 || static_cast<std::size_t>(i) > t->args.size())
        throw PositionError("invalid position " + show(p));
      t = t->args[i - 1];
    }
  }
  return t;
}

// Replaces the subterm at p; the replacement must have the same type.
inline TermPtr replace_at(const TermPtr& t, const Position& p,
                          const TermPtr& repl, std::size_t depth = 0) {
  if (depth == p.ix.size()) {
    if (!type_eq(t->type, repl->type))
      throw TypeCheckError("replacement at " + show(p) + " changes the type");
    return repl;
  }
  int i = p.ix[depth];
  if (t->is_abs) {
    if (i != 1) throw PositionError("invalid position " + show(p));
    return mk_abs(t->binder, t->binder_type,
                  replace_at(t->body, p, repl, depth + 1));
  }
  if (i < 1 || static_cast<std::size_t>(i) > t->args.size())
    throw PositionError("invalid position " + show(p));
  auto args = t->args;
  args[i - 1] = replace_at(args[i - 1], p, repl, depth + 1);
  return mk_spine(t->head, std::move(args));
}

// ---------------------------------------------------------------------------
// Heads, occurrence counts, variable sets
// ---------------------------------------------------------------------------

// head(\x.t) is the abstraction marker, head(h(s1..sm)) is h.
struct TopHead {
  bool is_abstraction = false;
  Head head{};  // valid iff !is_abstraction
};

inline TopHead head_of(const TermPtr& t) {
  if (t->is_abs) return TopHead{true, {}};
  return TopHead{false, t->head};
}

// Number of occurrences of h as a head anywhere in t.
inline int occ(const Head& h, const TermPtr& t) {
  if (t->is_abs) return occ(h, t->body);
  int n = same_head(t->head, h) ? 1 : 0;
  for (const auto& a : t->args) n += occ(h, a);
  return n;
}

inline void collect_vars(const TermPtr& t, std::map<std::string, TypePtr>& free,
                         std::map<std::string, TypePtr>& bound) {
  if (t->is_abs) {
    bound.emplace(t->binder, t->binder_type);
    collect_vars(t->body, free, bound);
    return;
  }
  if (t->head.kind == HeadKind::Free) free.emplace(t->head.name, t->head.type);
  for (const auto& a : t->args) collect_vars(a, free, bound);
}

inline std::map<std::string, TypePtr> free_vars(const TermPtr& t) {
  std::map<std::string, TypePtr> f, b;
  collect_vars(t, f, b);
  return f;
}

inline std::map<std::string, TypePtr> bound_vars(const TermPtr& t) {
  std::map<std::string, TypePtr> f, b;
  collect_vars(t, f, b);
  return b;
}

inline bool is_closed(const TermPtr& t) { return free_vars(t).empty(); }

// Every name (of any kind) mentioned in the term, plus binder names.
inline void collect_names(const TermPtr& t, std::set<std::string>& out) {
  if (t->is_abs) {
    out.insert(t->binder);
    collect_names(t->body, out);
    return;
  }
  out.insert(t->head.name);
  for (const auto& a : t->args) collect_names(a, out);
}

inline std::set<std::string> all_names(const TermPtr& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Alpha equality
// ---------------------------------------------------------------------------

namespace detail {
inline bool alpha_eq_rec(const TermPtr& a, const TermPtr& b,
                         std::vector<std::pair<std::string, std::string>>& env) {
  if (a->is_abs != b->is_abs) return false;
  if (a->is_abs) {
    if (!type_eq(a->binder_type, b->binder_type)) return false;
    env.emplace_back(a->binder, b->binder);
    bool r = alpha_eq_rec(a->body, b->body, env);
    env.pop_back();
    return r;
  }
  if (a->head.kind != b->head.kind) return false;
  if (a->head.kind == HeadKind::Bound) {
    // Compare de-Bruijn-style: most recent matching binder on each side.
    auto it = std::find_if(env.rbegin(), env.rend(), [&](const auto& p) {
      return p.first == a->head.name || p.second == b->head.name;
    });
    if (it == env.rend()) {
      // Unabstracted bound variables (internal use) compare by name.
      if (a->head.name != b->head.name) return false;
    } else if (it->first != a->head.name || it->second != b->head.name) {
      return false;
    }
  } else {
    if (a->head.name != b->head.name) return false;
  }
  if (!type_eq(a->head.type, b->head.type)) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!alpha_eq_rec(a->args[i], b->args[i], env)) return false;
  return true;
}
}  // namespace detail

// True iff the terms differ only in bound-variable names.
inline bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return detail::alpha_eq_rec(a, b, env);
}

// Equality up to bijective renaming of free variables on top of alpha
// equality.  Used when comparing against forms whose fresh-variable names
// are arbitrary.
namespace detail {
inline bool renaming_eq_rec(const TermPtr& a, const TermPtr& b,
                            std::vector<std::pair<std::string, std::string>>& benv,
                            std::map<std::string, std::string>& fmap,
                            std::map<std::string, std::string>& rmap) {
  if (a->is_abs != b->is_abs) return false;
  if (a->is_abs) {
    if (!type_eq(a->binder_type, b->binder_type)) return false;
    benv.emplace_back(a->binder, b->binder);
    bool r = renaming_eq_rec(a->body, b->body, benv, fmap, rmap);
    benv.pop_back();
    return r;
  }
  if (a->head.kind != b->head.kind) return false;
  if (a->head.kind == HeadKind::Bound) {
    auto it = std::find_if(benv.rbegin(), benv.rend(), [&](const auto& p) {
      return p.first == a->head.name || p.second == b->head.name;
    });
    bool ok = it == benv.rend()
                  ? a->head.name == b->head.name
                  : (it->first == a->head.name && it->second == b->head.name);
    if (!ok) return false;
  } else if (a->head.kind == HeadKind::Free) {
    auto f = fmap.find(a->head.name);
    auto r = rmap.find(b->head.name);
    if (f == fmap.end() && r == rmap.end()) {
      fmap[a->head.name] = b->head.name;
      rmap[b->head.name] = a->head.name;
    } else if (f == fmap.end() || r == rmap.end() || f->second != b->head.name ||
               r->second != a->head.name) {
      return false;
    }
  } else {
    if (a->head.name != b->head.name) return false;
  }
  if (!type_eq(a->head.type, b->head.type)) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!renaming_eq_rec(a->args[i], b->args[i], benv, fmap, rmap)) return false;
  return true;
}
}  // namespace detail

inline bool eq_up_to_renaming(const TermPtr& a, const TermPtr& b) {
  std::vector<std::pair<std::string, std::string>> benv;
  std::map<std::string, std::string> fmap, rmap;
  return detail::renaming_eq_rec(a, b, benv, fmap, rmap);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

inline std::string show(const TermPtr& t) {
  if (t->is_abs) {
    std::string out;
    const Term* c = t.get();
    while (c->is_abs) {
      out += "\\" + c->binder + ":" + show(c->binder_type) + ".";
      c = c->body.get();
    }
    // Rebuild a TermPtr view of the body for recursion: walk again.
    TermPtr body = t;
    while (body->is_abs) body = body->body;
    return out + " " + show(body);
  }
  std::string out = t->head.name;
  if (!t->args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) out += ",";
      out += show(t->args[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace stlc
