#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stlc/normalize.hpp"
#include "stlc/signature.hpp"
#include "stlc/subst.hpp"
#include "stlc/term.hpp"

namespace stlc {

// An anti-unification problem between two closed terms of the same type.
struct AUProblem {
  TermPtr left, right;
  TypePtr type;

  AUProblem(TermPtr l, TermPtr r) : left(std::move(l)), right(std::move(r)) {
    if (!type_eq(left->type, right->type))
      throw TypeCheckError("anti-unification problem requires equal types: " +
                           show(left->type) + " vs " + show(right->type));
    if (!is_closed(left) || !is_closed(right))
      throw Error("anti-unification problem requires closed terms");
    type = left->type;
  }
};

// A generalization g with substitutions recovering both sides.
struct GenWitness {
  TermPtr g;
  Substitution sigma1, sigma2;
  bool grounded = false;
};

inline bool check_generalization(const GenWitness& w, const AUProblem& p) {
  if (!type_eq(w.g->type, p.type))
    throw TypeCheckError("generalization type " + show(w.g->type) +
                         " does not match problem type " + show(p.type));
  return alpha_eq(apply_subst(w.g, w.sigma1), p.left) &&
         alpha_eq(apply_subst(w.g, w.sigma2), p.right);
}

// Outcome of a matching query "does sigma with g sigma = g' exist".
struct MatchOutcome {
  enum class Kind { Proven, Refuted, Unknown } kind;
  Substitution subst;  // set iff Proven
  std::string reason;

  bool is_proven() const { return kind == Kind::Proven; }
  bool is_refuted() const { return kind == Kind::Refuted; }
  bool is_unknown() const { return kind == Kind::Unknown; }

  static MatchOutcome refuted(std::string why) {
    return {Kind::Refuted, {}, std::move(why)};
  }
  static MatchOutcome unknown(std::string why) {
    return {Kind::Unknown, {}, std::move(why)};
  }
  // Proven outcomes are only constructed after re-checking the equation.
  static MatchOutcome proven(const TermPtr& query, const TermPtr& target,
                             Substitution s) {
    if (!alpha_eq(apply_subst(query, s), target))
      throw InternalError("matcher produced an unsound substitution");
    return {Kind::Proven, std::move(s), ""};
  }
};

// ---------------------------------------------------------------------------
// Pattern tests
// ---------------------------------------------------------------------------

// Miller patterns: every free variable is applied to a list of distinct
// bound variables (arguments are inspected after eta-reduction).
inline bool is_pattern(const TermPtr& t) {
  if (t->is_abs) return is_pattern(t->body);
  if (t->head.kind == HeadKind::Free) {
    std::set<std::string> seen;
    for (const auto& a : t->args) {
      TermPtr r = eta_reduce(a);
      if (r->is_abs || r->head.kind != HeadKind::Bound || !r->args.empty())
        return false;
      if (!seen.insert(r->head.name).second) return false;
    }
  }
  for (const auto& a : t->args)
    if (!is_pattern(a)) return false;
  return true;
}

namespace detail {

// Scope-aware parallel renaming of unabstracted bound-variable leaves.
inline TermPtr rename_bound(const TermPtr& t,
                            const std::map<std::string, std::string>& ren) {
  if (t->is_abs) {
    if (ren.count(t->binder)) {
      auto inner = ren;
      inner.erase(t->binder);
      return inner.empty() ? t : mk_abs(t->binder, t->binder_type,
                                        rename_bound(t->body, inner));
    }
    return mk_abs(t->binder, t->binder_type, rename_bound(t->body, ren));
  }
  Head h = t->head;
  if (h.kind == HeadKind::Bound) {
    auto it = ren.find(h.name);
    if (it != ren.end()) h.name = it->second;
  }
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(rename_bound(a, ren));
  return mk_spine(std::move(h), std::move(args));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Least general pattern generalization
// ---------------------------------------------------------------------------

// The decompose/abstract/merge rule system for higher-order patterns:
// identical heads are decomposed under commonized binders, disagreements
// are abstracted by a fresh variable applied to the bound variables that
// occur in either side, and disagreement pairs that coincide up to a
// bijective renaming of those variables share one generalization variable.
inline GenWitness pattern_lgg(const AUProblem& p) {
  struct Entry {
    std::string var;
    TypePtr var_ty;
    std::vector<std::pair<std::string, TypePtr>> chi;
    TermPtr left, right;  // open in the chi variables
  };
  std::vector<Entry> entries;
  std::set<std::string> avoid = all_names(p.left);
  {
    auto more = all_names(p.right);
    avoid.insert(more.begin(), more.end());
  }

  std::function<TermPtr(const TermPtr&, const TermPtr&,
                        std::vector<std::pair<std::string, TypePtr>>&)>
      go = [&](const TermPtr& s, const TermPtr& t,
               std::vector<std::pair<std::string, TypePtr>>& scope) -> TermPtr {
    if (s->is_abs) {
      // Same type, so t is an abstraction with the same binder type.
      std::string common = s->binder;
      TermPtr sb = s->body, tb = t->body;
      if (t->binder != common) {
        if (all_names(t->body).count(common)) {
          auto names = all_names(s->body);
          auto tnames = all_names(t->body);
          names.insert(tnames.begin(), tnames.end());
          for (const auto& [n, ty] : scope) names.insert(n);
          common = fresh_name(s->binder, names);
          sb = detail::rename_bound(sb, {{s->binder, common}});
        }
        tb = detail::rename_bound(tb, {{t->binder, common}});
      }
      scope.emplace_back(common, s->binder_type);
      TermPtr body = go(sb, tb, scope);
      scope.pop_back();
      return mk_abs(common, s->binder_type, body);
    }
    if (same_head(s->head, t->head)) {
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < s->args.size(); ++i)
        args.push_back(go(s->args[i], t->args[i], scope));
      return mk_spine(s->head, std::move(args));
    }

    // Disagreement: abstract over the in-scope variables used by either side.
    std::vector<std::pair<std::string, TypePtr>> chi;
    for (const auto& [name, ty] : scope) {
      Head b{HeadKind::Bound, name, ty};
      if (occ(b, s) > 0 || occ(b, t) > 0) chi.emplace_back(name, ty);
    }
    auto spine_of = [&](const std::string& var, const TypePtr& var_ty,
                        const std::vector<std::string>& arg_names,
                        const std::vector<TypePtr>& arg_tys) {
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < arg_names.size(); ++i)
        args.push_back(
            eta_expand_head(Head{HeadKind::Bound, arg_names[i], arg_tys[i]}));
      return mk_spine(Head{HeadKind::Free, var, var_ty}, std::move(args));
    };

    for (const auto& e : entries) {
      if (e.chi.size() != chi.size()) continue;
      if (!type_eq(e.left->type, s->type)) continue;
      // Search for a type-preserving bijection chi_e -> chi making both
      // components coincide.
      std::vector<std::size_t> idx(chi.size());
      std::iota(idx.begin(), idx.end(), 0);
      do {
        bool ok = true;
        for (std::size_t j = 0; j < idx.size() && ok; ++j)
          ok = type_eq(e.chi[j].second, chi[idx[j]].second);
        if (!ok) continue;
        std::map<std::string, std::string> ren;
        for (std::size_t j = 0; j < idx.size(); ++j)
          ren[e.chi[j].first] = chi[idx[j]].first;
        if (alpha_eq(detail::rename_bound(e.left, ren), s) &&
            alpha_eq(detail::rename_bound(e.right, ren), t)) {
          std::vector<std::string> arg_names;
          std::vector<TypePtr> arg_tys;
          for (std::size_t j = 0; j < idx.size(); ++j) {
            arg_names.push_back(chi[idx[j]].first);
            arg_tys.push_back(chi[idx[j]].second);
          }
          return spine_of(e.var, e.var_ty, arg_names, arg_tys);
        }
      } while (std::next_permutation(idx.begin(), idx.end()));
    }

    TypePtr var_ty = s->type;
    for (auto it = chi.rbegin(); it != chi.rend(); ++it)
      var_ty = arrow(it->second, var_ty);
    std::string var = fresh_name("Z", avoid);
    avoid.insert(var);
    entries.push_back(Entry{var, var_ty, chi, s, t});
    std::vector<std::string> arg_names;
    std::vector<TypePtr> arg_tys;
    for (const auto& [n, ty] : chi) {
      arg_names.push_back(n);
      arg_tys.push_back(ty);
    }
    return spine_of(var, var_ty, arg_names, arg_tys);
  };

  std::vector<std::pair<std::string, TypePtr>> scope;
  TermPtr g = go(p.left, p.right, scope);

  GenWitness w;
  w.g = g;
  for (const auto& e : entries) {
    TermPtr l = e.left, r = e.right;
    for (auto it = e.chi.rbegin(); it != e.chi.rend(); ++it) {
      l = mk_abs(it->first, it->second, l);
      r = mk_abs(it->first, it->second, r);
    }
    w.sigma1.bind(e.var, l);
    w.sigma2.bind(e.var, r);
  }
  w.grounded = true;
  if (!check_generalization(w, p))
    throw InternalError("pattern generalization failed verification");
  if (!is_pattern(w.g))
    throw InternalError("pattern generalization is not a pattern");
  return w;
}

// ---------------------------------------------------------------------------
// Decidable matching for higher-order patterns
// ---------------------------------------------------------------------------

namespace detail {

struct PatternMatcher {
  std::map<std::string, TermPtr> bind;
  std::vector<std::pair<std::string, std::string>> corr;  // pat/target binders
  std::string fail;

  bool refute(std::string why) {
    fail = std::move(why);
    return false;
  }

  bool go(const TermPtr& p, const TermPtr& t) {
    if (p->is_abs) {
      corr.emplace_back(p->binder, t->binder);
      bool r = go(p->body, t->body);
      corr.pop_back();
      return r;
    }
    if (p->head.kind == HeadKind::Free) return flex(p, t);
    if (t->is_abs) return refute("abstraction against rigid spine");
    switch (p->head.kind) {
      case HeadKind::Const:
        if (t->head.kind != HeadKind::Const || t->head.name != p->head.name)
          return refute("head clash: " + p->head.name + " vs " +
                        (t->is_abs ? "abstraction" : t->head.name));
        break;
      case HeadKind::Bound: {
        auto it = std::find_if(corr.rbegin(), corr.rend(), [&](const auto& c) {
          return c.first == p->head.name;
        });
        std::string want = it == corr.rend() ? p->head.name : it->second;
        if (t->head.kind != HeadKind::Bound || t->head.name != want)
          return refute("bound-variable clash at " + p->head.name);
        break;
      }
      default:
        return refute("unreachable");
    }
    if (p->args.size() != t->args.size())
      return refute("argument count mismatch at " + p->head.name);
    for (std::size_t i = 0; i < p->args.size(); ++i)
      if (!go(p->args[i], t->args[i])) return false;
    return true;
  }

  bool flex(const TermPtr& p, const TermPtr& t) {
    // p = X(a1..am) with the (eta-reduced) ai distinct bound variables.
    std::vector<std::pair<std::string, TypePtr>> zs;
    for (const auto& a : p->args) {
      TermPtr r = eta_reduce(a);
      if (r->is_abs || r->head.kind != HeadKind::Bound || !r->args.empty())
        throw ShapeError("query is not a higher-order pattern");
      zs.emplace_back(r->head.name, r->head.type);
    }
    // Rename target-side bound variables to the pattern's argument names;
    // anything else bound in scope escapes and refutes the match.
    std::map<std::string, std::string> ren;
    for (const auto& [pb, tb] : corr) {
      auto z = std::find_if(zs.begin(), zs.end(),
                            [&](const auto& v) { return v.first == pb; });
      if (z != zs.end()) ren[tb] = pb;
    }
    bool escaped = false;
    std::function<void(const TermPtr&, std::set<std::string>)> scan =
        [&](const TermPtr& u, std::set<std::string> shadow) {
          if (u->is_abs) {
            shadow.insert(u->binder);
            scan(u->body, shadow);
            return;
          }
          if (u->head.kind == HeadKind::Bound && !shadow.count(u->head.name) &&
              !ren.count(u->head.name))
            escaped = true;
          for (const auto& a : u->args) scan(a, shadow);
        };
    scan(t, {});
    if (escaped)
      return refute("target uses a bound variable outside the pattern scope");
    TermPtr body = rename_bound(t, ren);
    TermPtr range = body;
    for (auto it = zs.rbegin(); it != zs.rend(); ++it)
      range = mk_abs(it->first, it->second, range);
    range = beta_eta_normalize(range);
    auto existing = bind.find(p->head.name);
    if (existing != bind.end()) {
      if (!alpha_eq(existing->second, range))
        return refute("conflicting solutions for " + p->head.name);
      return true;
    }
    bind.emplace(p->head.name, range);
    return true;
  }
};

}  // namespace detail

// Matching with a pattern on the left is decidable and unitary: the result
// is Proven with the unique matcher or Refuted, never Unknown.
inline MatchOutcome pattern_match(const TermPtr& pat, const TermPtr& target) {
  if (!is_pattern(pat)) throw ShapeError("pattern_match requires a pattern query");
  if (!type_eq(pat->type, target->type))
    throw TypeCheckError("pattern and target types differ");
  detail::PatternMatcher m;
  if (!m.go(pat, target)) return MatchOutcome::refuted(m.fail);
  Substitution s;
  for (const auto& [n, r] : m.bind) s.bind(n, r);
  return MatchOutcome::proven(pat, target, std::move(s));
}

// ---------------------------------------------------------------------------
// Fuel-bounded matching for arbitrary queries
// ---------------------------------------------------------------------------

namespace detail {

// Imitate/project search in the style of Huet's procedure, specialized to
// matching: the target is frozen, so every goal is (possibly) flexible on
// the query side and rigid on the target side.  Fuel bounds the nesting
// depth of bindings; iterative deepening keeps proofs fuel-monotonic.
struct BoundedMatcher {
  static constexpr long kNodeBudget = 200000;
  static constexpr const char* kFreezeMark = "#";

  TermPtr query, target;
  std::set<std::string> used;
  int counter = 0;
  long nodes = 0;
  bool cutoff = false;

  struct Goal {
    TermPtr q, t;
    int depth;
  };
  struct Binding {
    std::string var;
    TermPtr range;
  };

  BoundedMatcher(TermPtr q, TermPtr t) : query(std::move(q)), target(std::move(t)) {
    used = all_names(query);
    auto more = all_names(target);
    used.insert(more.begin(), more.end());
  }

  static TermPtr freeze(const TermPtr& t) {
    if (t->is_abs) return mk_abs(t->binder, t->binder_type, freeze(t->body));
    Head h = t->head;
    if (h.kind == HeadKind::Free) {
      h.kind = HeadKind::Const;
      h.name = kFreezeMark + h.name;
    }
    std::vector<TermPtr> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) args.push_back(freeze(a));
    return mk_spine(std::move(h), std::move(args));
  }

  static TermPtr unfreeze(const TermPtr& t) {
    if (t->is_abs) return mk_abs(t->binder, t->binder_type, unfreeze(t->body));
    Head h = t->head;
    if (h.kind == HeadKind::Const && h.name.rfind(kFreezeMark, 0) == 0) {
      h.kind = HeadKind::Free;
      h.name = h.name.substr(1);
    }
    std::vector<TermPtr> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) args.push_back(unfreeze(a));
    return mk_spine(std::move(h), std::move(args));
  }

  std::string fresh(const std::string& hint) {
    std::string n;
    do {
      n = hint + std::to_string(++counter);
    } while (used.count(n));
    used.insert(n);
    return n;
  }

  // X  ->  \w1..wm. head(H1(w..), .., Hk(w..))
  TermPtr binding_range(const TypePtr& var_ty, const Head& head) {
    auto params = param_types(var_ty);
    std::vector<std::pair<std::string, TypePtr>> ws;
    for (std::size_t i = 0; i < params.size(); ++i)
      ws.emplace_back(fresh("w"), params[i]);
    auto head_params = param_types(head.type);
    std::vector<PrePtr> hargs;
    for (const auto& hp : head_params) {
      TypePtr aux_ty = hp;
      for (auto it = ws.rbegin(); it != ws.rend(); ++it)
        aux_ty = arrow(it->second, aux_ty);
      PrePtr aux = pre_leaf(Head{HeadKind::Free, fresh("X"), aux_ty});
      for (const auto& [wn, wt] : ws)
        aux = pre_app(aux, pre_leaf(Head{HeadKind::Bound, wn, wt}));
      hargs.push_back(aux);
    }
    PrePtr body = pre_leaf(head);
    for (const auto& a : hargs) body = pre_app(body, a);
    for (auto it = ws.rbegin(); it != ws.rend(); ++it)
      body = pre_lam(it->first, it->second, body);
    return normalize_pre(body, var_ty, used);
  }

  TermPtr apply_binding(const TermPtr& term, const Binding& b) {
    Substitution s;
    s.bind(b.var, b.range);
    auto avoid = used;
    auto names = all_names(term);
    avoid.insert(names.begin(), names.end());
    return apply_subst(term, s, avoid);
  }

  std::optional<std::vector<Binding>> dfs(std::vector<Goal> goals, int limit) {
    if (goals.empty()) return std::vector<Binding>{};
    Goal g = goals.front();

    // Strip binders jointly, renaming both sides to one fresh name.
    while (g.q->is_abs) {
      std::string common = fresh("v");
      TermPtr qb = rename_bound(g.q->body, {{g.q->binder, common}});
      TermPtr tb = rename_bound(g.t->body, {{g.t->binder, common}});
      g.q = qb;
      g.t = tb;
    }
    if (g.t->is_abs) return std::nullopt;

    if (g.q->head.kind != HeadKind::Free) {
      // Rigid-rigid: decompose or fail.
      if (!same_head(g.q->head, g.t->head)) return std::nullopt;
      if (g.q->args.size() != g.t->args.size()) return std::nullopt;
      std::vector<Goal> next;
      for (std::size_t i = 0; i < g.q->args.size(); ++i)
        next.push_back(Goal{g.q->args[i], g.t->args[i], g.depth});
      next.insert(next.end(), goals.begin() + 1, goals.end());
      return dfs(std::move(next), limit);
    }

    // Flexible query head.
    if (g.depth >= limit) {
      cutoff = true;
      return std::nullopt;
    }
    const Head& x = g.q->head;
    std::vector<Binding> branches;
    if (g.t->head.kind == HeadKind::Const)
      branches.push_back(Binding{x.name, binding_range(x.type, g.t->head)});
    auto params = param_types(x.type);
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (!type_eq(target_type(params[i]), g.t->type)) continue;
      TypePtr result = target_type(params[i]);
      (void)result;
      // Projection: X -> \w... wi(H..(w..))
      std::vector<std::pair<std::string, TypePtr>> ws;
      for (std::size_t j = 0; j < params.size(); ++j)
        ws.emplace_back(fresh("w"), params[j]);
      branches.push_back(Binding{
          x.name, binding_range_projection(x.type, static_cast<int>(i), ws)});
    }

    for (const auto& b : branches) {
      if (++nodes > kNodeBudget) {
        cutoff = true;
        return std::nullopt;
      }
      std::vector<Goal> next;
      next.push_back(Goal{apply_binding(g.q, b), g.t, g.depth + 1});
      for (std::size_t i = 1; i < goals.size(); ++i)
        next.push_back(
            Goal{apply_binding(goals[i].q, b), goals[i].t, goals[i].depth});
      auto rest = dfs(std::move(next), limit);
      if (rest) {
        rest->insert(rest->begin(), b);
        return rest;
      }
    }
    return std::nullopt;
  }

  TermPtr binding_range_projection(
      const TypePtr& var_ty, int index,
      const std::vector<std::pair<std::string, TypePtr>>& ws) {
    auto wi = ws[index];
    auto wi_params = param_types(wi.second);
    std::vector<PrePtr> hargs;
    for (const auto& hp : wi_params) {
      TypePtr aux_ty = hp;
      for (auto it = ws.rbegin(); it != ws.rend(); ++it)
        aux_ty = arrow(it->second, aux_ty);
      PrePtr aux = pre_leaf(Head{HeadKind::Free, fresh("X"), aux_ty});
      for (const auto& [wn, wt] : ws)
        aux = pre_app(aux, pre_leaf(Head{HeadKind::Bound, wn, wt}));
      hargs.push_back(aux);
    }
    PrePtr body = pre_leaf(Head{HeadKind::Bound, wi.first, wi.second});
    for (const auto& a : hargs) body = pre_app(body, a);
    for (auto it = ws.rbegin(); it != ws.rend(); ++it)
      body = pre_lam(it->first, it->second, body);
    return normalize_pre(body, var_ty, used);
  }

  MatchOutcome run(int fuel) {
    if (!type_eq(query->type, target->type))
      throw TypeCheckError("matching requires equal types");
    if (alpha_eq(query, target))
      return MatchOutcome::proven(query, target, Substitution{});
    TermPtr frozen = freeze(target);
    for (int limit = 0; limit <= fuel; ++limit) {
      nodes = 0;
      cutoff = false;
      auto found = dfs({Goal{query, frozen, 0}}, limit);
      if (found) {
        // Compose the binding chain into one simultaneous substitution on
        // the query's original variables.
        auto fvs = free_vars(query);
        Substitution sigma;
        for (const auto& [name, ty] : fvs) {
          TermPtr inst = eta_expand_head(Head{HeadKind::Free, name, ty});
          for (const auto& b : *found) inst = apply_binding(inst, b);
          sigma.bind(name, unfreeze(inst));
        }
        return MatchOutcome::proven(query, target, std::move(sigma));
      }
      if (!cutoff)
        return MatchOutcome::refuted("search space exhausted at depth " +
                                     std::to_string(limit));
    }
    return MatchOutcome::unknown("fuel exhausted");
  }
};

}  // namespace detail

inline MatchOutcome match_bounded(const TermPtr& query, const TermPtr& target,
                                  int fuel = 8) {
  detail::BoundedMatcher m(query, target);
  return m.run(fuel);
}

// Semi-decision of the instantiation quasi-order: is there sigma with
// g1 sigma = g2?  Decidable (and Unknown-free) when g1 is a pattern.
inline MatchOutcome less_general(const TermPtr& g1, const TermPtr& g2,
                                 int fuel = 8) {
  if (is_pattern(g1)) return pattern_match(g1, g2);
  return match_bounded(g1, g2, fuel);
}

// ---------------------------------------------------------------------------
// Grounding
// ---------------------------------------------------------------------------

// Replaces every free variable in the witness ranges by the canonical
// constant of its type, then re-verifies the witness.
inline GenWitness ground_witnesses(const GenWitness& w, const AUProblem& p,
                                   const Signature& sig) {
  auto ground_subst = [&](const Substitution& s) {
    Substitution out;
    for (const auto& [name, range] : s.bindings) {
      Substitution rho;
      for (const auto& [v, ty] : free_vars(range))
        rho.bind(v, eta_expand_head(
                        Head{HeadKind::Const, sig.canonical_by_type(ty), ty}));
      out.bind(name, apply_subst(range, rho));
    }
    return out;
  };
  GenWitness out;
  out.g = w.g;
  out.sigma1 = ground_subst(w.sigma1);
  out.sigma2 = ground_subst(w.sigma2);
  out.grounded = true;
  if (!check_generalization(out, p))
    throw InternalError("witness failed verification after grounding");
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force generalization enumeration (desk-scale oracle)
// ---------------------------------------------------------------------------

inline int term_size(const TermPtr& t) {
  if (t->is_abs) return 1 + term_size(t->body);
  int n = 1;
  for (const auto& a : t->args) n += term_size(a);
  return n;
}

namespace detail {

struct Enumerator {
  const Signature& sig;
  int var_budget;
  std::vector<TypePtr> universe;  // candidate types for binders/arguments

  static void add_subtypes(const TypePtr& t, std::vector<TypePtr>& out) {
    for (const auto& u : out)
      if (type_eq(u, t)) break;
    bool present = false;
    for (const auto& u : out) present = present || type_eq(u, t);
    if (!present) out.push_back(t);
    if (t->is_arrow()) {
      add_subtypes(t->from, out);
      add_subtypes(t->to, out);
    }
  }

  Enumerator(const Signature& s, const TypePtr& root, int budget)
      : sig(s), var_budget(budget) {
    add_subtypes(root, universe);
    for (const auto& [n, ty] : sig.constants) add_subtypes(ty, universe);
    std::sort(universe.begin(), universe.end(),
              [](const TypePtr& a, const TypePtr& b) { return show(a) < show(b); });
  }

  static int min_size(const TypePtr& t) { return 1 + type_arity(t); }

  struct State {
    std::vector<TypePtr> var_types;  // X1..Xn, in creation order
  };

  // All terms of type ty with size <= budget; vars thread through so later
  // holes may reuse variables introduced earlier.
  std::vector<std::pair<TermPtr, State>> gen(
      const TypePtr& ty, int budget,
      std::vector<std::pair<std::string, TypePtr>>& scope, const State& st,
      int depth) {
    std::vector<std::pair<TermPtr, State>> out;
    if (budget < min_size(ty)) return out;
    if (ty->is_arrow()) {
      std::string binder = "u" + std::to_string(depth + 1);
      scope.emplace_back(binder, ty->from);
      for (auto& [body, st2] : gen(ty->to, budget - 1, scope, st, depth + 1))
        out.emplace_back(mk_abs(binder, ty->from, body), st2);
      scope.pop_back();
      return out;
    }

    struct Cand {
      Head head;
      bool is_new_var = false;
    };
    std::vector<Cand> heads;
    for (const auto& [n, ht] : sig.constants)
      if (type_eq(target_type(ht), ty) && min_size(ht) <= budget)
        heads.push_back(Cand{Head{HeadKind::Const, n, ht}});
    for (const auto& [n, bt] : scope)
      if (type_eq(target_type(bt), ty) && min_size(bt) <= budget)
        heads.push_back(Cand{Head{HeadKind::Bound, n, bt}});
    for (std::size_t i = 0; i < st.var_types.size(); ++i)
      if (type_eq(target_type(st.var_types[i]), ty) &&
          min_size(st.var_types[i]) <= budget)
        heads.push_back(Cand{Head{HeadKind::Free, "X" + std::to_string(i + 1),
                                  st.var_types[i]}});
    if (static_cast<int>(st.var_types.size()) < var_budget) {
      std::string name = "X" + std::to_string(st.var_types.size() + 1);
      for (const auto& vt : candidate_var_types(ty, budget))
        heads.push_back(Cand{Head{HeadKind::Free, name, vt}, true});
    }

    for (const auto& cand : heads) {
      State st2 = st;
      if (cand.is_new_var) st2.var_types.push_back(cand.head.type);
      auto params = param_types(cand.head.type);
      std::vector<std::vector<std::pair<TermPtr, State>>> partial;
      partial.push_back({{nullptr, st2}});
      // Fill arguments left to right, sharing the remaining budget.
      std::vector<std::pair<std::vector<TermPtr>, State>> rows = {{{}, st2}};
      for (std::size_t i = 0; i < params.size(); ++i) {
        std::vector<std::pair<std::vector<TermPtr>, State>> next_rows;
        int reserve = 0;
        for (std::size_t j = i + 1; j < params.size(); ++j)
          reserve += min_size(params[j]);
        for (auto& [args_so_far, row_st] : rows) {
          int used = 1;
          for (const auto& a : args_so_far) used += term_size(a);
          int arg_budget = budget - used - reserve;
          for (auto& [arg, st3] : gen(params[i], arg_budget, scope, row_st, depth)) {
            auto args2 = args_so_far;
            args2.push_back(arg);
            next_rows.emplace_back(std::move(args2), st3);
          }
        }
        rows = std::move(next_rows);
        if (rows.empty()) break;
      }
      for (auto& [args, row_st] : rows)
        out.emplace_back(mk_spine(cand.head, args), row_st);
    }
    return out;
  }

  // Types g1->..->gk->ty with argument types from the universe, small
  // enough that the variable plus minimal arguments fit the budget.
  std::vector<TypePtr> candidate_var_types(const TypePtr& ty, int budget) {
    std::vector<TypePtr> out{ty};
    std::vector<std::vector<TypePtr>> stack{{}};
    std::function<void(std::vector<TypePtr>&, int)> rec =
        [&](std::vector<TypePtr>& acc, int min_args) {
          if (!acc.empty()) {
            TypePtr t = ty;
            for (auto it = acc.rbegin(); it != acc.rend(); ++it)
              t = arrow(*it, t);
            out.push_back(t);
          }
          if (1 + min_args >= budget) return;
          for (const auto& u : universe) {
            if (1 + min_args + min_size(u) > budget) continue;
            acc.push_back(u);
            rec(acc, min_args + min_size(u));
            acc.pop_back();
          }
        };
    std::vector<TypePtr> acc;
    rec(acc, 0);
    return out;
  }
};

}  // namespace detail

// All eta-long beta-normal terms of p's type with at most size_bound spine
// nodes plus binders and at most var_budget distinct free variables that
// generalize p; deduplicated up to alpha equality and renaming of free
// variables, ordered by (size, printed form).
inline std::vector<GenWitness> enumerate_generalizations(
    const AUProblem& p, int size_bound, int var_budget, const Signature& sig,
    int fuel = 10) {
  detail::Enumerator en(sig, p.type, var_budget);
  std::vector<std::pair<std::string, TypePtr>> scope;
  detail::Enumerator::State st;
  auto candidates = en.gen(p.type, size_bound, scope, st, 0);

  std::set<std::string> seen;
  std::vector<GenWitness> out;
  for (auto& [term, used_state] : candidates) {
    std::string key = show(term);
    if (!seen.insert(key).second) continue;
    auto m1 = match_bounded(term, p.left, fuel);
    if (!m1.is_proven()) continue;
    auto m2 = match_bounded(term, p.right, fuel);
    if (!m2.is_proven()) continue;
    GenWitness w;
    w.g = term;
    w.sigma1 = m1.subst;
    w.sigma2 = m2.subst;
    w.grounded = w.sigma1.is_ground() && w.sigma2.is_ground();
    out.push_back(std::move(w));
  }
  std::sort(out.begin(), out.end(), [](const GenWitness& a, const GenWitness& b) {
    int sa = term_size(a.g), sb = term_size(b.g);
    if (sa != sb) return sa < sb;
    return show(a.g) < show(b.g);
  });
  return out;
}

}  // namespace stlc
