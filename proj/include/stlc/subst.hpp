#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stlc/normalize.hpp"
#include "stlc/term.hpp"

namespace stlc {

// Deterministic fresh-name generation: hint, hint1, hint2, ...
inline std::string fresh_name(const std::string& hint,
                              const std::set<std::string>& avoid) {
  return detail::fresh_in(hint, avoid);
}

inline std::string fresh_free_var(const std::string& hint,
                                  const std::set<std::string>& avoid,
                                  const TypePtr& /*ty*/ = nullptr) {
  return fresh_name(hint, avoid);
}

// A finite map from free variables to type-matching terms.  Identity
// bindings (X mapped to the eta-long form of X itself) are dropped so the
// domain only holds variables the substitution actually moves.
struct Substitution {
  std::map<std::string, TermPtr> bindings;

  Substitution() = default;
  explicit Substitution(std::map<std::string, TermPtr> b) {
    for (auto& [name, term] : b) bind(name, term);
  }

  void bind(const std::string& name, const TermPtr& term) {
    TermPtr identity = eta_expand_head(Head{HeadKind::Free, name, term->type});
    if (alpha_eq(term, identity)) return;
    bindings[name] = term;
  }

  bool empty() const { return bindings.empty(); }
  bool binds(const std::string& name) const { return bindings.count(name) > 0; }

  TermPtr at(const std::string& name) const {
    auto it = bindings.find(name);
    if (it == bindings.end()) throw Error("substitution does not bind " + name);
    return it->second;
  }

  Substitution without(const std::string& name) const {
    Substitution s = *this;
    s.bindings.erase(name);
    return s;
  }

  Substitution merged_with(const Substitution& other) const {
    Substitution s = *this;
    for (const auto& [n, t] : other.bindings) s.bindings[n] = t;
    return s;
  }

  // True iff no range term contains a free variable.
  bool is_ground() const {
    for (const auto& [n, t] : bindings)
      if (!free_vars(t).empty()) return false;
    return true;
  }
};

inline std::string show(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [n, t] : s.bindings) {
    if (!first) out += ", ";
    first = false;
    out += n + " -> " + show(t);
  }
  return out + "}";
}

// Simultaneous, capture-avoiding application followed by renormalization.
// Range terms are spliced syntactically and never re-substituted, so a
// range may mention its own domain variable.
inline TermPtr apply_subst(const TermPtr& t, const Substitution& sigma,
                           const std::set<std::string>& avoid = {}) {
  if (sigma.empty()) return t;
  auto fvs = free_vars(t);
  std::map<std::string, detail::PrePtr> splice;
  std::set<std::string> scope = detail::leaf_names(t);
  scope.insert(avoid.begin(), avoid.end());
  bool relevant = false;
  for (const auto& [name, range] : sigma.bindings) {
    auto occ_it = fvs.find(name);
    if (occ_it == fvs.end()) continue;
    if (!type_eq(occ_it->second, range->type))
      throw TypeCheckError("substitution for " + name + " has type " +
                           show(range->type) + ", expected " +
                           show(occ_it->second));
    splice[name] = detail::embed(range);
    auto names = detail::leaf_names(range);
    scope.insert(names.begin(), names.end());
    relevant = true;
  }
  if (!relevant) return t;
  return detail::normalize_pre(detail::embed(t, &splice), t->type,
                               std::move(scope));
}

// The substitution {name -> \b1...bk. bi} at the given variable type; only
// defined when the i-th parameter equals the result type.
inline Substitution projection_subst(const std::string& name,
                                     const TypePtr& var_ty, int index,
                                     const std::set<std::string>& avoid = {}) {
  auto params = param_types(var_ty);
  TypePtr result = target_type(var_ty);
  if (index < 1 || static_cast<std::size_t>(index) > params.size())
    throw Error("projection index out of range");
  if (!type_eq(params[index - 1], result))
    throw TypeCheckError("projection " + std::to_string(index) +
                         " is not type-correct for " + show(var_ty));
  std::set<std::string> used = avoid;
  std::vector<std::pair<std::string, TypePtr>> binders;
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::string b = fresh_name("w" + std::to_string(i + 1), used);
    used.insert(b);
    binders.emplace_back(b, params[i]);
  }
  detail::PrePtr body = detail::pre_leaf(
      Head{HeadKind::Bound, binders[index - 1].first, params[index - 1]});
  for (auto it = binders.rbegin(); it != binders.rend(); ++it)
    body = detail::pre_lam(it->first, it->second, body);
  Substitution s;
  s.bind(name, detail::normalize_pre(body, var_ty, used));
  return s;
}

}  // namespace stlc
