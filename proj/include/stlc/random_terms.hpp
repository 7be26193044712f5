#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stlc/signature.hpp"
#include "stlc/term.hpp"

namespace stlc {

// Deterministic generator of well-typed eta-long closed terms, for
// property tests and the randomized acceptance runs.
struct TermGen {
  std::mt19937 rng;
  Signature sig;
  std::vector<std::pair<std::string, TypePtr>> consts;
  int binder_counter = 0;

  explicit TermGen(unsigned seed, Signature s) : rng(seed), sig(std::move(s)) {
    for (const auto& [n, ty] : sig.constants) consts.emplace_back(n, ty);
  }

  int pick(int n) {
    std::uniform_int_distribution<int> d(0, n - 1);
    return d(rng);
  }

  TermPtr term(const TypePtr& ty, int depth,
               std::vector<std::pair<std::string, TypePtr>>& scope) {
    if (ty->is_arrow()) {
      std::string b = "v" + std::to_string(++binder_counter);
      scope.emplace_back(b, ty->from);
      TermPtr body = term(ty->to, depth, scope);
      scope.pop_back();
      return mk_abs(b, ty->from, body);
    }
    std::vector<Head> heads;
    for (const auto& [n, ct] : consts)
      if (type_eq(target_type(ct), ty) && (depth > 0 || !ct->is_arrow()))
        heads.push_back(Head{HeadKind::Const, n, ct});
    for (const auto& [n, bt] : scope)
      if (type_eq(target_type(bt), ty) && (depth > 0 || !bt->is_arrow()))
        heads.push_back(Head{HeadKind::Bound, n, bt});
    if (heads.empty()) {
      // Fall back to any zero-ary constant of the right base type; the test
      // signatures always provide one.
      for (const auto& [n, ct] : consts)
        if (type_eq(ct, ty)) heads.push_back(Head{HeadKind::Const, n, ct});
      if (heads.empty()) throw Error("generator: no inhabitant for " + show(ty));
    }
    Head h = heads[pick(static_cast<int>(heads.size()))];
    std::vector<TermPtr> args;
    for (const auto& pt : param_types(h.type))
      args.push_back(term(pt, depth - 1, scope));
    return mk_spine(std::move(h), std::move(args));
  }

  TermPtr closed(const TypePtr& ty, int depth) {
    std::vector<std::pair<std::string, TypePtr>> scope;
    return term(ty, depth, scope);
  }

  TypePtr random_type(int depth) {
    if (depth <= 0 || pick(3) == 0) return base_type(sig.default_base);
    return arrow(random_type(depth - 1), random_type(depth - 1));
  }
};

// Five constants over one base type, with first- and second-order shapes.
inline Signature test_signature() {
  Signature sig;
  TypePtr a = base_type("a");
  sig.declare("a", a);
  sig.declare("b", a);
  sig.declare("f", arrow(a, a));
  sig.declare("g", arrow(a, arrow(a, a)));
  sig.declare("h", arrow(arrow(a, a), a));
  return sig;
}

}  // namespace stlc
