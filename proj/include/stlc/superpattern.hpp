#pragma once

#include <string>
#include <vector>

#include "stlc/normalize.hpp"
#include "stlc/term.hpp"

namespace stlc {

enum class ViolationReason { BadArgHead, DuplicateBoundArg };

inline std::string show(ViolationReason r) {
  return r == ViolationReason::BadArgHead ? "BadArgHead" : "DuplicateBoundArg";
}

struct SuperpatternViolation {
  Position at;
  ViolationReason reason;
};

struct SuperpatternReport {
  bool is_member = true;
  std::vector<SuperpatternViolation> violations;
};

namespace detail {
inline void superpattern_walk(const TermPtr& t, const Position& here,
                              SuperpatternReport& report) {
  if (t->is_abs) {
    superpattern_walk(t->body, here.then(1), report);
    return;
  }
  if (t->head.kind == HeadKind::Free) {
    // Arguments are classified after eta-reduction: each must be exactly a
    // bound variable of the term or have a free-variable head, and
    // bound-variable arguments must be pairwise distinct.
    std::vector<std::pair<std::string, int>> bound_args;
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      TermPtr r = eta_reduce(t->args[i]);
      Position at = here.then(static_cast<int>(i) + 1);
      if (!r->is_abs && r->head.kind == HeadKind::Bound && r->args.empty()) {
        bound_args.emplace_back(r->head.name, static_cast<int>(i) + 1);
        continue;
      }
      bool free_headed = !r->is_abs && r->head.kind == HeadKind::Free;
      if (!free_headed) {
        report.is_member = false;
        report.violations.push_back({at, ViolationReason::BadArgHead});
      }
    }
    for (std::size_t i = 0; i < bound_args.size(); ++i)
      for (std::size_t j = i + 1; j < bound_args.size(); ++j)
        if (bound_args[i].first == bound_args[j].first) {
          report.is_member = false;
          report.violations.push_back(
              {here.then(bound_args[j].second), ViolationReason::DuplicateBoundArg});
        }
  }
  for (std::size_t i = 0; i < t->args.size(); ++i)
    superpattern_walk(t->args[i], here.then(static_cast<int>(i) + 1), report);
}
}  // namespace detail

// Membership in the superpattern fragment: at every position whose
// eta-normal form is a free variable applied to arguments, the arguments
// are bound variables or free-headed terms, with bound arguments distinct.
inline SuperpatternReport is_superpattern(const TermPtr& t) {
  SuperpatternReport report;
  detail::superpattern_walk(t, {}, report);
  return report;
}

}  // namespace stlc
