#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stlc/au.hpp"
#include "stlc/superpattern.hpp"

namespace stlc {

// The two term languages the constructions run over: all lambda terms, or
// the superpattern fragment.
enum class Fragment { Lambda, Sp };

inline std::string show(Fragment f) {
  return f == Fragment::Lambda ? "lambda" : "sp";
}

// ---------------------------------------------------------------------------
// Pattern-derived and head-shape checks
// ---------------------------------------------------------------------------

// A generalization is pattern-derived when the pattern lgg of the problem
// matches into it.
inline bool is_pattern_derived(const TermPtr& g, const AUProblem& p) {
  return pattern_match(pattern_lgg(p).g, g).is_proven();
}

struct HeadShape {
  std::string var;  // the free variable heading the constant's argument
  int arg_count;    // m > 0
};

// For g = \x.\y. f(r): the flexible head of r together with its argument
// count, when it is a free variable applied to at least one argument.
// Constant, bound-variable or abstraction heads, and m = 0, yield nothing.
inline std::optional<HeadShape> check_head_shape(const TermPtr& g) {
  if (!g->is_abs || !g->body->is_abs)
    throw ShapeError("expected a term of shape \\x.\\y. f(r)");
  const TermPtr& spine = g->body->body;
  if (spine->is_abs || spine->head.kind != HeadKind::Const ||
      spine->args.size() != 1)
    throw ShapeError("expected a term of shape \\x.\\y. f(r)");
  TermPtr r = eta_reduce(spine->args[0]);
  if (r->is_abs || r->head.kind != HeadKind::Free || r->args.empty())
    return std::nullopt;
  return HeadShape{r->head.name, static_cast<int>(r->args.size())};
}

// ---------------------------------------------------------------------------
// Tightness
// ---------------------------------------------------------------------------

struct TightOutcome {
  enum class Kind { Tight, NotTight, Unknown } kind;
  // NotTight: the substitution that keeps the term a generalization,
  // together with the proven witnesses of the rewritten term.
  Substitution witness;
  Substitution sigma1, sigma2;
  std::string detail;

  bool is_tight() const { return kind == Kind::Tight; }
  bool is_not_tight() const { return kind == Kind::NotTight; }
};

namespace detail {

struct GenCheck {
  MatchOutcome::Kind kind;
  Substitution sigma1, sigma2;
};

// Is g' still a generalization of p (within the fragment)?
inline GenCheck check_membership(const TermPtr& g, const AUProblem& p,
                                 Fragment frag, int fuel) {
  if (frag == Fragment::Sp && !is_superpattern(g).is_member)
    return {MatchOutcome::Kind::Refuted, {}, {}};
  auto m1 = less_general(g, p.left, fuel);
  if (m1.is_refuted()) return {MatchOutcome::Kind::Refuted, {}, {}};
  auto m2 = less_general(g, p.right, fuel);
  if (m2.is_refuted()) return {MatchOutcome::Kind::Refuted, {}, {}};
  if (m1.is_proven() && m2.is_proven())
    return {MatchOutcome::Kind::Proven, m1.subst, m2.subst};
  return {MatchOutcome::Kind::Unknown, {}, {}};
}

}  // namespace detail

// Checks the supplied grounded witness pair and all type-correct
// projections: NotTight when some candidate substitution leaves g a
// generalization of p, Tight when every candidate is refuted, Unknown when
// a membership check runs out of fuel.
inline TightOutcome is_tight(const GenWitness& w, const AUProblem& p,
                             Fragment frag, int fuel = 8) {
  bool saw_unknown = false;
  auto avoid = all_names(w.g);
  std::vector<Substitution> candidates;
  for (const auto& [name, ty] : free_vars(w.g)) {
    auto params = param_types(ty);
    TypePtr result = target_type(ty);
    for (std::size_t i = 0; i < params.size(); ++i)
      if (type_eq(params[i], result))
        candidates.push_back(
            projection_subst(name, ty, static_cast<int>(i) + 1, avoid));
    for (const Substitution* s : {&w.sigma1, &w.sigma2}) {
      if (!s->binds(name)) continue;
      Substitution cand;
      cand.bind(name, s->at(name));
      if (!cand.empty()) candidates.push_back(std::move(cand));
    }
  }
  for (const auto& cand : candidates) {
    TermPtr rewritten = apply_subst(w.g, cand);
    auto check = detail::check_membership(rewritten, p, frag, fuel);
    if (check.kind == MatchOutcome::Kind::Proven)
      return {TightOutcome::Kind::NotTight, cand, check.sigma1, check.sigma2,
              "rewrite by " + show(cand) + " keeps a generalization"};
    if (check.kind == MatchOutcome::Kind::Unknown) saw_unknown = true;
  }
  if (saw_unknown)
    return {TightOutcome::Kind::Unknown, {}, {}, {}, "membership check ran out of fuel"};
  return {TightOutcome::Kind::Tight, {}, {}, {}, ""};
}

struct TightenOutcome {
  GenWitness witness;
  TightOutcome::Kind status;  // Tight, or Unknown on fuel exhaustion
  int rewrites = 0;
};

// Repeatedly applies NotTight rewrites until tight.  Every rewrite removes
// at least one free variable, so the loop is bounded by |FV(g)|.
inline TightenOutcome tighten(const GenWitness& w, const AUProblem& p,
                              Fragment frag, int fuel = 8,
                              const Signature* sig = nullptr) {
  GenWitness cur = w;
  int limit = static_cast<int>(free_vars(w.g).size()) * 2 + 1;
  int rewrites = 0;
  for (int i = 0; i <= limit; ++i) {
    TightOutcome to = is_tight(cur, p, frag, fuel);
    if (to.kind == TightOutcome::Kind::Tight)
      return {cur, TightOutcome::Kind::Tight, rewrites};
    if (to.kind == TightOutcome::Kind::Unknown)
      return {cur, TightOutcome::Kind::Unknown, rewrites};
    GenWitness next;
    next.g = apply_subst(cur.g, to.witness);
    next.sigma1 = to.sigma1;
    next.sigma2 = to.sigma2;
    next.grounded = next.sigma1.is_ground() && next.sigma2.is_ground();
    if (sig && !next.grounded) next = ground_witnesses(next, p, *sig);
    if (!check_generalization(next, p))
      throw InternalError("tightening produced an invalid witness");
    cur = next;
    ++rewrites;
  }
  throw InternalError("tightening exceeded its rewrite bound");
}

// ---------------------------------------------------------------------------
// Maximal positions, lifting, core
// ---------------------------------------------------------------------------

namespace detail {

// Representative: the eta-normal head is a constant or an abstraction.
inline bool representative(const TermPtr& u) {
  TermPtr r = eta_reduce(u);
  return r->is_abs || r->head.kind == HeadKind::Const;
}

struct BinderSpine {
  std::vector<std::pair<std::string, TypePtr>> binders;
  Head head;
  std::vector<TermPtr> args;
};

inline BinderSpine split_binder_spine(const TermPtr& t) {
  BinderSpine out;
  TermPtr c = t;
  while (c->is_abs) {
    out.binders.emplace_back(c->binder, c->binder_type);
    c = c->body;
  }
  out.head = c->head;
  out.args = c->args;
  return out;
}

}  // namespace detail

// For t = \w1..wm. f'(r1..rk) with f' a constant: the outermost positions
// inside each argument whose eta-normal head is a constant or abstraction,
// reported as positions of t itself.
inline std::set<Position> maximal_positions(const TermPtr& t,
                                            const Signature& /*sig*/) {
  auto bs = detail::split_binder_spine(t);
  if (bs.head.kind != HeadKind::Const)
    throw ShapeError("maximal positions require a constant-headed spine");
  std::set<Position> out;
  std::function<void(const TermPtr&, const Position&)> walk =
      [&](const TermPtr& u, const Position& here) {
        if (detail::representative(u)) {
          out.insert(here);
          return;  // nothing below an outermost representative is maximal
        }
        if (u->is_abs) {
          walk(u->body, here.then(1));
          return;
        }
        for (std::size_t i = 0; i < u->args.size(); ++i)
          walk(u->args[i], here.then(static_cast<int>(i) + 1));
      };
  Position prefix;
  for (std::size_t i = 0; i < bs.binders.size(); ++i) prefix = prefix.then(1);
  for (std::size_t i = 0; i < bs.args.size(); ++i)
    walk(bs.args[i], prefix.then(static_cast<int>(i) + 1));
  return out;
}

struct LiftedVar {
  std::string name;
  TypePtr type;
  Position at;
  TermPtr replaced;  // the subterm the fresh variable stands for
};

struct LiftResult {
  TermPtr term;
  std::vector<LiftedVar> introduced;
};

// Replaces every maximal position q by H(w1..wm) for a fresh free variable
// H of type g1->..->gm -> (type of the subterm at q); fresh variables are
// numbered H1, H2, ... in position order.
inline LiftResult lift(const TermPtr& t, const Signature& sig) {
  auto bs = detail::split_binder_spine(t);
  if (bs.head.kind != HeadKind::Const)
    throw ShapeError("lift requires a term of shape \\w... f'(r...)");
  auto maxpos = maximal_positions(t, sig);
  LiftResult out;
  out.term = t;
  std::set<std::string> avoid = all_names(t);
  int k = 0;
  for (const auto& q : maxpos) {
    ++k;
    TermPtr replaced = subterm_at(t, q);
    TypePtr hty = replaced->type;
    for (auto it = bs.binders.rbegin(); it != bs.binders.rend(); ++it)
      hty = arrow(it->second, hty);
    std::string name = fresh_name("H" + std::to_string(k), avoid);
    avoid.insert(name);
    std::vector<TermPtr> hargs;
    for (const auto& [bn, bt] : bs.binders)
      hargs.push_back(eta_expand_head(Head{HeadKind::Bound, bn, bt}));
    TermPtr repl = mk_spine(Head{HeadKind::Free, name, hty}, std::move(hargs));
    out.term = replace_at(out.term, q, repl);
    out.introduced.push_back(LiftedVar{name, hty, q, replaced});
  }
  return out;
}

// The lifted argument of the two-binder pseudo-pattern shape: the subterm
// of lift(g', sig) at position 1.1.1.
inline TermPtr core(const TermPtr& g_pseudo, const Signature& sig) {
  if (!g_pseudo->is_abs || !g_pseudo->body->is_abs)
    throw ShapeError("core expects a term with two leading binders");
  const TermPtr& spine = g_pseudo->body->body;
  if (spine->is_abs || spine->head.kind != HeadKind::Const ||
      spine->args.size() != 1)
    throw ShapeError("core expects a unary constant spine under the binders");
  Position p;
  p.ix = {1, 1, 1};
  return subterm_at(lift(g_pseudo, sig).term, p);
}

// ---------------------------------------------------------------------------
// Pseudo-patterns
// ---------------------------------------------------------------------------

namespace detail {

struct PseudoShape {
  std::string binder1, binder2;
  TypePtr bty1, bty2;
  Head fhead;
  TermPtr arg;  // the argument of the constant head
};

inline PseudoShape split_pseudo(const TermPtr& g) {
  if (!g->is_abs || !g->body->is_abs)
    throw ShapeError("expected a term of shape \\x.\\y. f(r)");
  const TermPtr& spine = g->body->body;
  if (spine->is_abs || spine->head.kind != HeadKind::Const ||
      spine->args.size() != 1)
    throw ShapeError("expected a term of shape \\x.\\y. f(r)");
  return PseudoShape{g->binder,      g->body->binder, g->binder_type,
                     g->body->binder_type, spine->head,     spine->args[0]};
}

// The argument of the constant head once the top variable is resolved one
// side at a time, with the result's binders renamed to match `sh`.
inline TermPtr resolved_side(const TermPtr& g, const PseudoShape& sh,
                             const std::string& var, const TermPtr& range) {
  Substitution s;
  s.bind(var, range);
  TermPtr inst = apply_subst(g, s);
  PseudoShape si = split_pseudo(inst);
  std::map<std::string, std::string> ren;
  if (si.binder1 != sh.binder1) ren[si.binder1] = sh.binder1;
  if (si.binder2 != sh.binder2) ren[si.binder2] = sh.binder2;
  return ren.empty() ? si.arg : rename_bound(si.arg, ren);
}

}  // namespace detail

// The pseudo-pattern over all lambda terms: \x.\y. f(Y(v1, v2)) where vi is
// the argument of f in g with the head variable resolved by the i-th
// witness range, and Y is fresh with the left/right projections recovering
// the two sides.
inline GenWitness pseudo_pattern_lambda(const GenWitness& w, const AUProblem& p) {
  auto shape = check_head_shape(w.g);
  if (!shape)
    throw ShapeError(
        "pseudo-pattern input must have a free-variable head under the "
        "constant");
  auto sh = detail::split_pseudo(w.g);
  const std::string& z = shape->var;
  if (!w.sigma1.binds(z) || !w.sigma2.binds(z))
    throw ShapeError("witness pair does not bind " + z);
  TermPtr v1 = detail::resolved_side(w.g, sh, z, w.sigma1.at(z));
  TermPtr v2 = detail::resolved_side(w.g, sh, z, w.sigma2.at(z));
  if (!v1->type->is_base() || !type_eq(v1->type, v2->type))
    throw ShapeError("pseudo-pattern arguments must share a base type");

  std::set<std::string> avoid = all_names(w.g);
  for (const auto& t : {v1, v2}) {
    auto names = all_names(t);
    avoid.insert(names.begin(), names.end());
  }
  TypePtr alpha = v1->type;
  TypePtr yty = arrow(alpha, arrow(alpha, alpha));
  std::string y = fresh_name("Y", avoid);
  avoid.insert(y);

  TermPtr body = mk_spine(sh.fhead, {mk_spine(Head{HeadKind::Free, y, yty},
                                              {v1, v2})});
  TermPtr g = mk_abs(sh.binder1, sh.bty1,
                     mk_abs(sh.binder2, sh.bty2, body));
  // Wrapping in the original binders must be legal; f is unary over alpha in
  // the pseudo-pattern setting, which mk_spine has already checked.

  GenWitness out;
  out.g = g;
  out.sigma1 = w.sigma1.without(z).merged_with(projection_subst(y, yty, 1, avoid));
  out.sigma2 = w.sigma2.without(z).merged_with(projection_subst(y, yty, 2, avoid));
  out.grounded = out.sigma1.is_ground() && out.sigma2.is_ground();
  if (!check_generalization(out, p))
    throw InternalError("pseudo-pattern failed verification");
  return out;
}

// The superpattern variant: lift the plain pseudo-pattern and substitute
// its core into \x.\y. f(R(x,y)); the witnesses additionally send each
// fresh lifting variable to the (instantiated) subterm it replaced.
inline GenWitness pseudo_pattern_sp(const GenWitness& w, const AUProblem& p,
                                    const Signature& sig) {
  GenWitness pp = pseudo_pattern_lambda(w, p);
  auto sh = detail::split_pseudo(pp.g);
  LiftResult lifted = lift(pp.g, sig);

  std::set<std::string> avoid = all_names(lifted.term);
  std::string r = fresh_name("R", avoid);
  avoid.insert(r);
  TypePtr rty = arrow(sh.bty1, arrow(sh.bty2, target_type(pp.g->type)));
  TermPtr template_term = mk_abs(
      sh.binder1, sh.bty1,
      mk_abs(sh.binder2, sh.bty2,
             mk_spine(sh.fhead,
                      {mk_spine(Head{HeadKind::Free, r, rty},
                                {eta_expand_head(Head{HeadKind::Bound, sh.binder1,
                                                      sh.bty1}),
                                 eta_expand_head(Head{HeadKind::Bound, sh.binder2,
                                                      sh.bty2})})})));
  Position core_pos;
  core_pos.ix = {1, 1, 1};
  TermPtr core_term = subterm_at(lifted.term, core_pos);
  // \x.\y. core: the binders intentionally capture x and y of the core.
  TermPtr r_range =
      mk_abs(sh.binder1, sh.bty1, mk_abs(sh.binder2, sh.bty2, core_term));
  Substitution r_subst;
  r_subst.bind(r, r_range);
  TermPtr g_star = apply_subst(template_term, r_subst);
  if (!alpha_eq(g_star, lifted.term))
    throw InternalError("superpattern pseudo-pattern disagrees with lifting");

  GenWitness out;
  out.g = g_star;
  out.sigma1 = pp.sigma1;
  out.sigma2 = pp.sigma2;
  for (const auto& lv : lifted.introduced) {
    TermPtr inst1 = apply_subst(lv.replaced, pp.sigma1);
    TermPtr inst2 = apply_subst(lv.replaced, pp.sigma2);
    out.sigma1.bind(lv.name, mk_abs(sh.binder1, sh.bty1,
                                    mk_abs(sh.binder2, sh.bty2, inst1)));
    out.sigma2.bind(lv.name, mk_abs(sh.binder1, sh.bty1,
                                    mk_abs(sh.binder2, sh.bty2, inst2)));
  }
  out.grounded = out.sigma1.is_ground() && out.sigma2.is_ground();
  if (!check_generalization(out, p))
    throw InternalError("superpattern pseudo-pattern failed verification");
  if (!is_superpattern(out.g).is_member)
    throw InternalError("superpattern pseudo-pattern is not a superpattern");
  return out;
}

// ---------------------------------------------------------------------------
// The strictly descending chain
// ---------------------------------------------------------------------------

// Y -> \w1.\w2. Y(Y(w1,w2), Y(w1,w2)) at the given variable type.
inline Substitution chain_mu(const std::string& y, const TypePtr& yty,
                             const std::set<std::string>& avoid) {
  auto params = param_types(yty);
  if (params.size() != 2)
    throw ShapeError("chain substitution needs a binary variable");
  std::set<std::string> used = avoid;
  std::string w1 = fresh_name("w1", used);
  used.insert(w1);
  std::string w2 = fresh_name("w2", used);
  used.insert(w2);
  using detail::pre_app;
  using detail::pre_leaf;
  using detail::pre_lam;
  auto yleaf = pre_leaf(Head{HeadKind::Free, y, yty});
  auto wa = pre_leaf(Head{HeadKind::Bound, w1, params[0]});
  auto wb = pre_leaf(Head{HeadKind::Bound, w2, params[1]});
  auto inner = pre_app(pre_app(yleaf, wa), wb);
  auto body = pre_app(pre_app(yleaf, inner), inner);
  auto lam = pre_lam(w1, params[0], pre_lam(w2, params[1], body));
  Substitution mu;
  mu.bind(y, detail::normalize_pre(lam, yty, used));
  return mu;
}

namespace detail {

inline void require_projection_witnesses(const GenWitness& w,
                                         const std::string& y,
                                         const TypePtr& yty) {
  if (!w.sigma1.binds(y) || !w.sigma2.binds(y))
    throw ShapeError("chain step requires witnesses binding " + y);
  TermPtr p1 = projection_subst(y, yty, 1).at(y);
  TermPtr p2 = projection_subst(y, yty, 2).at(y);
  if (!alpha_eq(w.sigma1.at(y), p1) || !alpha_eq(w.sigma2.at(y), p2))
    throw ShapeError("chain step requires projection witnesses for " + y);
}

inline std::pair<std::string, TypePtr> chain_head_var(const TermPtr& g) {
  auto shape = check_head_shape(g);
  if (!shape) throw ShapeError("not a chain element: no flexible head");
  auto sh = split_pseudo(g);
  if (sh.arg->is_abs || sh.arg->args.size() != 2)
    throw ShapeError("not a chain element: head variable is not binary");
  return {shape->var, sh.arg->head.type};
}

}  // namespace detail

// One step of the descending chain: applies the duplicating substitution
// and keeps the same projection witnesses.
inline GenWitness chain_step(const GenWitness& w, const AUProblem& p) {
  auto [y, yty] = detail::chain_head_var(w.g);
  detail::require_projection_witnesses(w, y, yty);
  Substitution mu = chain_mu(y, yty, all_names(w.g));
  GenWitness out;
  out.g = apply_subst(w.g, mu);
  out.sigma1 = w.sigma1;
  out.sigma2 = w.sigma2;
  out.grounded = w.grounded;
  if (!check_generalization(out, p))
    throw InternalError("chain step failed verification");
  return out;
}

// ---------------------------------------------------------------------------
// Refutation of the reverse direction
// ---------------------------------------------------------------------------

enum class RefutationCase { Projection, ConstantHead, FreeHeadOccurrence };

inline std::string show(RefutationCase c) {
  switch (c) {
    case RefutationCase::Projection: return "ProjectionCase";
    case RefutationCase::ConstantHead: return "ConstantHeadCase";
    case RefutationCase::FreeHeadOccurrence: return "FreeHeadOccurrenceCase";
  }
  return "?";
}

struct RefutationEvidence {
  // All three binding classes are excluded; the decisive tag names the
  // occurrence-count argument that closes the free-headed class.
  RefutationCase case_tag = RefutationCase::FreeHeadOccurrence;
  TermPtr proj_left, proj_right;  // projection instances, both differ
  Position clash_at;              // where a constant head would clash
  std::string prev_head;          // the free head found there instead
  int occ_next = 0, occ_prev = 0; // occurrence counts with occ_next > occ_prev
};

// Certifies that no substitution maps g_next back onto g_prev, by the
// three-way case analysis on the possible bindings of g_next's head
// variable.  Only sound for consecutive chain elements; the precondition
// g_prev mu = g_next is re-checked.
inline RefutationEvidence refute_chain_step(const TermPtr& g_next,
                                            const TermPtr& g_prev) {
  auto [y_next, yty_next] = detail::chain_head_var(g_next);
  auto [y_prev, yty_prev] = detail::chain_head_var(g_prev);
  Substitution mu = chain_mu(y_prev, yty_prev, all_names(g_prev));
  if (!alpha_eq(apply_subst(g_prev, mu), g_next))
    throw ShapeError("refutation requires consecutive chain elements");

  RefutationEvidence ev;
  // Case 1: both projections of the head variable miss g_prev.
  ev.proj_left = apply_subst(g_next, projection_subst(y_next, yty_next, 1));
  ev.proj_right = apply_subst(g_next, projection_subst(y_next, yty_next, 2));
  if (alpha_eq(ev.proj_left, g_prev) || alpha_eq(ev.proj_right, g_prev))
    throw ShapeError("projection instance equals the previous element");

  // Case 2: a constant-headed binding forces a constant head where g_prev
  // has its free head variable.
  Position arg_pos;
  arg_pos.ix = {1, 1, 1};
  ev.clash_at = arg_pos;
  ev.prev_head = y_prev;

  // Case 3: a free-headed binding cannot shrink the occurrence count below
  // the head variable's count in g_next, which exceeds every free
  // variable's count in g_prev.
  ev.occ_next = occ(Head{HeadKind::Free, y_next, yty_next}, g_next);
  ev.occ_prev = 0;
  for (const auto& [name, ty] : free_vars(g_prev))
    ev.occ_prev = std::max(ev.occ_prev, occ(Head{HeadKind::Free, name, ty}, g_prev));
  if (ev.occ_next <= ev.occ_prev)
    throw ShapeError("occurrence counts do not refute the reverse direction");
  ev.case_tag = RefutationCase::FreeHeadOccurrence;
  return ev;
}

// ---------------------------------------------------------------------------
// Chain generation
// ---------------------------------------------------------------------------

struct ChainStep {
  Substitution forward;  // maps element i onto element i+1
  RefutationEvidence refutation;
};

struct ChainCertificate {
  AUProblem problem;
  Fragment fragment;
  std::vector<GenWitness> elements;
  std::vector<ChainStep> steps;
};

// ground -> (must be pattern-derived) -> tighten -> pseudo-pattern ->
// iterate the duplicating step n times, verifying every element and
// refuting every reverse direction.
inline ChainCertificate generate_chain(const AUProblem& p, const GenWitness& start,
                                       Fragment frag, int n, const Signature& sig,
                                       int fuel = 8) {
  GenWitness w = ground_witnesses(start, p, sig);
  if (!check_generalization(w, p))
    throw Error("chain start does not generalize the problem");
  if (!is_pattern_derived(w.g, p))
    throw Error("chain start is not pattern-derived");
  TightenOutcome tight = tighten(w, p, frag, fuel, &sig);
  if (tight.status != TightOutcome::Kind::Tight)
    throw Error("tightening ran out of fuel before reaching a tight witness");
  GenWitness pivot = frag == Fragment::Lambda
                         ? pseudo_pattern_lambda(tight.witness, p)
                         : pseudo_pattern_sp(tight.witness, p, sig);

  ChainCertificate cert{p, frag, {}, {}};
  cert.elements.push_back(pivot);
  for (int i = 0; i < n; ++i) {
    const GenWitness& prev = cert.elements.back();
    auto [y, yty] = detail::chain_head_var(prev.g);
    Substitution mu = chain_mu(y, yty, all_names(prev.g));
    GenWitness next = chain_step(prev, p);
    RefutationEvidence ev = refute_chain_step(next.g, prev.g);
    cert.steps.push_back(ChainStep{mu, ev});
    cert.elements.push_back(std::move(next));
  }
  for (const auto& e : cert.elements) {
    if (!check_generalization(e, p))
      throw InternalError("chain element failed verification");
    if (frag == Fragment::Sp && !is_superpattern(e.g).is_member)
      throw InternalError("chain element is not a superpattern");
  }
  return cert;
}

}  // namespace stlc
