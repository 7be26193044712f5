#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "stlc/au.hpp"
#include "stlc/parse.hpp"
#include "stlc/random_terms.hpp"
#include "stlc/superpattern.hpp"

using namespace stlc;

namespace {

Signature default_sig() { return default_signature(); }
TermPtr T(const std::string& text) { return parse_term(text, default_sig()); }

Substitution subst1(const std::string& var, const std::string& range,
                    const Signature& sig) {
  Substitution s;
  s.bind(var, parse_term(range, sig));
  return s;
}

AUProblem running_problem() {
  return AUProblem(T("\\x:a.\\y:a. f(x)"), T("\\x:a.\\y:a. f(y)"));
}

GenWitness projection_witness(const TermPtr& g) {
  GenWitness w;
  w.g = g;
  w.sigma1 = subst1("Z", "\\u:a.\\v:a. u", default_sig());
  w.sigma2 = subst1("Z", "\\u:a.\\v:a. v", default_sig());
  w.grounded = true;
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// check_generalization
// ---------------------------------------------------------------------------

TEST(CheckGeneralization, ProjectionPairForThePatternLgg) {
  AUProblem p = running_problem();
  GenWitness w = projection_witness(T("\\x:a.\\y:a. f(Z(x,y))"));
  EXPECT_TRUE(check_generalization(w, p));
}

TEST(CheckGeneralization, IdenticalProblemWithEmptySubstitutions) {
  TermPtr s = T("\\x:a.\\y:a. f(x)");
  AUProblem p(s, s);
  GenWitness w{s, {}, {}, true};
  EXPECT_TRUE(check_generalization(w, p));
}

TEST(CheckGeneralization, NestedVariableGeneralization) {
  AUProblem p = running_problem();
  GenWitness w;
  w.g = T("\\x:a.\\y:a. f(W(W(x,y),W(x,y)))");
  w.sigma1 = subst1("W", "\\u:a.\\v:a. u", default_sig());
  w.sigma2 = subst1("W", "\\u:a.\\v:a. v", default_sig());
  EXPECT_TRUE(check_generalization(w, p));
}

TEST(CheckGeneralization, RejectsWrongType) {
  AUProblem p = running_problem();
  GenWitness w{T("a"), {}, {}, true};
  EXPECT_THROW(check_generalization(w, p), TypeCheckError);
}

// ---------------------------------------------------------------------------
// pattern_lgg
// ---------------------------------------------------------------------------

TEST(PatternLgg, RunningProblem) {
  AUProblem p = running_problem();
  GenWitness w = pattern_lgg(p);
  EXPECT_TRUE(alpha_eq(w.g, T("\\x:a.\\y:a. f(Z(x,y))")));
  EXPECT_EQ(show(w.g), "\\x:a.\\y:a. f(Z(x,y))");
  EXPECT_TRUE(alpha_eq(w.sigma1.at("Z"), T("\\x:a.\\y:a. x")));
  EXPECT_TRUE(alpha_eq(w.sigma2.at("Z"), T("\\x:a.\\y:a. y")));
  EXPECT_TRUE(w.grounded);
  EXPECT_TRUE(check_generalization(w, p));
}

TEST(PatternLgg, IdenticalTermsGiveTheTermItself) {
  TermPtr u = T("\\x:a.\\y:a. f(Z(x,y))");
  // Closed inputs are required; use a closed term.
  TermPtr c = T("\\x:a.\\y:a. f(x)");
  AUProblem p(c, c);
  GenWitness w = pattern_lgg(p);
  EXPECT_TRUE(alpha_eq(w.g, c));
  EXPECT_TRUE(w.sigma1.empty());
  EXPECT_TRUE(w.sigma2.empty());
  (void)u;
}

TEST(PatternLgg, TopMaximalChoice) {
  Signature sig;
  sig.declare("f", parse_type("a->a"));
  sig.declare("f'", parse_type("a->a"));
  sig.declare("h", parse_type("a->a"));
  AUProblem p(parse_term("\\x:a. f(f'(x))", sig),
              parse_term("\\x:a. f(h(x))", sig));
  GenWitness w = pattern_lgg(p);
  EXPECT_TRUE(alpha_eq(w.g, parse_term("\\x:a. f(Z(x))", sig)));
  EXPECT_TRUE(alpha_eq(w.sigma1.at("Z"), parse_term("\\x:a. f'(x)", sig)));
  EXPECT_TRUE(alpha_eq(w.sigma2.at("Z"), parse_term("\\x:a. h(x)", sig)));
}

TEST(PatternLgg, MergesDuplicatePairsUpToPermutation) {
  Signature sig = test_signature();
  AUProblem p(parse_term("\\x:a.\\y:a. g(x,y)", sig),
              parse_term("\\x:a.\\y:a. g(y,x)", sig));
  GenWitness w = pattern_lgg(p);
  EXPECT_TRUE(alpha_eq(w.g, parse_term("\\x:a.\\y:a. g(Z(x,y),Z(y,x))", sig)));
  EXPECT_TRUE(check_generalization(w, p));
}

TEST(PatternLgg, SoundAndPatternOnRandomPairs) {
  Signature sig = test_signature();
  TermGen gen(101, sig);
  for (int i = 0; i < 100; ++i) {
    TypePtr ty = gen.random_type(2);
    AUProblem p(gen.closed(ty, 3), gen.closed(ty, 3));
    GenWitness w = pattern_lgg(p);
    EXPECT_TRUE(check_generalization(w, p));
    EXPECT_TRUE(is_pattern(w.g));
    EXPECT_TRUE(is_superpattern(w.g).is_member);
    EXPECT_TRUE(w.grounded);
  }
}

// ---------------------------------------------------------------------------
// pattern_match
// ---------------------------------------------------------------------------

TEST(PatternMatch, LggIntoNestedGeneralization) {
  TermPtr pat = T("\\x:a.\\y:a. f(Z(x,y))");
  TermPtr target = T("\\x:a.\\y:a. f(W(W(x,y),W(x,y)))");
  MatchOutcome m = pattern_match(pat, target);
  ASSERT_TRUE(m.is_proven());
  EXPECT_TRUE(alpha_eq(m.subst.at("Z"), T("\\u:a.\\v:a. W(W(u,v),W(u,v))")));
}

TEST(PatternMatch, IdenticalTermsNeedNothing) {
  TermPtr t = T("\\x:a.\\y:a. f(x)");
  MatchOutcome m = pattern_match(t, t);
  ASSERT_TRUE(m.is_proven());
  EXPECT_TRUE(m.subst.empty());
}

TEST(PatternMatch, RigidHeadClashRefutes) {
  Signature sig;
  sig.declare("f", parse_type("a->a"));
  sig.declare("g'", parse_type("a->a"));
  TermPtr pat = parse_term("\\x:a.\\y:a. f(Z(x,y))", sig);
  TermPtr target = parse_term("\\x:a.\\y:a. g'(Z(x,y))", sig);
  EXPECT_TRUE(pattern_match(pat, target).is_refuted());
}

TEST(PatternMatch, ScopeEscapeRefutes) {
  TermPtr pat = T("\\x:a.\\y:a. f(Z(x))");
  TermPtr target = T("\\x:a.\\y:a. f(y)");
  EXPECT_TRUE(pattern_match(pat, target).is_refuted());
}

TEST(PatternMatch, ConflictingOccurrencesRefute) {
  Signature sig = test_signature();
  TermPtr pat = parse_term("\\x:a.\\y:a. g(Z(x,y),Z(x,y))", sig);
  TermPtr target = parse_term("\\x:a.\\y:a. g(x,y)", sig);
  EXPECT_TRUE(pattern_match(pat, target).is_refuted());
}

TEST(PatternMatch, NonPatternQueryRejected) {
  TermPtr pat = T("\\x:a.\\y:a. f(Z(Z(x,y),y))");
  EXPECT_THROW(pattern_match(pat, pat), ShapeError);
}

// ---------------------------------------------------------------------------
// match_bounded
// ---------------------------------------------------------------------------

TEST(MatchBounded, ForwardDuplicationProvenAtFuelSix) {
  TermPtr query = T("\\x:a.\\y:a. f(R(x,y))");
  TermPtr target = T("\\x:a.\\y:a. f(R(R(x,y),R(x,y)))");
  MatchOutcome m = match_bounded(query, target, 6);
  ASSERT_TRUE(m.is_proven());
  EXPECT_TRUE(alpha_eq(m.subst.at("R"), T("\\u:a.\\v:a. R(R(u,v),R(u,v))")));
  EXPECT_TRUE(alpha_eq(apply_subst(query, m.subst), target));
}

TEST(MatchBounded, IdenticalTermsAtAnyFuel) {
  TermPtr t = T("\\x:a.\\y:a. f(R(R(x,y),R(x,y)))");
  for (int fuel : {0, 1, 8}) {
    MatchOutcome m = match_bounded(t, t, fuel);
    ASSERT_TRUE(m.is_proven());
    EXPECT_TRUE(m.subst.empty());
  }
}

TEST(MatchBounded, ReverseDuplicationNeverProven) {
  TermPtr query = T("\\x:a.\\y:a. f(R(R(x,y),R(x,y)))");
  TermPtr target = T("\\x:a.\\y:a. f(R(x,y))");
  for (int fuel : {2, 4, 10}) {
    MatchOutcome m = match_bounded(query, target, fuel);
    EXPECT_FALSE(m.is_proven());
  }
  // The search space here is finite; the reverse direction is refuted.
  EXPECT_TRUE(match_bounded(query, target, 10).is_refuted());
}

TEST(MatchBounded, FuelMonotoneWithStableSubstitution) {
  TermPtr query = T("\\x:a.\\y:a. f(R(x,y))");
  TermPtr target = T("\\x:a.\\y:a. f(R(R(x,y),R(x,y)))");
  MatchOutcome base = match_bounded(query, target, 3);
  ASSERT_TRUE(base.is_proven());
  for (int fuel = 4; fuel <= 8; ++fuel) {
    MatchOutcome m = match_bounded(query, target, fuel);
    ASSERT_TRUE(m.is_proven());
    EXPECT_TRUE(alpha_eq(m.subst.at("R"), base.subst.at("R")));
  }
}

TEST(MatchBounded, ImitationThroughConstants) {
  TermPtr query = T("\\x:a. Z(x)");
  TermPtr target = T("\\x:a. f(f(x))");
  MatchOutcome m = match_bounded(query, target, 6);
  ASSERT_TRUE(m.is_proven());
  EXPECT_TRUE(alpha_eq(m.subst.at("Z"), T("\\u:a. f(f(u))")));
}

TEST(LessGeneral, DelegatesToThePatternMatcher) {
  TermPtr pat = T("\\x:a.\\y:a. f(Z(x,y))");
  TermPtr target = T("\\x:a.\\y:a. f(W(W(x,y),W(x,y)))");
  EXPECT_TRUE(less_general(pat, target, 0).is_proven());  // no fuel needed
  EXPECT_FALSE(less_general(target, pat, 8).is_proven());
}

// ---------------------------------------------------------------------------
// ground_witnesses
// ---------------------------------------------------------------------------

TEST(GroundWitnesses, ReplacesRangeVariablesByCanonicalConstants) {
  AUProblem p = running_problem();
  GenWitness w = projection_witness(T("\\x:a.\\y:a. f(Z(x,y))"));
  // An extra binding for a variable that does not occur in g; its range
  // mentions free variables of both orders.
  Substitution extra = w.sigma1;
  extra.bind("Q", parse_term("\\u:a. W(X)", default_sig()));
  w.sigma1 = extra;
  w.grounded = false;
  GenWitness g = ground_witnesses(w, p, default_sig());
  EXPECT_TRUE(g.grounded);
  EXPECT_TRUE(g.sigma1.is_ground());
  EXPECT_TRUE(alpha_eq(g.sigma1.at("Q"),
                       parse_term("\\u:a. c_(a->a)(c_a)", default_sig())));
  EXPECT_TRUE(check_generalization(g, p));
}

TEST(GroundWitnesses, AlreadyGroundUnchanged) {
  AUProblem p = running_problem();
  GenWitness w = projection_witness(T("\\x:a.\\y:a. f(Z(x,y))"));
  GenWitness g = ground_witnesses(w, p, default_sig());
  EXPECT_TRUE(alpha_eq(g.sigma1.at("Z"), w.sigma1.at("Z")));
  EXPECT_TRUE(alpha_eq(g.sigma2.at("Z"), w.sigma2.at("Z")));
}

// ---------------------------------------------------------------------------
// enumerate_generalizations
// ---------------------------------------------------------------------------

TEST(Enumerate, TrivialProblemAtSizeOne) {
  Signature sig = default_sig();
  AUProblem p(parse_term("a", sig), parse_term("a", sig));
  auto out = enumerate_generalizations(p, 1, 1, sig);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(show(out[0].g), "X1");
  EXPECT_EQ(show(out[1].g), "a");
}

TEST(Enumerate, SizeZeroIsEmpty) {
  Signature sig = default_sig();
  AUProblem p(parse_term("a", sig), parse_term("a", sig));
  EXPECT_TRUE(enumerate_generalizations(p, 0, 1, sig).empty());
}

TEST(Enumerate, RunningProblemUniverse) {
  Signature sig = default_sig();
  AUProblem p = running_problem();
  auto out = enumerate_generalizations(p, 6, 2, sig);
  ASSERT_FALSE(out.empty());
  bool has_lgg = false, has_left_side = false, has_bare_var = false;
  for (const auto& w : out) {
    EXPECT_TRUE(check_generalization(w, p));
    if (eq_up_to_renaming(w.g, T("\\x:a.\\y:a. f(Z(x,y))"))) has_lgg = true;
    if (alpha_eq(w.g, p.left)) has_left_side = true;
    if (eq_up_to_renaming(w.g, T("\\x:a.\\y:a. Z"))) has_bare_var = true;
  }
  EXPECT_TRUE(has_lgg);
  EXPECT_FALSE(has_left_side);
  // A zero-argument variable cannot reach f(x) with capture-avoiding
  // substitutions, so it is not a generalization at all.
  EXPECT_FALSE(has_bare_var);
  EXPECT_TRUE(match_bounded(T("\\x:a.\\y:a. Z"), p.left, 8).is_refuted());
}

TEST(Enumerate, LggIsLeastAmongEnumeratedPatterns) {
  Signature sig = default_sig();
  AUProblem p = running_problem();
  GenWitness lgg = pattern_lgg(p);
  auto out = enumerate_generalizations(p, 6, 2, sig);
  for (const auto& w : out) {
    if (!is_pattern(w.g)) continue;
    EXPECT_TRUE(pattern_match(w.g, lgg.g).is_proven()) << show(w.g);
  }
}
