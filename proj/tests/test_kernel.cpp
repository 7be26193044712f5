#include <gtest/gtest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stlc/au.hpp"
#include "stlc/normalize.hpp"
#include "stlc/parse.hpp"
#include "stlc/random_terms.hpp"
#include "stlc/signature.hpp"
#include "stlc/subst.hpp"
#include "stlc/term.hpp"

using namespace stlc;

namespace {

Signature default_sig() { return default_signature(); }

TermPtr T(const std::string& text) { return parse_term(text, default_sig()); }

TermPtr T(const std::string& text, const Signature& sig) {
  return parse_term(text, sig);
}

Substitution subst1(const std::string& var, const std::string& range_text,
                    const Signature& sig) {
  Substitution s;
  s.bind(var, parse_term(range_text, sig));
  return s;
}

// ---------------------------------------------------------------------------
// Test-local oracles, independent of the kernel implementation paths they
// check.
// ---------------------------------------------------------------------------

// Canonical-renaming oracle for alpha equality: rename binders to
// #0, #1, ... in traversal order and print the result literally.
std::string canonical_print(const TermPtr& t,
                            std::vector<std::pair<std::string, std::string>>& env,
                            int& counter) {
  if (t->is_abs) {
    std::string fresh = "#" + std::to_string(counter++);
    env.emplace_back(t->binder, fresh);
    std::string body = canonical_print(t->body, env, counter);
    env.pop_back();
    return "L[" + fresh + ":" + show(t->binder_type) + "]" + body;
  }
  std::string name = t->head.name;
  if (t->head.kind == HeadKind::Bound) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == name) {
        name = it->second;
        break;
      }
  }
  std::string out = name + "[" + show(t->head.type) + "]";
  out += "(";
  for (const auto& a : t->args) out += canonical_print(a, env, counter) + ",";
  return out + ")";
}

std::string canonical_print(const TermPtr& t) {
  std::vector<std::pair<std::string, std::string>> env;
  int counter = 0;
  return canonical_print(t, env, counter);
}

bool oracle_alpha_eq(const TermPtr& a, const TermPtr& b) {
  return canonical_print(a) == canonical_print(b);
}

// Independent recursive enumeration of the position set.
void oracle_positions(const TermPtr& t, std::vector<int> here,
                      std::set<std::vector<int>>& out) {
  out.insert(here);
  if (t->is_abs) {
    here.push_back(1);
    oracle_positions(t->body, here, out);
    return;
  }
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    auto p = here;
    p.push_back(static_cast<int>(i) + 1);
    oracle_positions(t->args[i], p, out);
  }
}

std::set<std::vector<int>> oracle_positions(const TermPtr& t) {
  std::set<std::vector<int>> out;
  oracle_positions(t, {}, out);
  return out;
}

Position pos(std::vector<int> ix) {
  Position p;
  p.ix = std::move(ix);
  return p;
}

// The worked example term r = \x.\y. f(Z(\w.x, x, \w1.\w2.y, f)).
TermPtr example_r() {
  return T("\\x:a.\\y:a. f(Z(\\w:a->a. x, x, \\w1:a->a.\\w2:a->a. y, f))");
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------------

TEST(Parse, RunningProblemLeftSide) {
  TermPtr s = T("\\x:a.\\y:a. f(x)");
  EXPECT_EQ(show(s), "\\x:a.\\y:a. f(x)");
  EXPECT_EQ(show(s->type), "a->a->a");
}

TEST(Parse, IdentityAtBaseType) {
  TermPtr id = T("\\x:a. x");
  EXPECT_EQ(show(id->type), "a->a");
  EXPECT_EQ(show(id), "\\x:a. x");
}

TEST(Parse, EtaExpandsUnderappliedHeads) {
  // Hand-expansion oracle: every underapplied head is expanded by fresh
  // binders; \x:a. f must equal \x:a.\z:a. f(z) up to alpha.
  TermPtr t = T("\\x:a. f");
  TermPtr expanded = T("\\x:a.\\z:a. f(z)");
  EXPECT_TRUE(alpha_eq(t, expanded));
  EXPECT_TRUE(oracle_alpha_eq(t, expanded));
}

TEST(Parse, LambdaSynonymAndJuxtaposition) {
  EXPECT_TRUE(alpha_eq(T("λx:a. x"), T("\\x:a. x")));
  EXPECT_TRUE(alpha_eq(T("(\\x:a. x) a"), T("a")));
}

TEST(Parse, ErrorsArePosition0Reported) {
  EXPECT_THROW(T("\\x:a."), ParseError);
  EXPECT_THROW(T("f(x"), ParseError);
  EXPECT_THROW(T("q"), TypeCheckError);          // unknown lowercase identifier
  EXPECT_THROW(T("f(f)"), TypeCheckError);       // ill-typed argument
  EXPECT_THROW(T("a(a)"), TypeCheckError);       // arity overflow
  EXPECT_THROW(T("\\F:a. F"), TypeCheckError);   // uppercase binder
  EXPECT_THROW(T("\\f:a. f"), TypeCheckError);   // binder shadows a constant
}

TEST(Parse, FreeVariablesAreUppercase) {
  TermPtr t = T("\\x:a.\\y:a. f(Z(x,y))");
  auto fv = free_vars(t);
  ASSERT_EQ(fv.size(), 1u);
  EXPECT_EQ(show(fv.at("Z")), "a->a->a");
}

TEST(Parse, PrintRoundTripOnExamples) {
  for (const char* text :
       {"\\x:a.\\y:a. f(x)", "\\x:a.\\y:a. f(Z(x,y))", "a", "f(a)",
        "\\x:a.\\y:a. f(Z(Z(x,y),Z(x,y)))"}) {
    TermPtr t = T(text);
    EXPECT_TRUE(alpha_eq(t, T(show(t)))) << text;
  }
}

TEST(Parse, CanonicalConstantsRoundTrip) {
  Signature sig = default_sig();
  TermPtr t = parse_term("c_(a->a)(a)", sig);
  EXPECT_EQ(show(t->type), "a");
  EXPECT_TRUE(alpha_eq(t, parse_term(show(t), sig)));
}

// ---------------------------------------------------------------------------
// Type inference
// ---------------------------------------------------------------------------

TEST(InferType, RunningProblemType) {
  TermPtr s = T("\\x:a.\\y:a. f(x)");
  EXPECT_EQ(show(infer_type(s, default_sig())), "a->a->a");
}

TEST(InferType, ConstantAlone) {
  EXPECT_EQ(show(infer_type(T("a"), default_sig())), "a");
}

TEST(InferType, SecondOrderExample) {
  // Hand derivation: with f:(a->a)->a and x:a->a, f(\y.x(y)) : a, so the
  // whole term has type (a->a)->a.
  Signature sig;
  sig.declare("f", parse_type("(a->a)->a"));
  TermPtr t = parse_term("\\x:a->a. f(\\y:a. x(y))", sig);
  EXPECT_EQ(show(infer_type(t, sig)), "(a->a)->a");
}

TEST(InferType, RejectsWrongContext) {
  TermPtr t = T("\\x:a.\\y:a. f(Z(x,y))");
  std::map<std::string, TypePtr> wrong{{"Z", parse_type("a->a")}};
  EXPECT_THROW(infer_type(t, {}, wrong, default_sig()), TypeCheckError);
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

TEST(Normalize, BetaRedexCollapses) {
  EXPECT_TRUE(alpha_eq(T("(\\x:a. x) a"), T("a")));
}

TEST(Normalize, ProjectionRecoversLeftSide) {
  TermPtr g = T("\\x:a.\\y:a. f(Z(x,y))");
  Substitution left = subst1("Z", "\\u:a.\\v:a. u", default_sig());
  EXPECT_TRUE(alpha_eq(apply_subst(g, left), T("\\x:a.\\y:a. f(x)")));
  Substitution right = subst1("Z", "\\u:a.\\v:a. v", default_sig());
  EXPECT_TRUE(alpha_eq(apply_subst(g, right), T("\\x:a.\\y:a. f(y)")));
}

TEST(Normalize, EtaLongForm) {
  Signature sig;
  sig.declare("f", parse_type("(a->a)->a"));
  TermPtr t = parse_term("\\x:a->a. f x", sig);
  EXPECT_TRUE(alpha_eq(t, parse_term("\\x:a->a. f(\\y:a. x(y))", sig)));
}

TEST(Normalize, IdempotentOnRandomTerms) {
  TermGen gen(7, test_signature());
  for (int i = 0; i < 200; ++i) {
    TermPtr t = gen.closed(gen.random_type(2), 3);
    TermPtr n1 = beta_eta_normalize(t);
    TermPtr n2 = beta_eta_normalize(n1);
    EXPECT_TRUE(alpha_eq(t, n1));
    EXPECT_TRUE(alpha_eq(n1, n2));
  }
}

TEST(EtaReduce, SecondOrderExample) {
  // \x. f(\y. x(y)) contracts to \x. f(x), whose top is itself an
  // eta-redex; the eta-normal form is the bare head f.  Normalizing the
  // result re-expands it to the original term.
  Signature sig;
  sig.declare("f", parse_type("(a->a)->a"));
  TermPtr t = parse_term("\\x:a->a. f(\\y:a. x(y))", sig);
  TermPtr r = eta_reduce(t);
  EXPECT_EQ(show(r), "f");
  EXPECT_TRUE(alpha_eq(beta_eta_normalize(r), t));
}

TEST(EtaReduce, BaseConstantUnchanged) {
  TermPtr a = T("a");
  EXPECT_TRUE(alpha_eq(eta_reduce(a), a));
}

TEST(EtaReduce, HandContractionOnSpineArgument) {
  TermPtr t = T("\\x:a->a.\\y:a. f(Z(\\w:a. x(w), y))");
  TermPtr r = eta_reduce(t);
  EXPECT_EQ(show(r), "\\x:a->a.\\y:a. f(Z(x,y))");
}

TEST(EtaReduce, RoundTripWithNormalization) {
  TermGen gen(11, test_signature());
  for (int i = 0; i < 200; ++i) {
    TermPtr t = gen.closed(gen.random_type(2), 3);
    EXPECT_TRUE(alpha_eq(beta_eta_normalize(eta_reduce(t)), t));
  }
}

// ---------------------------------------------------------------------------
// Alpha equality
// ---------------------------------------------------------------------------

TEST(AlphaEq, BinderNamesIrrelevant) {
  EXPECT_TRUE(alpha_eq(T("\\x:a. x"), T("\\y:a. y")));
}

TEST(AlphaEq, RunningSidesDiffer) {
  EXPECT_FALSE(alpha_eq(T("\\x:a.\\y:a. f(x)"), T("\\x:a.\\y:a. f(y)")));
}

TEST(AlphaEq, AgreesWithCanonicalRenamingOracle) {
  TermPtr u = T("\\x:a.\\y:a. f(Z(x,y))");
  TermPtr v = T("\\u:a.\\v:a. f(Z(u,v))");
  EXPECT_TRUE(alpha_eq(u, v));
  EXPECT_TRUE(oracle_alpha_eq(u, v));
  TermGen gen(23, test_signature());
  for (int i = 0; i < 150; ++i) {
    TermPtr t1 = gen.closed(gen.random_type(2), 3);
    TermPtr t2 = gen.closed(t1->type, 3);
    EXPECT_EQ(alpha_eq(t1, t2), oracle_alpha_eq(t1, t2));
    EXPECT_TRUE(alpha_eq(t1, beta_eta_normalize(t1)));
  }
}

// ---------------------------------------------------------------------------
// Positions and subterms
// ---------------------------------------------------------------------------

TEST(Positions, WorkedExampleTerm) {
  TermPtr r = example_r();
  auto ps = positions(r);
  for (auto ix : std::vector<std::vector<int>>{
           {1, 1, 1, 1}, {1, 1, 1, 2}, {1, 1, 1, 3}, {1, 1, 1, 4}})
    EXPECT_TRUE(ps.count(pos(ix)));
}

TEST(Positions, ConstantHasOnlyRoot) {
  auto ps = positions(T("a"));
  EXPECT_EQ(ps.size(), 1u);
  EXPECT_TRUE(ps.count(pos({})));
}

TEST(Positions, ExhaustiveEnumerationByHand) {
  TermPtr g = T("\\x:a.\\y:a. f(Z(x,y))");
  std::set<Position> expect;
  for (auto ix : std::vector<std::vector<int>>{
           {}, {1}, {1, 1}, {1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 2}})
    expect.insert(pos(ix));
  EXPECT_EQ(positions(g), expect);
}

TEST(Positions, MatchesOracleOnRandomTerms) {
  TermGen gen(29, test_signature());
  for (int i = 0; i < 100; ++i) {
    TermPtr t = gen.closed(gen.random_type(2), 3);
    auto got = positions(t);
    std::set<std::vector<int>> got_ix;
    for (const auto& p : got) got_ix.insert(p.ix);
    EXPECT_EQ(got_ix, oracle_positions(t));
    // positions/subterm coherence
    for (const auto& p : got) {
      TermPtr sub = subterm_at(t, p);
      for (const auto& q : got)
        if (p.proper_prefix_of(q)) {
          Position suffix;
          suffix.ix.assign(q.ix.begin() + p.ix.size(), q.ix.end());
          EXPECT_TRUE(alpha_eq(subterm_at(t, q), subterm_at(sub, suffix)));
        }
    }
  }
}

TEST(SubtermAt, SpineWalk) {
  TermPtr g = T("\\x:a.\\y:a. f(Z(x,y))");
  EXPECT_EQ(show(subterm_at(g, pos({1, 1, 1}))), "Z(x,y)");
  EXPECT_TRUE(alpha_eq(subterm_at(g, pos({})), g));
}

TEST(SubtermAt, EtaLongConstantArgument) {
  TermPtr r = example_r();
  TermPtr sub = subterm_at(r, pos({1, 1, 1, 4}));
  EXPECT_TRUE(alpha_eq(sub, T("\\z:a. f(z)")));
}

TEST(SubtermAt, InvalidPositionThrows) {
  EXPECT_THROW(subterm_at(T("a"), pos({1})), PositionError);
}

// ---------------------------------------------------------------------------
// Heads, occurrences, variable sets
// ---------------------------------------------------------------------------

TEST(HeadOf, AbstractionMarkerAndSpineHeads) {
  EXPECT_TRUE(head_of(T("\\x:a.\\y:a. f(x)")).is_abstraction);
  auto h = head_of(T("f(a)"));
  EXPECT_FALSE(h.is_abstraction);
  EXPECT_EQ(h.head.name, "f");
  EXPECT_EQ(h.head.kind, HeadKind::Const);

  TermPtr g = T("\\x:a.\\y:a. f(Z(x,y))");
  auto zh = head_of(eta_reduce(subterm_at(g, pos({1, 1, 1}))));
  EXPECT_FALSE(zh.is_abstraction);
  EXPECT_EQ(zh.head.kind, HeadKind::Free);
  EXPECT_EQ(zh.head.name, "Z");
}

TEST(Occ, DirectCounts) {
  TermPtr r_term = T("\\x:a.\\y:a. f(R(R(x,y),R(x,y)))");
  EXPECT_EQ(occ(Head{HeadKind::Free, "R", parse_type("a->a->a")}, r_term), 3);
  TermPtr z_term = T("\\x:a.\\y:a. f(Z(Z(x,y),Z(x,y)))");
  EXPECT_EQ(occ(Head{HeadKind::Free, "Z", parse_type("a->a->a")}, z_term), 3);
  EXPECT_EQ(occ(Head{HeadKind::Free, "Y", parse_type("a")}, T("\\x:a.\\y:a. f(x)")), 0);
}

TEST(VarSets, FreeAndBound) {
  TermPtr open = T("\\x:a.\\y:a. Z(x,y)");
  EXPECT_EQ(free_vars(open).size(), 1u);
  EXPECT_TRUE(free_vars(open).count("Z"));
  EXPECT_TRUE(free_vars(T("\\x:a.\\y:a. x")).empty());
  auto bv = bound_vars(T("\\x:a.\\y:a. f(Z(x,y))"));
  EXPECT_EQ(bv.size(), 2u);
  EXPECT_TRUE(bv.count("x"));
  EXPECT_TRUE(bv.count("y"));
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

TEST(ApplySubst, EmptySubstitutionIsIdentity) {
  TermPtr t = T("\\x:a.\\y:a. f(x)");
  EXPECT_EQ(apply_subst(t, Substitution{}), t);
}

TEST(ApplySubst, SinglePassOnSelfReferencingRange) {
  // mu = {Y -> \w1.\w2. Y(Y(w1,w2), Y(w1,w2))} applied once.
  TermPtr g = T("\\x:a.\\y:a. f(Y(x,y))");
  Substitution mu =
      subst1("Y", "\\w1:a.\\w2:a. Y(Y(w1,w2),Y(w1,w2))", default_sig());
  TermPtr out = apply_subst(g, mu);
  EXPECT_TRUE(alpha_eq(out, T("\\x:a.\\y:a. f(Y(Y(x,y),Y(x,y)))")));
}

TEST(ApplySubst, CaptureAvoidance) {
  TermPtr g = T("\\x:a.\\y:a. f(Z(x,y))");
  Substitution s = subst1("Z", "\\u:a.\\v:a. u", default_sig());
  EXPECT_TRUE(alpha_eq(apply_subst(g, s), T("\\x:a.\\y:a. f(x)")));
}

TEST(ApplySubst, CaptureAvoidanceUnderBinderCollision) {
  // The range's inner binder is named x; substituting the outer bound x
  // into the range must rename that binder rather than capture.
  Signature sig;
  sig.declare("k", parse_type("a->(a->a)->a"));
  TermPtr g = parse_term("\\x:a. Z(x)", sig);
  Substitution s;
  s.bind("Z", parse_term("\\u:a. k(u, \\x:a. u)", sig));
  TermPtr out = apply_subst(g, s);
  EXPECT_TRUE(alpha_eq(out, parse_term("\\x:a. k(x, \\w:a. x)", sig)));
  EXPECT_FALSE(alpha_eq(out, parse_term("\\x:a. k(x, \\w:a. w)", sig)));
}

TEST(ApplySubst, TypePreservationOnRandomTerms) {
  Signature sig = test_signature();
  TermGen gen(31, sig);
  for (int i = 0; i < 100; ++i) {
    TypePtr vty = gen.random_type(2);
    TermPtr range = gen.closed(vty, 3);
    TermPtr body = gen.closed(base_type("a"), 2);
    // Build a term with one free variable applied in eta-long style.
    TermPtr var = eta_expand_head(Head{HeadKind::Free, "V", vty});
    Substitution s;
    s.bind("V", range);
    TermPtr t = mk_abs("q", vty, body);  // V does not occur: identity
    EXPECT_TRUE(alpha_eq(apply_subst(t, s), t));
    TermPtr applied = apply_subst(var, s);
    EXPECT_TRUE(type_eq(applied->type, vty));
    EXPECT_TRUE(alpha_eq(applied, beta_eta_normalize(range)));
  }
}

TEST(ApplySubst, TypeMismatchRejected) {
  TermPtr g = T("\\x:a.\\y:a. f(Z(x,y))");
  Substitution s = subst1("Z", "a", default_sig());
  EXPECT_THROW(apply_subst(g, s), TypeCheckError);
}

TEST(Substitution, IdentityBindingDropped) {
  TypePtr ty = parse_type("a->a->a");
  Substitution s;
  s.bind("Z", eta_expand_head(Head{HeadKind::Free, "Z", ty}));
  EXPECT_TRUE(s.empty());
}

TEST(FreshFreeVar, DeterministicSuffixes) {
  EXPECT_EQ(fresh_free_var("Y", {"Z"}, parse_type("a->a->a")), "Y");
  EXPECT_EQ(fresh_free_var("Y", {"Y", "Z"}), "Y1");
  EXPECT_EQ(fresh_free_var("H", {"H", "H1"}), "H2");
}

TEST(ParsePrint, RoundTripOnRandomTerms) {
  Signature sig = test_signature();
  TermGen gen(37, sig);
  for (int i = 0; i < 200; ++i) {
    TermPtr t = gen.closed(gen.random_type(2), 3);
    EXPECT_TRUE(alpha_eq(parse_term(show(t), sig), t)) << show(t);
  }
}
