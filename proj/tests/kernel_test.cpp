#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "wlp/textio.hpp"

using namespace wlp;

namespace {

Atom atom(std::string_view text) { return parse_atom(text); }

Rule rule(std::string_view text) { return parse_program(text).rules.at(0); }

}  // namespace

TEST(Unify, BindsPositionally) {
  auto s = unify(atom("edge(P, Q)"), atom("edge(a, b)"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->at("P"), Term::symbol("a"));
  EXPECT_EQ(s->at("Q"), Term::symbol("b"));
}

TEST(Unify, RepeatedVariableMustAgree) {
  EXPECT_FALSE(unify(atom("edge(P, P)"), atom("edge(a, b)")));
  EXPECT_TRUE(unify(atom("edge(P, P)"), atom("edge(a, a)")));
}

TEST(Unify, ArithmeticBindsTheBase) {
  auto s = unify(atom("path(Q, I-1)"), atom("path(b, 3)"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->at("Q"), Term::symbol("b"));
  EXPECT_EQ(s->at("I"), Term::integer(4));
  // Oracle: substituting the matcher reproduces the fact.
  EXPECT_EQ(substitute(atom("path(Q, I-1)"), *s), atom("path(b, 3)"));
}

TEST(Unify, ArithmeticNeedsAnInteger) {
  EXPECT_FALSE(unify(atom("path(I+1)"), atom("path(a)")));
}

TEST(Unify, PredicateAndArityMustMatch) {
  EXPECT_FALSE(unify(atom("edge(P, Q)"), atom("arc(a, b)")));
  EXPECT_FALSE(unify(atom("edge(P)"), atom("edge(a, b)")));
}

TEST(Unify, ConsPatterns) {
  auto s = unify(atom("phrase(E::Es)"), atom("phrase(the::cat::[])"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->at("E"), Term::symbol("the"));
  EXPECT_EQ(s->at("Es").to_string(), "cat::[]");
  EXPECT_FALSE(unify(atom("phrase(E::Es)"), atom("phrase([])")));
}

TEST(Substitute, ReplacesBoundVariables) {
  Substitution s{{"P", Term::symbol("a")}, {"Q", Term::symbol("b")}};
  EXPECT_EQ(substitute(atom("edge(P, Q)"), s), atom("edge(a, b)"));
}

TEST(Substitute, EvaluatesArithmetic) {
  Substitution s{{"I", Term::integer(2)}, {"Q", Term::symbol("c")}};
  EXPECT_EQ(substitute(atom("path(Q, I+1)"), s), atom("path(c, 3)"));
}

TEST(Substitute, EmptySubstitutionIsIdentity) { EXPECT_EQ(substitute(atom("f(X)"), {}), atom("f(X)")); }

TEST(Substitute, NonIntegerBaseIsATypeError) {
  Substitution s{{"I", Term::symbol("a")}};
  EXPECT_THROW(substitute(atom("path(I+1)"), s), TypeError);
}

TEST(Unify, MatcherReproducesRandomFacts) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> small(0, 3);
  const std::vector<std::string> vars{"X", "Y", "Z"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Term> pattern, fact;
    int arity = 1 + small(rng);
    for (int i = 0; i < arity; ++i) {
      int choice = small(rng);
      if (choice == 0) {
        pattern.push_back(Term::symbol("k"));
      } else if (choice == 1) {
        pattern.push_back(Term::arith(Term::variable(vars[small(rng) % 3]), 1 + small(rng)));
      } else {
        pattern.push_back(Term::variable(vars[small(rng) % 3]));
      }
      fact.push_back(small(rng) < 2 ? Term::integer(small(rng) + 5) : Term::symbol("k"));
    }
    Atom p("p", pattern), f("p", fact);
    if (auto s = unify(p, f)) EXPECT_EQ(substitute(p, *s), f) << p.to_string() << " vs " << f.to_string();
  }
}

TEST(Validate, WellFormedReachabilityHasNoDiagnostics) {
  Program p = test::fixture_program("graph4", SemiringId::Viterbi);
  EXPECT_TRUE(validate(p).empty());
}

TEST(Validate, RangeRestriction) {
  auto d = validate(parse_program("p(X) += q(Y)."));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].severity, Severity::Error);
  EXPECT_NE(d[0].message.find("X"), std::string::npos);
}

TEST(Validate, NonGroundAxiom) {
  Program p;
  p.axioms.push_back({atom("edge(P, b)"), 1.0, Component::None, {}});
  auto d = validate(p);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(has_errors(d));
}

TEST(Validate, DuplicateAxiom) {
  auto d = validate(parse_program("edge(a, b) = 0.5.\nedge(a, b) = 0.25."));
  EXPECT_TRUE(has_errors(d));
}

TEST(Validate, ArityConsistency) {
  auto d = validate(parse_program("p(X) += q(X).\np(X, Y) += q(X) * q(Y)."));
  EXPECT_TRUE(has_errors(d));
}

TEST(Validate, AxiomsAndRulesOnOnePredicateNeedAnInputDeclaration) {
  const char* text = "trans(I) += trans(J) * step(J, I).\ntrans(0) = 1.\nstep(0, 1) = 1.";
  EXPECT_TRUE(has_errors(validate(parse_program(text))));
  EXPECT_FALSE(has_errors(validate(parse_program(std::string("@input trans/1.\n") + text))));
}

TEST(Validate, PairDirectivesMustNameKnownPredicates) {
  EXPECT_TRUE(has_errors(validate(parse_program("@pair p/1 q/1 as pq.\np(X) += r(X)."))));
}

TEST(Validate, IsPure) {
  Program p = parse_program("p(X) += q(Y).\nr(a) = 1.\nr(a) = 2.");
  auto a = validate(p);
  auto b = validate(p);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].to_string(), b[i].to_string());
}

TEST(Validate, ArithmeticHeadIsRangeRestricted) {
  EXPECT_TRUE(validate(parse_program(programs::fsa_recognition())).empty());
  EXPECT_TRUE(validate(parse_program(programs::cky())).empty());
}

TEST(Desugar, HeadArithmeticBecomesAnEquality) {
  Rule r = desugar_arithmetic(rule("c(X, I-1, I) += unary(X, W) * string(I, W)."));
  for (const auto& t : r.head.args) EXPECT_NE(t.kind(), Term::Kind::Arith);
  ASSERT_EQ(r.conditions.size(), 1u);
  EXPECT_EQ(r.conditions[0].kind, SideCondition::Kind::Eq);
}

TEST(Desugar, BodyArithmeticGetsAFreshVariable) {
  Rule r = desugar_arithmetic(rule("path(Q, I) += path(P, I-1) * arc(P, Q, A) * string(I, A)."));
  for (const auto& b : r.body)
    for (const auto& t : b.args) EXPECT_NE(t.kind(), Term::Kind::Arith);
  EXPECT_EQ(r.conditions.size(), 1u);
}

TEST(Desugar, RuleWithoutArithmeticIsUnchanged) {
  Rule r = rule("reachable(Q) += reachable(P) * edge(P, Q).");
  EXPECT_TRUE(structurally_equal(desugar_arithmetic(r), r));
}

TEST(Desugar, PreservesGroundInstances) {
  for (const char* name : {"fsa6_01", "g18", "gEps"}) {
    Program p = test::fixture_program(name, SemiringId::Real);
    Grounding before = ground_program(p);
    Grounding after = ground_program(desugar_arithmetic(p));
    EXPECT_EQ(before.atoms, after.atoms) << name;
    ASSERT_EQ(before.instances.size(), after.instances.size()) << name;
    for (std::size_t i = 0; i < before.instances.size(); ++i) {
      EXPECT_EQ(before.instances[i].head, after.instances[i].head);
      EXPECT_EQ(before.instances[i].body, after.instances[i].body);
    }
  }
}

TEST(Alpha, RenamingAndBodyOrder) {
  Rule a = rule("p(X, Y) += q(X) * r(Y).");
  Rule b = rule("p(A, B) += r(B) * q(A).");
  EXPECT_FALSE(alpha_equivalent(a, b));
  EXPECT_TRUE(alpha_equivalent(a, b, true));
  EXPECT_FALSE(alpha_equivalent(a, rule("p(A, A) += q(A) * r(A)."), true));
}

TEST(RenamePredicates, RenamesEverywhere) {
  Program p = parse_program("@input r/1.\np(X) += q(X) if r(X).\nq(a) = 1.");
  Program out = rename_predicates(p, {{"q", "q2"}, {"r", "r2"}});
  EXPECT_EQ(out.rules[0].body[0].predicate, "q2");
  EXPECT_EQ(out.rules[0].conditions[0].atom.predicate, "r2");
  EXPECT_EQ(out.axioms[0].atom.predicate, "q2");
  EXPECT_TRUE(out.inputs.count({"r2", 1}));
}

TEST(Program, PredicateQueries) {
  Program p = parse_program(programs::reachability());
  EXPECT_TRUE(p.defines_by_rules({"reachable", 1}));
  EXPECT_FALSE(p.defines_by_rules({"edge", 2}));
  EXPECT_TRUE(p.has_predicate_name("edge"));
  EXPECT_EQ(p.predicates().size(), 3u);
}
