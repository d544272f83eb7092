#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "wlp/textio.hpp"

using namespace wlp;

TEST(Parse, SingleRule) {
  Program p = parse_program("reachable(Q) += initial(Q).");
  ASSERT_EQ(p.rules.size(), 1u);
  EXPECT_EQ(p.rules[0].head, parse_atom("reachable(Q)"));
  EXPECT_EQ(p.rules[0].span.line, 1);
}

TEST(Parse, GuardAndDisequality) {
  Program p = parse_program("reachable(Q) += reachable(P) * edge(P,Q) if edge(Q,P), Q != P.");
  ASSERT_EQ(p.rules.size(), 1u);
  const auto& c = p.rules[0].conditions;
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].kind, SideCondition::Kind::Guard);
  EXPECT_EQ(c[0].atom, parse_atom("edge(Q, P)"));
  EXPECT_EQ(c[1].kind, SideCondition::Kind::Neq);
}

TEST(Parse, SyntaxErrorCarriesTheLine) {
  try {
    parse_program("edge(a,");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 1);
  }
  try {
    parse_program("p(a) = 1.\n\nq(X) += .");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 3);
  }
}

TEST(Parse, UnknownDirective) { EXPECT_THROW(parse_program("@weights real."), ParseError); }

TEST(Parse, Directives) {
  Program p = parse_program("@semiring viterbi.\n@input trans/2.\n@pair p/1 q/1 as pq.\np(X) += r(X).\nq(X) += r(X).");
  EXPECT_EQ(p.semiring, SemiringId::Viterbi);
  EXPECT_TRUE(p.inputs.count({"trans", 2}));
  ASSERT_EQ(p.pairs.size(), 1u);
  EXPECT_EQ(p.pairs[0].product, "pq");
}

TEST(Parse, TermForms) {
  Atom a = parse_atom("f(X, abc, 42, \"If it\", [], a::b::[], I-1, J+2)");
  ASSERT_EQ(a.args.size(), 8u);
  EXPECT_EQ(a.args[0].kind(), Term::Kind::Variable);
  EXPECT_EQ(a.args[1].kind(), Term::Kind::Symbol);
  EXPECT_EQ(a.args[2].int_value(), 42);
  EXPECT_EQ(a.args[3].name(), "If it");
  EXPECT_EQ(a.args[4].kind(), Term::Kind::Nil);
  EXPECT_EQ(a.args[5].kind(), Term::Kind::Cons);
  EXPECT_EQ(a.args[6].offset(), -1);
  EXPECT_EQ(a.args[7].offset(), 2);
}

TEST(Parse, AxiomValues) {
  Program p = parse_program("a = true.\nb = 0.25.\nc = <0.5,0,1>.\nd = inf.");
  ASSERT_EQ(p.axioms.size(), 4u);
  EXPECT_EQ(p.axioms[0].value, Value{true});
  EXPECT_EQ(p.axioms[1].value, Value{0.25});
  EXPECT_EQ(p.axioms[2].value, Value(Triple{0.5, 0, 1}));
}

TEST(Render, TripleAxioms) {
  Program p = parse_program("p(a) = <0.5,0,1>.");
  EXPECT_NE(render_program(p).find("p(a) = <0.5,0,1>."), std::string::npos);
}

TEST(Render, RoundTripsEveryFixture) {
  for (const auto& f : all_fixtures()) {
    EXPECT_TRUE(test::round_trips(f.combined())) << f.name;
    // parse . render . parse = parse
    Program once = parse_program(render_program(f.combined()));
    EXPECT_EQ(render_program(once), render_program(parse_program(render_program(once)))) << f.name;
  }
}

TEST(Render, RoundTripsProductPrograms) {
  Program base = parse_program(programs::reachability());
  auto np = natural_pairing(base, base);
  Program out = product_transform(np.left, np.right, np.spec);
  EXPECT_TRUE(test::round_trips(out));
  Program reread = parse_program(render_program(out));
  EXPECT_EQ(reread.rules.back().origin, out.rules.back().origin);
}

TEST(Facts, ParsesLines) {
  auto facts = parse_facts_tsv("edge\ta,d\t0.2\n# comment\n\ninitial\ta\n", Value{1.0});
  ASSERT_EQ(facts.size(), 2u);
  EXPECT_EQ(facts[0].atom, parse_atom("edge(a, d)"));
  EXPECT_EQ(facts[0].value, Value{0.2});
  EXPECT_EQ(facts[1].value, Value{1.0});
}

TEST(Facts, QuotedAndStructuredArguments) {
  auto facts = parse_facts_tsv("trigram\t\"if\",\"it\",\"be\"\t0.375\nsubstr\t0,2,le::chat::[]\t1\n", Value{1.0});
  ASSERT_EQ(facts.size(), 2u);
  EXPECT_EQ(facts[0].atom.args[2].name(), "be");
  EXPECT_EQ(facts[0].value, Value{0.375});
  EXPECT_EQ(facts[1].atom.args[2].to_string(), "le::chat::[]");
}

TEST(Facts, MalformedLineReportsItsNumber) {
  try {
    parse_facts_tsv("edge\ta,b\t1\nedge\ta,(\t1\n", Value{1.0});
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 2);
  }
  EXPECT_THROW(parse_facts_tsv("edge\ta,b\tlots\n", Value{1.0}), ParseError);
}

TEST(Facts, RenderRoundTrip) {
  const auto& facts = fixture("phrase_product").main.facts;
  auto back = parse_facts_tsv(render_facts_tsv(facts), Value{1.0});
  ASSERT_EQ(back.size(), facts.size());
  for (std::size_t i = 0; i < facts.size(); ++i) {
    EXPECT_EQ(back[i].atom, facts[i].atom);
    EXPECT_EQ(back[i].value, facts[i].value);
  }
}

TEST(Facts, LineOrderDoesNotChangeTheChart) {
  const Fixture& f = fixture("graph4");
  std::string tsv = render_facts_tsv(f.main.facts);
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t nl; (nl = tsv.find('\n', start)) != std::string::npos; start = nl + 1)
    lines.push_back(tsv.substr(start, nl - start + 1));
  std::mt19937_64 rng(1);
  std::string reference;
  for (int round = 0; round < 5; ++round) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string shuffled;
    for (const auto& l : lines) shuffled += l;
    Program p = f.main.program;
    p.axioms = parse_facts_tsv(shuffled, Value{1.0});
    std::string chart = render_chart(solve(p, SemiringId::Real));
    if (round == 0) reference = chart;
    EXPECT_EQ(chart, reference);
  }
}

TEST(Chart, JsonLines) {
  Chart c(SemiringId::Viterbi);
  c.set(parse_atom("reachable(b)"), 0.16);
  EXPECT_EQ(render_chart(c), "{\"atom\":\"reachable(b)\",\"value\":0.16}\n");
  EXPECT_EQ(render_chart(Chart(SemiringId::Real)), "");
}

TEST(Chart, TriplesAsArrays) {
  Chart c(SemiringId::Entropy3);
  c.set(parse_atom("goal"), Triple{0.5, 0.25, 1});
  EXPECT_EQ(render_chart(c), "{\"atom\":\"goal\",\"value\":[0.5,0.25,1]}\n");
}

TEST(Chart, SortedByAtomText) {
  Chart c(SemiringId::Boolean);
  c.set(parse_atom("b(x)"), true);
  c.set(parse_atom("a(y)"), true);
  c.set(parse_atom("a(10)"), true);
  std::string text = render_chart(c);
  EXPECT_LT(text.find("a(10)"), text.find("a(y)"));
  EXPECT_LT(text.find("a(y)"), text.find("b(x)"));
}
