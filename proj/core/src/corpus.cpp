#include "wlp/corpus.hpp"

#include "wlp/error.hpp"
#include "wlp/textio.hpp"

namespace wlp {

namespace programs {

std::string_view reachability() {
  return R"(reachable(Q) += initial(Q).
reachable(Q) += reachable(P) * edge(P, Q).
)";
}

std::string_view fsa_paths() {
  return R"(goal += path(Q) * final(Q).
path(Q) += initial(Q).
path(Q) += path(P) * arc(P, Q, A).
)";
}

std::string_view fsa_recognition() {
  return R"(goal += path(Q, I) * final(Q) * length(I).
path(Q, 0) += initial(Q).
path(Q, I) += path(P, I-1) * arc(P, Q, A) * string(I, A).
)";
}

std::string_view transducer() {
  return R"(goal += path(Q) * final(Q).
path(Q) += initial(Q).
path(Q) += path(P) * arc(P, Q, A, B).
)";
}

std::string_view transducer_order2() {
  return R"(goal += path(P, Q) * final(Q).
path(null, Q) += initial(Q).
path(Pp, Q) += path(P, Pp) * biarc(P, Pp, Q, A, B).
)";
}

std::string_view cky() {
  return R"(goal += start(S) * length(N) * c(S, 0, N).
c(X, I-1, I) += unary(X, W) * string(I, W).
c(X, I, K) += binary(X, Y, Z) * c(Y, I, J) * c(Z, J, K).
)";
}

std::string_view cky_epsilon() {
  return R"(goal += length(N) * start(S) * c(S, 0, N).
c(X, I, I) += unary(X, eps) * pos(I).
c(X, I-1, I) += unary(X, W) * string(I, W).
c(X, I, K) += binary(X, Y, Z) * c(Y, I, J) * c(Z, J, K).
)";
}

std::string_view transduction_grammar() {
  return R"(goal12 += length1(M) * length2(N) * start12(S) * c12(S, 0, M, 0, N).
c12(X, I-1, I, J, J) += unary12(X, W1, eps) * string1(I, W1) * pos2(J).
c12(X, I, I, J-1, J) += unary12(X, eps, W2) * pos1(I) * string2(J, W2).
c12(X, I-1, I, J-1, J) += unary12(X, W1, W2) * string1(I, W1) * string2(J, W2).
c12(X, I1, K1, I2, K2) += binary12(X, Y, Z) * c12(Y, I1, J1, I2, J2) * c12(Z, J1, K1, J2, K2).
)";
}

std::string_view inversion_rule() {
  return R"(c12(X, I1, K1, I2, K2) += inversion12(X, Y, Z) * c12(Y, I1, J1, J2, K2) * c12(Z, J1, K1, I2, J2).
)";
}

std::string_view trigram() {
  return R"(@input predict/3.
goal += targetlength(M) * predict(A, B, M+1).
predict(B, C, J+1) += predict(A, B, J) * trigram(A, B, C).
)";
}

std::string_view monotone() {
  return R"(@input trans/2.
goal += sourcelength(N) * trans(N, []).
trans(I2, Es) += trans(I, []) * phrase(I, I2, E::Es).
trans(I2, Es) += trans(I2, E::Es).
phrase(I, I2, Es) += substr(I, I2, Ds) * ptranslate(Ds, Es).
)";
}

std::string_view phrase_translation() {
  return R"(@input protr/5.
goal += sourcelength(N) * targetlength(M) * protr(N, M+1, A, B, []).
protr(I2, J+1, B, C, Es) += protr(I, J, A, B, []) * trigram(A, B, C) * phrase(I, I2, C::Es).
protr(I2, J+1, B, C, Es) += protr(I2, J, A, B, C::Es) * trigram(A, B, C).
phrase(I, I2, Es) += substr(I, I2, Ds) * ptranslate(Ds, Es).
)";
}

}  // namespace programs

std::vector<Axiom> sentence_facts(const std::vector<std::string>& words, const std::string& string_pred,
                                  const std::string& length_pred) {
  std::vector<Axiom> out;
  for (std::size_t i = 0; i < words.size(); ++i)
    out.push_back({Atom(string_pred, {Term::integer(static_cast<std::int64_t>(i + 1)), Term::symbol(words[i])}),
                   1.0, Component::None, {}});
  out.push_back({Atom(length_pred, {Term::integer(static_cast<std::int64_t>(words.size()))}), 1.0,
                 Component::None, {}});
  return out;
}

Program FactorData::combined() const {
  Program p = program;
  p.axioms.insert(p.axioms.end(), facts.begin(), facts.end());
  return p;
}

namespace {

FactorData factor(std::string_view program, std::string_view semiring, std::string_view facts_tsv,
                  std::vector<Axiom> extra = {}) {
  FactorData f;
  f.program = parse_program("@semiring " + std::string(semiring) + ".\n" + std::string(program));
  Value def = *f.program.semiring == SemiringId::Boolean ? Value{true} : Value{1.0};
  f.facts = parse_facts_tsv(facts_tsv, def);
  f.facts.insert(f.facts.end(), extra.begin(), extra.end());
  return f;
}

Expectation stated(SemiringId s, std::string atom, Value v, double tol, std::string note) {
  return {s, std::move(atom), std::move(v), tol, Basis::Stated, std::move(note)};
}

Expectation derived(SemiringId s, std::string atom, double tol, std::string note) {
  return {s, std::move(atom), std::nullopt, tol, Basis::Derived, std::move(note)};
}

constexpr std::string_view kFsa6Arcs = R"(# arc weights chosen to reproduce the path aggregates
arc	a,b,0	0.5
arc	b,c,1	0.8
arc	b,c,0	0.2
arc	a,d,0	0.25
arc	d,c,1	0.8
arc	d,c,0	0.2
arc	a,c,1	0.25
initial	a	1
final	c	1
)";

constexpr std::string_view kOrder1Arcs = R"(arc	a,b,x,y	0.6
arc	a,b,x,z	0.1
arc	a,c,x,y	0.3
arc	b,c,y,y	0.7
arc	b,c,x,z	0.3
initial	a	1
final	c	1
)";

constexpr std::string_view kOrder2Arcs = R"(biarc	null,a,b,x,y	0.5
biarc	null,a,b,x,z	0.2
biarc	null,a,c,x,y	0.3
biarc	a,b,c,y,y	0.6
biarc	a,b,c,x,z	0.4
initial	a	1
final	c	1
)";

constexpr std::string_view kG18Grammar = R"(start	s	1
binary	s,np,vp	1
binary	vp,v,np	0.7
binary	vp,vp,pp	0.3
binary	np,np,pp	0.2
binary	pp,p,np	1
unary	np,alice	0.4
unary	v,saw	1
unary	np,bob	0.3
unary	p,with	1
unary	np,binoculars	0.1
)";

constexpr std::string_view kDependencyGrammar = R"(# nonterminals are the words themselves
start	saw	1
binary	saw,alice,saw	0.4
binary	saw,saw,bob	0.3
binary	saw,saw,with	0.2
unary	saw,saw	0.1
unary	alice,alice	1
binary	bob,bob,with	0.4
unary	bob,bob	0.6
binary	with,with,binoculars	0.8
unary	with,with	0.2
unary	binoculars,binoculars	1
)";

constexpr std::string_view kPhraseTable = R"(sourcelength	3	1
substr	0,1,le::[]	1
substr	1,2,chat::[]	1
substr	2,3,noir::[]	1
substr	0,2,le::chat::[]	1
substr	1,3,chat::noir::[]	1
substr	0,3,le::chat::noir::[]	1
ptranslate	le::[],the::[]	1
ptranslate	chat::[],cat::[]	0.8
ptranslate	noir::[],black::[]	0.9
ptranslate	chat::noir::[],black::cat::[]	0.6
)";

}  // namespace

std::vector<Fixture> build_graph_fixtures() {
  std::vector<Fixture> out;

  Fixture reach{"reach_bool", "boolean reachability; c has an edge to b but is not reachable from a",
                factor(programs::reachability(), "boolean", R"(initial	a	true
edge	a,d	true
edge	d,d	true
edge	d,b	true
edge	b,b	true
edge	c,b	true
)"),
                std::nullopt, {}};
  reach.expectations = {
      derived(SemiringId::Boolean, "reachable(b)", 0, "reachable through a-d-b"),
      derived(SemiringId::Boolean, "reachable(c)", 0, "no path from a"),
  };
  out.push_back(std::move(reach));

  Fixture cost{"cost3", "shortest paths with a self-loop of cost 2 on d",
               factor(programs::reachability(), "tropical", R"(initial	a	0
edge	a,d	1
edge	d,d	2
edge	d,b	3
edge	a,b	5
edge	b,b	1
)"),
               std::nullopt, {}};
  cost.expectations = {
      derived(SemiringId::Tropical, "reachable(b)", 0, "min over path costs"),
      derived(SemiringId::Tropical, "reachable(d)", 0, "min over path costs"),
  };
  out.push_back(std::move(cost));

  Fixture g4{"graph4", "probabilistic graph; weights chosen so both target aggregates hold",
             factor(programs::reachability(), "viterbi", R"(# chosen so that s(d) = 0.2/(1-0.84), s(b) = s(d)*0.8/(1-0.9)
initial	a	1
edge	a,d	0.2
edge	d,d	0.84
edge	d,b	0.8
edge	b,b	0.9
)"),
             std::nullopt, {}};
  g4.expectations = {
      stated(SemiringId::Viterbi, "reachable(a)", 1.0, 1e-12, "the start vertex"),
      stated(SemiringId::Viterbi, "reachable(b)", 0.16, 1e-12, "most probable path a-d-b"),
      stated(SemiringId::Real, "reachable(b)", 10.0, 1e-6, "path sum through the b loop"),
      derived(SemiringId::Real, "reachable(d)", 1e-6, "geometric series over the d loop"),
  };
  out.push_back(std::move(g4));
  return out;
}

std::vector<Fixture> build_fsa_fixtures() {
  std::vector<Fixture> out;

  Fixture fsa{"fsa6", "probabilistic automaton over {0,1}; arcs chosen to match the path aggregates",
              factor(programs::fsa_paths(), "real", kFsa6Arcs), std::nullopt, {}};
  fsa.expectations = {
      stated(SemiringId::Real, "goal", 1.0, 1e-12, "five proofs summing to one"),
  };
  out.push_back(std::move(fsa));

  Fixture fsa01{"fsa6_01", "the same automaton recognizing the string 01",
                factor(programs::fsa_recognition(), "viterbi",
                       std::string(kFsa6Arcs) + "string\t1,0\t1\nstring\t2,1\t1\nlength\t2\t1\n"),
                std::nullopt, {}};
  fsa01.expectations = {
      stated(SemiringId::Viterbi, "goal", 0.4, 1e-12, "joint probability of the path a0b1c"),
      stated(SemiringId::Real, "goal", 0.6, 1e-12, "marginal probability of the string"),
  };
  out.push_back(std::move(fsa01));

  Fixture acc{"acceptor01", "deterministic weight-one acceptor of the single string 01",
              factor(programs::fsa_paths(), "real", R"(arc	q0,q1,0	1
arc	q1,q2,1	1
initial	q0	1
final	q2	1
)"),
              std::nullopt, {}};
  acc.expectations = {stated(SemiringId::Real, "goal", 1.0, 1e-12, "one path of weight one")};
  out.push_back(std::move(acc));

  Fixture bias{"biaser1", "single-state automaton preferring the symbol 1",
               factor(programs::fsa_paths(), "viterbi", R"(arc	s,s,0	0.1
arc	s,s,1	0.9
initial	s	1
final	s	1
)"),
               std::nullopt, {}};
  bias.expectations = {stated(SemiringId::Viterbi, "goal", 1.0, 1e-12, "the empty path")};
  out.push_back(std::move(bias));

  Fixture pair{"wfst_pair", "two acyclic transducers for composition",
               factor(programs::transducer(), "real", R"(arc	s0,s1,a,x	0.6
arc	s0,s1,a,y	0.4
arc	s1,s2,b,x	0.7
arc	s1,s2,b,y	0.3
initial	s0	1
final	s2	1
)"),
               factor(programs::transducer(), "real", R"(arc	t0,t1,x,u	0.5
arc	t0,t1,y,v	0.3
arc	t0,t1,x,v	0.2
arc	t1,t2,x,u	0.6
arc	t1,t2,y,v	0.4
arc	t0,t2,x,w	0.1
initial	t0	1
final	t2	1
)"),
               {}};
  pair.expectations = {derived(SemiringId::Real, "goal", 1e-9, "composition by aligned path pairs")};
  out.push_back(std::move(pair));

  Fixture order2{"wfst_order2",
                 "order-1 and order-2 transducers over the same state paths a-b-c and a-c",
                 factor(programs::transducer(), "real", kOrder1Arcs),
                 factor(programs::transducer_order2(), "real", kOrder2Arcs),
                 {}};
  order2.expectations = {
      stated(SemiringId::Real, "goal", 1.0, 1e-12, "order-1 path probabilities sum to one"),
      derived(SemiringId::Entropy3, "goal", 1e-9, "KL over paired state and emission sequences"),
  };
  out.push_back(std::move(order2));
  return out;
}

std::vector<Fixture> build_grammar_fixtures() {
  std::vector<Fixture> out;
  const std::vector<std::string> sentence{"alice", "saw", "bob", "with", "binoculars"};

  Fixture g18{"g18", "CNF grammar with a prepositional attachment ambiguity",
              factor(programs::cky(), "viterbi", kG18Grammar, sentence_facts(sentence)), std::nullopt, {}};
  g18.expectations = {
      derived(SemiringId::Viterbi, "goal", 1e-12, "best of the two parses"),
      derived(SemiringId::Real, "goal", 1e-12, "sum of the two parses"),
  };
  out.push_back(std::move(g18));

  Fixture dep{"g18_dep", "dependency grammar over the same words",
              factor(programs::cky(), "viterbi", kDependencyGrammar, sentence_facts(sentence)), std::nullopt, {}};
  dep.expectations = {derived(SemiringId::Real, "goal", 1e-12, "sum over dependency trees")};
  out.push_back(std::move(dep));

  Fixture eps{"gEps", "grammar with an empty production a -> eps",
              factor(programs::cky_epsilon(), "real", R"(start	s	1
binary	s,a,b	1
unary	a,x	0.5
unary	a,eps	0.5
unary	b,y	1
pos	0	1
pos	1	1
)",
                     sentence_facts({"y"})),
              std::nullopt, {}};
  eps.expectations = {derived(SemiringId::Real, "goal", 1e-12, "a derives the empty string")};
  out.push_back(std::move(eps));

  Fixture itg{"itg_pair", "synchronous grammar over 'a b' and 'B A'; only an inverted production aligns them",
              factor(programs::transduction_grammar(), "viterbi", R"(start12	s	1
binary12	s,x,y	1
inversion12	s,x,y	1
unary12	x,a,"A"	1
unary12	y,b,"B"	1
pos1	0	1
pos1	1	1
pos1	2	1
pos2	0	1
pos2	1	1
pos2	2	1
)"),
              std::nullopt, {}};
  for (const auto& a : sentence_facts({"a", "b"}, "string1", "length1")) itg.main.facts.push_back(a);
  for (const auto& a : sentence_facts({"B", "A"}, "string2", "length2")) itg.main.facts.push_back(a);
  itg.expectations = {derived(SemiringId::Viterbi, "goal12", 0, "zero with straight rules only")};
  out.push_back(std::move(itg));
  return out;
}

std::vector<Fixture> build_translation_fixtures() {
  std::vector<Fixture> out;

  Fixture tri{"trigram_othello", "trigram model seeded with 'if it'",
              factor(programs::trigram(), "real", R"(predict	"if","it",3	1
trigram	"if","it","be"	0.375
trigram	"if","it","prove"	0.125
# weight for a sequence seen once
trigram	"it","be","demanded"	0.5
targetlength	4	1
)"),
              std::nullopt, {}};
  tri.expectations = {
      stated(SemiringId::Real, "trigram(\"if\", \"it\", \"be\")", 0.375, 0, "three of eight continuations"),
      stated(SemiringId::Real, "trigram(\"if\", \"it\", \"prove\")", 0.125, 0, "one of eight continuations"),
      derived(SemiringId::Real, "goal", 1e-12, "if it be demanded"),
  };
  out.push_back(std::move(tri));

  Fixture mono{"monotone", "monotone decoding of 'le chat noir' with a toy phrase table",
               factor(programs::monotone(), "viterbi", std::string(kPhraseTable) + "trans\t0,[]\t1\n"), std::nullopt,
               {}};
  mono.expectations = {
      derived(SemiringId::Viterbi, "goal", 1e-12, "best segmentation"),
      derived(SemiringId::Real, "goal", 1e-12, "sum over segmentations"),
  };
  out.push_back(std::move(mono));

  Fixture phr{"phrase_product", "phrase translation scored by a trigram model",
              factor(programs::phrase_translation(), "viterbi", std::string(kPhraseTable) + R"(targetlength	3	1
protr	0,1,bos,bos,[]	1
trigram	bos,bos,the	1
trigram	bos,the,cat	0.5
trigram	bos,the,black	0.5
trigram	the,cat,black	0.3
trigram	the,black,cat	0.7
)"),
              std::nullopt, {}};
  phr.expectations = {derived(SemiringId::Viterbi, "goal", 1e-12, "max over segmentations and target strings")};
  out.push_back(std::move(phr));
  return out;
}

std::vector<Fixture> build_misc_fixtures() {
  std::vector<Fixture> out;
  Fixture coin{"uniform2", "two proofs of weight one half",
               factor("goal += pick(X).\n", "real", "pick\th\t0.5\npick\tt\t0.5\n"), std::nullopt, {}};
  coin.expectations = {stated(SemiringId::Real, "goal", 1.0, 1e-12, "two halves")};
  out.push_back(std::move(coin));

  Fixture loop{"loop1", "a loop of weight one; the real path sum diverges",
               factor(programs::reachability(), "real", "initial\ta\t1\nedge\ta,a\t1\n"), std::nullopt, {}};
  loop.expectations = {derived(SemiringId::Real, "reachable(a)", 0, "no finite value")};
  out.push_back(std::move(loop));
  return out;
}

const std::vector<Fixture>& all_fixtures() {
  static const std::vector<Fixture> all = [] {
    std::vector<Fixture> v;
    for (auto build : {build_graph_fixtures, build_fsa_fixtures, build_grammar_fixtures,
                       build_translation_fixtures, build_misc_fixtures})
      for (auto& f : build()) v.push_back(std::move(f));
    return v;
  }();
  return all;
}

const Fixture& fixture(std::string_view name) {
  for (const auto& f : all_fixtures())
    if (f.name == name) return f;
  throw Error("unknown fixture " + std::string(name));
}

}  // namespace wlp
