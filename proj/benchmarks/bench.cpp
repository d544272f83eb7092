#include <benchmark/benchmark.h>

#include <string>

#include "wlp/corpus.hpp"
#include "wlp/infometrics.hpp"
#include "wlp/product.hpp"
#include "wlp/solver.hpp"
#include "wlp/textio.hpp"

using namespace wlp;

namespace {

// A line of n vertices with a self loop on each, weights below one.
Program chain(std::size_t n) {
  Program p = parse_program(programs::reachability());
  p.axioms.push_back({parse_atom("initial(v0)"), 1.0, Component::None, {}});
  for (std::size_t i = 0; i < n; ++i) {
    Term a = Term::symbol("v" + std::to_string(i));
    Term b = Term::symbol("v" + std::to_string(i + 1));
    p.axioms.push_back({Atom("edge", {a, b}), 0.5, Component::None, {}});
    p.axioms.push_back({Atom("edge", {a, a}), 0.25, Component::None, {}});
  }
  return p;
}

// s -> s s | a over a^n: every binary bracketing is a parse.
Program ambiguous_cky(std::size_t n) {
  Program p = parse_program(programs::cky());
  p.axioms.push_back({parse_atom("start(s)"), 1.0, Component::None, {}});
  p.axioms.push_back({parse_atom("binary(s, s, s)"), 0.4, Component::None, {}});
  p.axioms.push_back({parse_atom("unary(s, a)"), 0.6, Component::None, {}});
  for (auto& a : sentence_facts(std::vector<std::string>(n, "a"))) p.axioms.push_back(std::move(a));
  return p;
}

std::size_t rule_from(const Program& p, const std::string& head, std::size_t l, std::size_t r) {
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    const auto* prov = p.rules[i].provenance.get();
    if (p.rules[i].head.predicate == head && prov && !prov->bridging && prov->component == Component::Shared &&
        prov->left_index == l && prov->right_index == r)
      return i;
  }
  return p.rules.size();
}

// Synchronous parse of one sentence by two copies of the grammar.
Program cky_pair(const Program& g) {
  auto np = natural_pairing(g, g, {{"string", 2}, {"length", 1}});
  Program p = product_transform(np.left, np.right, np.spec);
  std::size_t goal = rule_from(p, "goal_12", 0, 0), unary = rule_from(p, "c_12", 1, 1),
              binary = rule_from(p, "c_12", 2, 2);
  p = add_equality_constraint(p, goal, {{"N1", "N2"}});
  p = add_equality_constraint(p, unary, {{"I1", "I2"}});
  p = add_equality_constraint(p, binary, {{"I1", "I2"}, {"J1", "J2"}, {"K1", "K2"}});
  RuleSelector drop;
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    const auto& head = p.rules[i].head.predicate;
    if ((head == "c_12" || head == "goal_12") && i != goal && i != unary && i != binary) drop.rules.insert(i);
  }
  p = drop_rules(p, drop);
  return collapse_arguments(p, {"c_12", 6}, {{1, 4}, {2, 5}});
}

void BM_SolveChainReal(benchmark::State& state) {
  Program p = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, SemiringId::Real));
}
BENCHMARK(BM_SolveChainReal)->Arg(16)->Arg(64)->Arg(256);

void BM_SolveChainViterbiPriority(benchmark::State& state) {
  Program p = chain(static_cast<std::size_t>(state.range(0)));
  SolveOptions o;
  o.mode = SolveMode::Priority;
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, SemiringId::Viterbi, o));
}
BENCHMARK(BM_SolveChainViterbiPriority)->Arg(16)->Arg(64)->Arg(256);

void BM_CkyParse(benchmark::State& state) {
  Program p = ambiguous_cky(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, SemiringId::Real));
}
BENCHMARK(BM_CkyParse)->Arg(4)->Arg(8)->Arg(12);

void BM_CkyProductBuild(benchmark::State& state) {
  Program g = ambiguous_cky(4);
  for (auto _ : state) benchmark::DoNotOptimize(cky_pair(g));
}
BENCHMARK(BM_CkyProductBuild);

void BM_CkyProductSolve(benchmark::State& state) {
  Program p = cky_pair(ambiguous_cky(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, SemiringId::Real));
}
BENCHMARK(BM_CkyProductSolve)->Arg(4)->Arg(8);

void BM_EntropyOfParses(benchmark::State& state) {
  Program p = ambiguous_cky(static_cast<std::size_t>(state.range(0)));
  Atom goal = parse_atom("goal");
  for (auto _ : state) benchmark::DoNotOptimize(entropy_of_goal(p, goal));
}
BENCHMARK(BM_EntropyOfParses)->Arg(4)->Arg(8)->Arg(12);

void BM_ParseAndRender(benchmark::State& state) {
  std::string text = render_program(cky_pair(ambiguous_cky(4)));
  for (auto _ : state) benchmark::DoNotOptimize(render_program(parse_program(text)));
}
BENCHMARK(BM_ParseAndRender);

}  // namespace

BENCHMARK_MAIN();
