#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "wlp/corpus.hpp"
#include "wlp/infometrics.hpp"
#include "wlp/kernel.hpp"
#include "wlp/product.hpp"
#include "wlp/proofs.hpp"
#include "wlp/solver.hpp"

namespace wlp::test {

// Axiom values converted to the carrier of `id`: numbers become booleans by nonzero-ness,
// booleans become the semiring's one or zero.
Program in_semiring(Program program, SemiringId id);
Program fixture_program(std::string_view name, SemiringId id);
Program partner_program(std::string_view name, SemiringId id);

Value solved(const Program& program, SemiringId id, std::string_view atom, const SolveOptions& options = {});
double solved_real(const Program& program, SemiringId id, std::string_view atom, const SolveOptions& options = {});
// Aggregate over enumerated proofs of the goal.
Value enumerated(const Program& program, SemiringId id, std::string_view goal, EnumerationLimits limits = {});
double as_double(const Value& v);

bool round_trips(const Program& program);

// Index of the product rule combining factor rules `left` and `right` (0-based in each factor).
std::size_t product_rule(const Program& product, std::string_view name, std::size_t left, std::size_t right);

// Automaton intersection: natural product, cross terms dropped, symbols equated.
Program fsa_intersection(const Program& fsa, const Program& acceptor);
// Transducer composition: the first machine's output must equal the second's input.
Program transducer_composition(const Program& first, const Program& second);

// Two weightings of the automaton path program restricted to identical paths.
Program identical_path_constraints(const Program& product);

// Synchronous CKY over one sentence: matching goal, unary and binary rules only, spans
// equated and collapsed into c_12(X1, I, K, X2).
Program cky_pair_constraints(const Program& product);
Program cky_product(const Program& left, const Program& right);

// Order-1 against order-2 transducer: matching state sequences and emissions, the shared
// state collapsed into path_12(Q, Pp).
Program order_pair_constraints(const Program& product);

// Brute-force helpers over proofs.
std::vector<std::pair<std::size_t, std::size_t>> spans_of(const Proof& proof, std::string_view predicate);
std::vector<std::string> labelled_spans_of(const Proof& proof, std::string_view predicate);
std::vector<std::vector<std::string>> leaf_rows(const Proof& proof, std::string_view predicate);

// A layered, acyclic program over constants a, b, c with real weights in [0.1, 1].
struct RandomShape {
  std::size_t max_predicates = 8;
  std::size_t max_rules = 12;
  std::size_t max_axioms = 20;
};
Program random_acyclic_program(std::mt19937_64& rng, const RandomShape& shape = {});

}  // namespace wlp::test
