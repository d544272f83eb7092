#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wlp/kernel.hpp"
#include "wlp/product.hpp"
#include "wlp/semiring.hpp"
#include "wlp/solver.hpp"

namespace wlp {

struct EntropyReport {
  double w_prime = 0.0;  // path sum of the goal
  double h_prime = 0.0;  // -sum w ln w over goal proofs
  double entropy = 0.0;  // of the normalized proof distribution, in nats
};

struct KlReport {
  double p_bar = 0.0;
  double q_bar = 0.0;
  double r_bar = 0.0;   // sum p ln q over goal proofs
  double ce_pq = 0.0;   // sum p ln q over the normalized distributions
  double ce_pp = 0.0;
  double kl = 0.0;
  std::optional<double> generalized_kl;
};

// <w, -w ln w, 0>, with 0 ln 0 = 0.
Triple entropy_weight(double w);
// <p, p ln q, q>, with 0 ln 0 = 0 and p ln 0 = -inf.
Triple kl_weight(double p, double q);

// Replace every real axiom value w by entropy_weight(w). Negative weights are rejected.
Program lift_entropy(const Program& program);

// Solve the lifted program and read the entropy of the proof distribution of every atom
// matching the goal (their triples are summed).
EntropyReport entropy_of_goal(const Program& program, const Atom& goal, const SolveOptions& options = {});

// The rules of `program` with axioms weighted by both p and q: <p(a), p(a) ln q(a), q(a)>.
// Atoms missing from one weighting get weight 0 there. Axioms already in the program are
// dropped in favour of the two weightings.
Program lift_kl(const Program& program, const std::vector<Axiom>& p, const std::vector<Axiom>& q);

// As lift_kl with <p, p ln(p/q), q>, so the goal's second component is sum p ln(p/q).
Program lift_generalized_kl(const Program& program, const std::vector<Axiom>& p, const std::vector<Axiom>& q);

// Two independent entropy-semiring solves (p against q, then p against itself), run
// concurrently. kl = ce_pp - ce_pq; +inf when q misses a proof that p supports.
KlReport kl_divergence(const Program& program, const std::vector<Axiom>& p, const std::vector<Axiom>& q,
                       const Atom& goal, const SolveOptions& options = {}, bool generalized = false);

// Factor axiom lifts for KL through a product: the left factor gets <p, 0, 1> and the
// right factor <1, ln q, q>, so a paired proof is worth <p, p ln q, q>.
Program lift_factor_p(const Program& program);
Program lift_factor_q(const Program& program);

struct ProjectionGoals {
  Atom left;     // goal of the p program
  Atom right;    // goal of the q program
  Atom product;  // goal of the constrained product
};

using ProgramPass = std::function<Program(const Program&)>;

// KL between the proof distributions of two programs over a shared interpretation
// space. The caller supplies the pairing and the constraint passes that make product
// proofs correspond one-to-one with paired factor proofs.
KlReport projection_kl(const Program& p_program, const Program& q_program, const PairingSpec& spec,
                       const ProjectionGoals& goals, const ProgramPass& constrain,
                       const SolveOptions& options = {});

}  // namespace wlp
