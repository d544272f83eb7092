#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wlp/kernel.hpp"
#include "wlp/semiring.hpp"

namespace wlp {

// A derivation tree. Copies share structure.
class Proof {
 public:
  static Proof leaf(Atom root, Value value, Component provenance = Component::None);
  static Proof step(Atom root, std::size_t rule, std::vector<Proof> children,
                    std::shared_ptr<const RuleProvenance> provenance = nullptr);

  const Atom& root() const { return node_->root; }
  bool is_axiom() const { return !node_->rule.has_value(); }
  std::optional<std::size_t> rule() const { return node_->rule; }  // 0-based rule index
  const std::vector<Proof>& children() const { return node_->children; }
  const Value& axiom_value() const { return node_->value; }
  Component provenance() const;
  const RuleProvenance* rule_provenance() const { return node_->rule_provenance.get(); }
  std::size_t height() const { return node_->height; }

  // Indented tree, one node per line.
  std::string to_string() const;

  friend bool operator==(const Proof& a, const Proof& b);
  friend bool operator<(const Proof& a, const Proof& b);

 private:
  struct Node {
    Atom root;
    std::optional<std::size_t> rule;
    std::vector<Proof> children;
    Value value;
    Component leaf_provenance = Component::None;
    std::shared_ptr<const RuleProvenance> rule_provenance;
    std::size_t height = 1;
  };
  explicit Proof(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct EnumerationLimits {
  std::size_t max_depth = 64;       // proof height; an axiom leaf has height 1
  std::size_t max_count = 100000;   // per atom
};

struct EnumerationResult {
  std::vector<Proof> proofs;
  bool truncated = false;  // a limit cut off further proofs
};

// Ground rule instance found by the enumerator's own naive bottom-up grounding.
struct GroundInstance {
  std::size_t rule;
  Atom head;
  std::vector<Atom> body;

  friend auto operator<=>(const GroundInstance&, const GroundInstance&) = default;
  friend bool operator==(const GroundInstance&, const GroundInstance&) = default;
};

struct Grounding {
  std::set<Atom> atoms;
  std::map<Atom, Value> axioms;
  std::vector<GroundInstance> instances;  // sorted
};

// Naive fixpoint: every rule is matched against every known atom until nothing changes.
// Kept deliberately simple and separate from the solver so it can serve as an oracle.
Grounding ground_program(const Program& program, std::size_t max_rounds = 10000);

// All proofs of atoms matching the goal, by increasing height, in a deterministic order.
// A cycle traversed k times yields distinct proofs for each k.
EnumerationResult enumerate_proofs(const Program& program, const Atom& goal,
                                   const EnumerationLimits& limits = {});

// Product of the leaf values, left to right.
Value proof_value(const Proof& proof, SemiringId semiring);
// Sum of proof values; the semiring zero for an empty list.
Value aggregate(const std::vector<Proof>& proofs, SemiringId semiring);

enum class Factor { Left, Right };

// Split a proof of a product predicate into the proof it pairs from one factor program.
// Rule indices in the result refer to that factor program. Throws UnsupportedError when
// the proof carries no product provenance.
Proof project_proof(const Proof& proof, Factor which);

}  // namespace wlp
