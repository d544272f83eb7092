#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wlp/kernel.hpp"

namespace wlp {

enum class AlignmentPolicy { LeftToRight, Crossed, Explicit };

std::string_view policy_name(AlignmentPolicy p);

struct PredicatePair {
  PredicateKey left;
  PredicateKey right;
  std::string product;
};

// Premise alignment for one (left rule, right rule) combination. Indices are 0-based
// positions in the left and right rule bodies.
struct ExplicitAlignment {
  std::size_t left_rule = 0;
  std::size_t right_rule = 0;
  std::vector<std::pair<std::size_t, std::size_t>> premises;
};

struct PairingSpec {
  std::vector<PredicatePair> pairs;
  AlignmentPolicy policy = AlignmentPolicy::LeftToRight;
  std::vector<ExplicitAlignment> alignments;
};

// The product of two programs with disjoint predicate names (shared input predicates
// with identical facts are allowed). For each pair (p, q), every p-rule is combined with
// every q-rule into a rule for the product predicate; paired antecedents inside the
// combined body are folded into product atoms. Left variables get the suffix 1, right
// variables the suffix 2. Factor rules and axioms are kept.
Program product_transform(const Program& left, const Program& right, const PairingSpec& spec);

struct NaturalPairing {
  Program left;   // predicates suffixed with 1
  Program right;  // predicates suffixed with 2
  PairingSpec spec;
};

// Rename every predicate apart (except `shared`) and pair the rule-defined predicates
// the two programs have in common. Product names are name + "_12".
NaturalPairing natural_pairing(const Program& p, const Program& q, const std::set<PredicateKey>& shared = {});

struct RuleSelector {
  std::set<std::size_t> rules;             // 0-based indices
  std::set<std::string> head_predicates;   // drop every rule concluding one of these
};

Program drop_rules(const Program& program, const RuleSelector& selector);
// Keep only the selected rules; the complement of drop_rules.
Program keep_rules(const Program& program, const std::set<std::size_t>& rules);

Program add_equality_constraint(const Program& program, std::size_t rule,
                                const std::vector<std::pair<std::string, std::string>>& equalities);

// Remove argument position `second` of each (first, second) pair (0-based) from the
// predicate everywhere. Refused unless every occurrence provably has equal arguments there.
Program collapse_arguments(const Program& program, const PredicateKey& predicate,
                           const std::vector<std::pair<std::size_t, std::size_t>>& positions);

// Drop the single bridging rule defining a product predicate and declare it an input,
// so its values can be supplied directly.
Program generalize_axioms(const Program& program, const std::string& predicate);

// Guard every rule concluding `predicate` with witness(head args at positions).
// Positions are 0-based. The witness predicate becomes an input.
Program fix_structure(const Program& program, const std::string& predicate, const std::string& witness,
                      const std::vector<std::size_t>& positions);

}  // namespace wlp
