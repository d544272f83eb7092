#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wlp/error.hpp"
#include "wlp/semiring.hpp"

namespace wlp {

class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Symbol, Int, Nil, Cons, Arith };

  Term() = default;  // []

  static Term variable(std::string name);
  static Term symbol(std::string name);
  static Term integer(std::int64_t value);
  static Term nil();
  static Term cons(Term head, Term tail);
  // base+offset. An integer base folds immediately; offset must be nonzero.
  static Term arith(Term base, std::int64_t offset);

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_int() const { return kind_ == Kind::Int; }

  const std::string& name() const { return name_; }
  std::int64_t int_value() const { return number_; }
  std::int64_t offset() const { return number_; }
  const Term& head() const { return children_[0]; }
  const Term& tail() const { return children_[1]; }
  const Term& base() const { return children_[0]; }

  bool is_ground() const;
  void collect_variables(std::vector<std::string>& out) const;
  std::string to_string() const;
  std::size_t hash() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  Kind kind_ = Kind::Nil;
  std::string name_;
  std::int64_t number_ = 0;
  std::vector<Term> children_;
};

struct PredicateKey {
  std::string name;
  std::size_t arity = 0;

  std::string to_string() const;
  friend bool operator==(const PredicateKey&, const PredicateKey&) = default;
  friend auto operator<=>(const PredicateKey&, const PredicateKey&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string pred, std::vector<Term> arguments = {})
      : predicate(std::move(pred)), args(std::move(arguments)) {}

  PredicateKey key() const { return {predicate, args.size()}; }
  bool is_ground() const;
  void collect_variables(std::vector<std::string>& out) const;
  std::string to_string() const;
  std::size_t hash() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};
struct AtomHash {
  std::size_t operator()(const Atom& a) const { return a.hash(); }
};

using Substitution = std::map<std::string, Term>;

std::string to_string(const Substitution& s);

struct SideCondition {
  enum class Kind { Eq, Neq, Guard };

  Kind kind = Kind::Eq;
  Term left;
  Term right;
  Atom atom;  // Guard only: must be present with a nonzero value; contributes one

  static SideCondition eq(Term l, Term r);
  static SideCondition neq(Term l, Term r);
  static SideCondition guard(Atom a);

  void collect_variables(std::vector<std::string>& out) const;
  std::string to_string() const;
  friend bool operator==(const SideCondition&, const SideCondition&) = default;
};

// Which factor of a product program a rule or axiom came from.
enum class Component { None, Factor1, Factor2, Shared };

std::string_view to_string(Component c);

struct RuleProvenance;

struct Rule {
  Atom head;
  std::vector<Atom> body;
  std::vector<SideCondition> conditions;
  std::optional<std::string> origin;
  std::shared_ptr<const RuleProvenance> provenance;  // set by the product transformation
  SourceSpan span;

  void collect_variables(std::vector<std::string>& out) const;  // deduplicated, first-occurrence order
  std::string to_string() const;
};

// Where a body atom of a product rule came from.
struct BodySource {
  enum class Side { Left, Right, Paired };
  Side side = Side::Left;
  std::size_t left = 0;   // index into the left factor rule body
  std::size_t right = 0;  // index into the right factor rule body
};

struct RuleProvenance {
  Component component = Component::None;
  // Factor rules: index of the rule in its factor program.
  std::size_t source_rule = 0;
  // Product rules. An absent side means the factor predicate was supplied by axioms
  // and the corresponding body atom is passed through unchanged.
  std::optional<Rule> left_rule;
  std::optional<Rule> right_rule;
  std::size_t left_index = 0;
  std::size_t right_index = 0;
  std::vector<BodySource> body;
  bool bridging = false;
};

struct Axiom {
  Atom atom;
  Value value;
  Component component = Component::None;
  SourceSpan span;
};

struct PairDirective {
  PredicateKey left;
  PredicateKey right;
  std::string product;

  friend bool operator==(const PairDirective&, const PairDirective&) = default;
};

struct Program {
  std::vector<Rule> rules;
  std::vector<Axiom> axioms;
  std::optional<SemiringId> semiring;
  std::vector<PairDirective> pairs;
  std::set<PredicateKey> inputs;

  // Every predicate mentioned anywhere, sorted.
  std::set<PredicateKey> predicates() const;
  std::set<PredicateKey> rule_heads() const;
  std::set<PredicateKey> axiom_predicates() const;
  bool defines_by_rules(const PredicateKey& k) const;
  bool has_predicate_name(const std::string& name) const;
};

bool structurally_equal(const Rule& a, const Rule& b);
bool structurally_equal(const Program& a, const Program& b);

// Match a pattern against a ground atom. Arithmetic in the pattern binds its base:
// I-1 against 3 binds I to 4.
std::optional<Substitution> unify(const Atom& pattern, const Atom& fact);
bool unify_into(const Atom& pattern, const Atom& fact, Substitution& s);
bool unify_term(const Term& pattern, const Term& ground, Substitution& s);

// Unbound variables are left in place. Arithmetic with a ground base is evaluated;
// a non-integer base raises TypeError.
Term substitute(const Term& t, const Substitution& s);
Atom substitute(const Atom& a, const Substitution& s);
SideCondition substitute(const SideCondition& c, const Substitution& s);

enum class ConditionStatus { Satisfied, Failed, Pending };

// Eq with one unbound side binds it. Guards are left to the caller and report Pending.
ConditionStatus evaluate_condition(const SideCondition& c, Substitution& s);

std::vector<Diagnostic> validate(const Program& program);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

// Head arithmetic becomes a fresh variable with an equality; body arithmetic likewise.
Rule desugar_arithmetic(const Rule& rule);
Program desugar_arithmetic(const Program& program);

// Equal up to a consistent renaming of variables.
bool alpha_equivalent(const Rule& a, const Rule& b, bool ignore_body_order = false);

// Apply a predicate renaming everywhere (rules, axioms, directives).
Program rename_predicates(const Program& program, const std::map<std::string, std::string>& names);

}  // namespace wlp
