#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "wlp/kernel.hpp"
#include "wlp/semiring.hpp"

namespace wlp {

enum class SolveMode { Auto, Priority, Iterate };

struct ConvergenceReport {
  SolveMode mode = SolveMode::Auto;  // the mode actually used
  std::size_t iterations = 0;        // sweeps, or agenda pops in priority mode
  double residual = 0.0;
  std::size_t grounding_rounds = 0;
};

class Chart {
 public:
  Chart() = default;
  explicit Chart(SemiringId id) : semiring_(id) {}

  SemiringId semiring() const { return semiring_; }
  const ConvergenceReport& report() const { return report_; }
  ConvergenceReport& report() { return report_; }

  // Zero values are never stored.
  void set(const Atom& atom, const Value& value);
  const Value* find(const Atom& atom) const;
  // The stored value, or the semiring zero for underivable atoms.
  Value value_of(const Atom& atom) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<Atom, Value>& entries() const { return entries_; }
  // Entries ordered by the text of the atom.
  std::vector<std::pair<Atom, Value>> sorted_entries() const;

 private:
  SemiringId semiring_ = SemiringId::Real;
  ConvergenceReport report_;
  std::map<Atom, Value> entries_;
};

struct SolveOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 10000;
  SolveMode mode = SolveMode::Auto;
  // Called after every sweep in iterate mode with the current value of every atom.
  std::function<void(std::size_t sweep, std::span<const Atom> atoms, std::span<const Value> values)> on_sweep;
};

// Solve the program in the given semiring. Validation errors and carrier or domain
// problems in axiom values raise ValidationError; non-convergence raises DivergenceError.
Chart solve(const Program& program, SemiringId semiring, const SolveOptions& options = {});

// Carrier and domain diagnostics for the axiom values of a program.
std::vector<Diagnostic> check_axiom_values(const Program& program, SemiringId semiring);

struct QueryAnswer {
  Substitution bindings;
  Atom atom;
  Value value;
};

// Chart entries matching a pattern, ordered by atom text.
std::vector<QueryAnswer> query(const Chart& chart, const Atom& pattern);

std::string_view mode_name(SolveMode m);

}  // namespace wlp
