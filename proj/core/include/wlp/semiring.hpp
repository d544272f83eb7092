#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace wlp {

struct Triple {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// Bool for the boolean semiring, double for tropical/viterbi/real, Triple for entropy3.
using Value = std::variant<bool, double, Triple>;

enum class SemiringId { Boolean, Tropical, Viterbi, Real, Entropy3 };

enum class Carrier { Bool, Scalar, Triple };

class Semiring {
 public:
  static const Semiring& get(SemiringId id);

  SemiringId id() const { return id_; }
  std::string_view name() const;
  Carrier carrier() const;
  const Value& zero() const { return zero_; }
  const Value& one() const { return one_; }
  bool idempotent() const;
  // a (+) (a (x) b) = a for every admissible b; enables best-first evaluation.
  bool monotone_superior() const;

  Value plus(const Value& a, const Value& b) const;
  Value times(const Value& a, const Value& b) const;

  bool is_zero(const Value& v) const { return v == zero_; }
  bool accepts(const Value& v) const;  // carrier check only
  // Domain check beyond the carrier (viterbi in [0,1], nonnegative weights, no NaN).
  std::optional<std::string> domain_error(const Value& v) const;
  // Strict priority order used by the agenda: a is strictly preferred to b.
  bool better(const Value& a, const Value& b) const;

 private:
  Semiring(SemiringId id, Value zero, Value one);
  SemiringId id_;
  Value zero_;
  Value one_;
};

std::optional<SemiringId> parse_semiring_id(std::string_view text);
std::string_view semiring_name(SemiringId id);

// Componentwise |a-b| <= tol; infinities equal only themselves; booleans exact.
bool approx_eq(const Value& a, const Value& b, double tol);
// Largest componentwise difference; infinite when exactly one side is infinite.
double distance(const Value& a, const Value& b);

std::string_view carrier_name(const Value& v);

// Shortest text that reads back to the same value: decimal scalars, <x,y,z> triples.
std::string to_string(const Value& v);
std::string format_number(double d);  // round-trip
std::string format_number(double d, int significant);
std::optional<Value> parse_value(std::string_view text);

}  // namespace wlp
