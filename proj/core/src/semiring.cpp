#include "wlp/semiring.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "wlp/error.hpp"

namespace wlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 0 * inf = 0, so that zero stays absorbing and 0 ln 0 terms vanish.
double mul0(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

void check_nan(double d) {
  if (std::isnan(d)) throw TypeError("semiring operation produced NaN");
}

Value checked(double d) {
  check_nan(d);
  return d;
}

Value checked(Triple t) {
  check_nan(t.x);
  check_nan(t.y);
  check_nan(t.z);
  return t;
}

[[noreturn]] void mismatch(const Semiring& sr, const Value& a, const Value& b) {
  throw TypeError(std::string("carrier mismatch in ") + std::string(sr.name()) + ": got " +
                  std::string(carrier_name(a)) + " and " + std::string(carrier_name(b)));
}

}  // namespace

Semiring::Semiring(SemiringId id, Value zero, Value one)
    : id_(id), zero_(std::move(zero)), one_(std::move(one)) {}

const Semiring& Semiring::get(SemiringId id) {
  static const Semiring boolean(SemiringId::Boolean, false, true);
  static const Semiring tropical(SemiringId::Tropical, kInf, 0.0);
  static const Semiring viterbi(SemiringId::Viterbi, 0.0, 1.0);
  static const Semiring real(SemiringId::Real, 0.0, 1.0);
  static const Semiring entropy3(SemiringId::Entropy3, Triple{0, 0, 0}, Triple{1, 0, 1});
  switch (id) {
    case SemiringId::Boolean: return boolean;
    case SemiringId::Tropical: return tropical;
    case SemiringId::Viterbi: return viterbi;
    case SemiringId::Real: return real;
    case SemiringId::Entropy3: return entropy3;
  }
  return real;
}

std::string_view Semiring::name() const { return semiring_name(id_); }

Carrier Semiring::carrier() const {
  switch (id_) {
    case SemiringId::Boolean: return Carrier::Bool;
    case SemiringId::Entropy3: return Carrier::Triple;
    default: return Carrier::Scalar;
  }
}

bool Semiring::idempotent() const {
  return id_ == SemiringId::Boolean || id_ == SemiringId::Tropical || id_ == SemiringId::Viterbi;
}

bool Semiring::monotone_superior() const { return idempotent(); }

bool Semiring::accepts(const Value& v) const {
  switch (carrier()) {
    case Carrier::Bool: return std::holds_alternative<bool>(v);
    case Carrier::Scalar: return std::holds_alternative<double>(v);
    case Carrier::Triple: return std::holds_alternative<Triple>(v);
  }
  return false;
}

std::optional<std::string> Semiring::domain_error(const Value& v) const {
  if (!accepts(v))
    return std::string(name()) + " expects " +
           (carrier() == Carrier::Bool ? "true/false" : carrier() == Carrier::Scalar ? "a number" : "a triple") +
           ", got " + std::string(carrier_name(v));
  if (const auto* t = std::get_if<Triple>(&v)) {
    if (std::isnan(t->x) || std::isnan(t->y) || std::isnan(t->z)) return std::string("NaN in triple");
    return std::nullopt;
  }
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::isnan(*d)) return std::string("NaN weight");
    if (id_ == SemiringId::Viterbi && (*d < 0.0 || *d > 1.0))
      return "viterbi weight " + to_string(v) + " outside [0,1]";
    if (*d < 0.0) return std::string(name()) + " weight " + to_string(v) + " is negative";
  }
  return std::nullopt;
}

Value Semiring::plus(const Value& a, const Value& b) const {
  if (!accepts(a) || !accepts(b)) mismatch(*this, a, b);
  switch (id_) {
    case SemiringId::Boolean: return std::get<bool>(a) || std::get<bool>(b);
    case SemiringId::Tropical: return checked(std::min(std::get<double>(a), std::get<double>(b)));
    case SemiringId::Viterbi: return checked(std::max(std::get<double>(a), std::get<double>(b)));
    case SemiringId::Real: return checked(std::get<double>(a) + std::get<double>(b));
    case SemiringId::Entropy3: {
      const auto& p = std::get<Triple>(a);
      const auto& q = std::get<Triple>(b);
      return checked(Triple{p.x + q.x, p.y + q.y, p.z + q.z});
    }
  }
  return zero_;
}

Value Semiring::times(const Value& a, const Value& b) const {
  if (!accepts(a) || !accepts(b)) mismatch(*this, a, b);
  switch (id_) {
    case SemiringId::Boolean: return std::get<bool>(a) && std::get<bool>(b);
    case SemiringId::Tropical: {
      double x = std::get<double>(a), y = std::get<double>(b);
      if (x == kInf || y == kInf) return kInf;
      return checked(x + y);
    }
    case SemiringId::Viterbi:
    case SemiringId::Real: return checked(mul0(std::get<double>(a), std::get<double>(b)));
    case SemiringId::Entropy3: {
      const auto& p = std::get<Triple>(a);
      const auto& q = std::get<Triple>(b);
      return checked(Triple{mul0(p.x, q.x), mul0(p.x, q.y) + mul0(q.x, p.y), mul0(p.z, q.z)});
    }
  }
  return zero_;
}

bool Semiring::better(const Value& a, const Value& b) const {
  switch (id_) {
    case SemiringId::Boolean: return std::get<bool>(a) && !std::get<bool>(b);
    case SemiringId::Tropical: return std::get<double>(a) < std::get<double>(b);
    case SemiringId::Viterbi: return std::get<double>(a) > std::get<double>(b);
    default: return false;
  }
}

std::optional<SemiringId> parse_semiring_id(std::string_view text) {
  if (text == "boolean") return SemiringId::Boolean;
  if (text == "tropical") return SemiringId::Tropical;
  if (text == "viterbi") return SemiringId::Viterbi;
  if (text == "real") return SemiringId::Real;
  if (text == "entropy3") return SemiringId::Entropy3;
  return std::nullopt;
}

std::string_view semiring_name(SemiringId id) {
  switch (id) {
    case SemiringId::Boolean: return "boolean";
    case SemiringId::Tropical: return "tropical";
    case SemiringId::Viterbi: return "viterbi";
    case SemiringId::Real: return "real";
    case SemiringId::Entropy3: return "entropy3";
  }
  return "?";
}

namespace {

bool scalar_close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol;
}

double scalar_distance(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return kInf;
  return std::fabs(a - b);
}

}  // namespace

bool approx_eq(const Value& a, const Value& b, double tol) {
  if (a.index() != b.index()) return false;
  if (const auto* p = std::get_if<bool>(&a)) return *p == std::get<bool>(b);
  if (const auto* p = std::get_if<double>(&a)) return scalar_close(*p, std::get<double>(b), tol);
  const auto& s = std::get<Triple>(a);
  const auto& t = std::get<Triple>(b);
  return scalar_close(s.x, t.x, tol) && scalar_close(s.y, t.y, tol) && scalar_close(s.z, t.z, tol);
}

double distance(const Value& a, const Value& b) {
  if (a.index() != b.index()) return kInf;
  if (const auto* p = std::get_if<bool>(&a)) return *p == std::get<bool>(b) ? 0.0 : 1.0;
  if (const auto* p = std::get_if<double>(&a)) return scalar_distance(*p, std::get<double>(b));
  const auto& s = std::get<Triple>(a);
  const auto& t = std::get<Triple>(b);
  return std::max({scalar_distance(s.x, t.x), scalar_distance(s.y, t.y), scalar_distance(s.z, t.z)});
}

std::string_view carrier_name(const Value& v) {
  switch (v.index()) {
    case 0: return "boolean";
    case 1: return "scalar";
    default: return "triple";
  }
}

std::string format_number(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  if (d == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

std::string format_number(double d, int significant) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  if (d == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, d);
  return buf;
}

std::string to_string(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  const auto& t = std::get<Triple>(v);
  return "<" + format_number(t.x) + "," + format_number(t.y) + "," + format_number(t.z) + ">";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::string buf(s);
  if (buf == "inf" || buf == "+inf") return kInf;
  if (buf == "-inf") return -kInf;
  for (char c : buf)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' || c == '+' ||
          c == '-'))
      return std::nullopt;
  char* end = nullptr;
  double d = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) return std::nullopt;
  return d;
}

}  // namespace

std::optional<Value> parse_value(std::string_view text) {
  text = trim(text);
  if (text == "true") return Value{true};
  if (text == "false") return Value{false};
  if (!text.empty() && text.front() == '<') {
    if (text.back() != '>') return std::nullopt;
    std::string_view inner = text.substr(1, text.size() - 2);
    double parts[3];
    for (int i = 0; i < 3; ++i) {
      auto comma = inner.find(',');
      if ((i < 2) != (comma != std::string_view::npos)) return std::nullopt;
      auto d = parse_double(i < 2 ? inner.substr(0, comma) : inner);
      if (!d) return std::nullopt;
      parts[i] = *d;
      if (i < 2) inner.remove_prefix(comma + 1);
    }
    return Value{Triple{parts[0], parts[1], parts[2]}};
  }
  if (auto d = parse_double(text)) return Value{*d};
  return std::nullopt;
}

}  // namespace wlp
