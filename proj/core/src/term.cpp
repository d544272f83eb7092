#include <cctype>
#include <functional>
#include <stdexcept>

#include "wlp/kernel.hpp"

namespace wlp {

std::string Diagnostic::to_string() const {
  std::string out;
  if (span.known()) out += std::to_string(span.line) + ":" + std::to_string(span.column) + ": ";
  out += severity == Severity::Error ? "error: " : "warning: ";
  if (rule) out += "rule " + std::to_string(*rule + 1) + ": ";
  out += message;
  return out;
}

ParseError::ParseError(const std::string& message, SourceSpan span)
    : Error(span.known() ? "line " + std::to_string(span.line) + ", column " +
                               std::to_string(span.column) + ": " + message
                         : message),
      span_(span),
      detail_(message) {}

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out = "program failed validation";
  for (const auto& d : ds) out += "\n  " + d.to_string();
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

DivergenceError::DivergenceError(const std::string& message, std::size_t iterations, double residual)
    : Error(message), iterations_(iterations), residual_(residual) {}

Term Term::variable(std::string name) {
  if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0])))
    throw std::invalid_argument("variable names start with an uppercase letter: '" + name + "'");
  Term t;
  t.kind_ = Kind::Variable;
  t.name_ = std::move(name);
  return t;
}

Term Term::symbol(std::string name) {
  Term t;
  t.kind_ = Kind::Symbol;
  t.name_ = std::move(name);
  return t;
}

Term Term::integer(std::int64_t value) {
  Term t;
  t.kind_ = Kind::Int;
  t.number_ = value;
  return t;
}

Term Term::nil() { return Term{}; }

Term Term::cons(Term head, Term tail) {
  Term t;
  t.kind_ = Kind::Cons;
  t.children_.reserve(2);
  t.children_.push_back(std::move(head));
  t.children_.push_back(std::move(tail));
  return t;
}

Term Term::arith(Term base, std::int64_t offset) {
  if (base.kind_ == Kind::Int) return integer(base.number_ + offset);
  if (base.kind_ != Kind::Variable)
    throw std::invalid_argument("arithmetic base must be a variable or an integer");
  if (offset == 0) return base;
  Term t;
  t.kind_ = Kind::Arith;
  t.number_ = offset;
  t.children_.push_back(std::move(base));
  return t;
}

bool Term::is_ground() const {
  switch (kind_) {
    case Kind::Variable:
    case Kind::Arith:
      return false;
    case Kind::Cons:
      return children_[0].is_ground() && children_[1].is_ground();
    default:
      return true;
  }
}

void Term::collect_variables(std::vector<std::string>& out) const {
  switch (kind_) {
    case Kind::Variable:
      for (const auto& v : out)
        if (v == name_) return;
      out.push_back(name_);
      return;
    case Kind::Arith:
      children_[0].collect_variables(out);
      return;
    case Kind::Cons:
      children_[0].collect_variables(out);
      children_[1].collect_variables(out);
      return;
    default:
      return;
  }
}

namespace {

bool is_keyword(const std::string& s) {
  return s == "if" || s == "as" || s == "true" || s == "false" || s == "inf" || s == "nan";
}

bool bare_symbol(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !is_keyword(s);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

std::string Term::to_string() const {
  switch (kind_) {
    case Kind::Variable:
      return name_;
    case Kind::Symbol:
      return bare_symbol(name_) ? name_ : quote(name_);
    case Kind::Int:
      return std::to_string(number_);
    case Kind::Nil:
      return "[]";
    case Kind::Cons: {
      std::string h = children_[0].to_string();
      if (children_[0].kind_ == Kind::Cons) h = "(" + h + ")";
      return h + "::" + children_[1].to_string();
    }
    case Kind::Arith:
      return children_[0].to_string() + (number_ < 0 ? "-" : "+") +
             std::to_string(number_ < 0 ? -number_ : number_);
  }
  return {};
}

std::size_t Term::hash() const {
  std::size_t seed = static_cast<std::size_t>(kind_);
  switch (kind_) {
    case Kind::Variable:
    case Kind::Symbol:
      hash_mix(seed, std::hash<std::string>{}(name_));
      break;
    case Kind::Int:
    case Kind::Arith:
      hash_mix(seed, std::hash<std::int64_t>{}(number_));
      break;
    default:
      break;
  }
  for (const auto& c : children_) hash_mix(seed, c.hash());
  return seed;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Term::Kind::Variable:
    case Term::Kind::Symbol:
      return a.name_ == b.name_;
    case Term::Kind::Int:
      return a.number_ == b.number_;
    case Term::Kind::Nil:
      return true;
    case Term::Kind::Cons:
      return a.children_[0] == b.children_[0] && a.children_[1] == b.children_[1];
    case Term::Kind::Arith:
      return a.number_ == b.number_ && a.children_[0] == b.children_[0];
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  switch (a.kind_) {
    case Term::Kind::Variable:
    case Term::Kind::Symbol:
      return a.name_ <=> b.name_;
    case Term::Kind::Int:
      return a.number_ <=> b.number_;
    case Term::Kind::Nil:
      return std::strong_ordering::equal;
    case Term::Kind::Cons:
      if (auto c = a.children_[0] <=> b.children_[0]; c != 0) return c;
      return a.children_[1] <=> b.children_[1];
    case Term::Kind::Arith:
      if (auto c = a.children_[0] <=> b.children_[0]; c != 0) return c;
      return a.number_ <=> b.number_;
  }
  return std::strong_ordering::equal;
}

std::string PredicateKey::to_string() const { return name + "/" + std::to_string(arity); }

bool Atom::is_ground() const {
  for (const auto& t : args)
    if (!t.is_ground()) return false;
  return true;
}

void Atom::collect_variables(std::vector<std::string>& out) const {
  for (const auto& t : args) t.collect_variables(out);
}

std::string Atom::to_string() const {
  if (args.empty()) return predicate;
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].to_string();
  }
  return out + ")";
}

std::size_t Atom::hash() const {
  std::size_t seed = std::hash<std::string>{}(predicate);
  for (const auto& t : args) hash_mix(seed, t.hash());
  return seed;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                b.args.end());
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : s) {
    if (!first) out += ", ";
    first = false;
    out += k + "=" + v.to_string();
  }
  return out + "}";
}

}  // namespace wlp
