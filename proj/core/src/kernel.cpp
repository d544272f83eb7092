#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "wlp/kernel.hpp"

namespace wlp {

// ---- side conditions and rules ----------------------------------------------

SideCondition SideCondition::eq(Term l, Term r) {
  SideCondition c;
  c.kind = Kind::Eq;
  c.left = std::move(l);
  c.right = std::move(r);
  return c;
}

SideCondition SideCondition::neq(Term l, Term r) {
  SideCondition c = eq(std::move(l), std::move(r));
  c.kind = Kind::Neq;
  return c;
}

SideCondition SideCondition::guard(Atom a) {
  SideCondition c;
  c.kind = Kind::Guard;
  c.atom = std::move(a);
  return c;
}

void SideCondition::collect_variables(std::vector<std::string>& out) const {
  if (kind == Kind::Guard) {
    atom.collect_variables(out);
  } else {
    left.collect_variables(out);
    right.collect_variables(out);
  }
}

std::string SideCondition::to_string() const {
  switch (kind) {
    case Kind::Eq: return left.to_string() + " = " + right.to_string();
    case Kind::Neq: return left.to_string() + " != " + right.to_string();
    case Kind::Guard: return atom.to_string();
  }
  return {};
}

std::string_view to_string(Component c) {
  switch (c) {
    case Component::None: return "none";
    case Component::Factor1: return "factor-1";
    case Component::Factor2: return "factor-2";
    case Component::Shared: return "shared";
  }
  return "none";
}

void Rule::collect_variables(std::vector<std::string>& out) const {
  head.collect_variables(out);
  for (const auto& b : body) b.collect_variables(out);
  for (const auto& c : conditions) c.collect_variables(out);
}

std::string Rule::to_string() const {
  std::string out = head.to_string() + " += ";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += " * ";
    out += body[i].to_string();
  }
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    out += i ? ", " : " if ";
    out += conditions[i].to_string();
  }
  return out + ".";
}

// ---- program queries ----------------------------------------------------------

std::set<PredicateKey> Program::predicates() const {
  std::set<PredicateKey> out;
  for (const auto& r : rules) {
    out.insert(r.head.key());
    for (const auto& b : r.body) out.insert(b.key());
    for (const auto& c : r.conditions)
      if (c.kind == SideCondition::Kind::Guard) out.insert(c.atom.key());
  }
  for (const auto& a : axioms) out.insert(a.atom.key());
  for (const auto& k : inputs) out.insert(k);
  return out;
}

std::set<PredicateKey> Program::rule_heads() const {
  std::set<PredicateKey> out;
  for (const auto& r : rules) out.insert(r.head.key());
  return out;
}

std::set<PredicateKey> Program::axiom_predicates() const {
  std::set<PredicateKey> out;
  for (const auto& a : axioms) out.insert(a.atom.key());
  return out;
}

bool Program::defines_by_rules(const PredicateKey& k) const {
  for (const auto& r : rules)
    if (r.head.key() == k) return true;
  return false;
}

bool Program::has_predicate_name(const std::string& name) const {
  for (const auto& k : predicates())
    if (k.name == name) return true;
  for (const auto& p : pairs)
    if (p.product == name) return true;
  return false;
}

bool structurally_equal(const Rule& a, const Rule& b) {
  return a.head == b.head && a.body == b.body && a.conditions == b.conditions && a.origin == b.origin;
}

bool structurally_equal(const Program& a, const Program& b) {
  if (a.rules.size() != b.rules.size() || a.axioms.size() != b.axioms.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i)
    if (!structurally_equal(a.rules[i], b.rules[i])) return false;
  for (std::size_t i = 0; i < a.axioms.size(); ++i)
    if (a.axioms[i].atom != b.axioms[i].atom || a.axioms[i].value != b.axioms[i].value) return false;
  return a.semiring == b.semiring && a.pairs == b.pairs && a.inputs == b.inputs;
}

// ---- unification and substitution -------------------------------------------------

namespace {

bool unify_term_impl(const Term& p, const Term& g, Substitution& s, std::vector<std::string>& added) {
  switch (p.kind()) {
    case Term::Kind::Variable: {
      auto it = s.find(p.name());
      if (it != s.end()) return it->second == g;
      s.emplace(p.name(), g);
      added.push_back(p.name());
      return true;
    }
    case Term::Kind::Symbol:
    case Term::Kind::Int:
    case Term::Kind::Nil:
      return p == g;
    case Term::Kind::Cons:
      return g.kind() == Term::Kind::Cons && unify_term_impl(p.head(), g.head(), s, added) &&
             unify_term_impl(p.tail(), g.tail(), s, added);
    case Term::Kind::Arith: {
      if (!g.is_int()) return false;
      const std::string& base = p.base().name();
      auto it = s.find(base);
      if (it != s.end())
        return it->second.is_int() && it->second.int_value() + p.offset() == g.int_value();
      s.emplace(base, Term::integer(g.int_value() - p.offset()));
      added.push_back(base);
      return true;
    }
  }
  return false;
}

void rollback(Substitution& s, const std::vector<std::string>& added) {
  for (const auto& k : added) s.erase(k);
}

}  // namespace

bool unify_term(const Term& pattern, const Term& ground, Substitution& s) {
  std::vector<std::string> added;
  if (unify_term_impl(pattern, ground, s, added)) return true;
  rollback(s, added);
  return false;
}

bool unify_into(const Atom& pattern, const Atom& fact, Substitution& s) {
  if (pattern.predicate != fact.predicate || pattern.args.size() != fact.args.size()) return false;
  std::vector<std::string> added;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    if (!unify_term_impl(pattern.args[i], fact.args[i], s, added)) {
      rollback(s, added);
      return false;
    }
  }
  return true;
}

std::optional<Substitution> unify(const Atom& pattern, const Atom& fact) {
  Substitution s;
  if (!unify_into(pattern, fact, s)) return std::nullopt;
  return s;
}

Term substitute(const Term& t, const Substitution& s) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = s.find(t.name());
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::Cons:
      return Term::cons(substitute(t.head(), s), substitute(t.tail(), s));
    case Term::Kind::Arith: {
      Term base = substitute(t.base(), s);
      if (base.is_variable()) return Term::arith(base, t.offset());
      if (!base.is_int())
        throw TypeError("arithmetic on non-integer value " + base.to_string() + " in " + t.to_string());
      return Term::integer(base.int_value() + t.offset());
    }
    default:
      return t;
  }
}

Atom substitute(const Atom& a, const Substitution& s) {
  Atom out(a.predicate);
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(substitute(t, s));
  return out;
}

SideCondition substitute(const SideCondition& c, const Substitution& s) {
  SideCondition out = c;
  if (c.kind == SideCondition::Kind::Guard) {
    out.atom = substitute(c.atom, s);
  } else {
    out.left = substitute(c.left, s);
    out.right = substitute(c.right, s);
  }
  return out;
}

ConditionStatus evaluate_condition(const SideCondition& c, Substitution& s) {
  if (c.kind == SideCondition::Kind::Guard) return ConditionStatus::Pending;
  Term l = substitute(c.left, s);
  Term r = substitute(c.right, s);
  bool lg = l.is_ground(), rg = r.is_ground();
  if (c.kind == SideCondition::Kind::Neq) {
    if (!lg || !rg) return ConditionStatus::Pending;
    return l != r ? ConditionStatus::Satisfied : ConditionStatus::Failed;
  }
  if (lg && rg) return l == r ? ConditionStatus::Satisfied : ConditionStatus::Failed;
  if (rg) return unify_term(l, r, s) ? ConditionStatus::Satisfied : ConditionStatus::Failed;
  if (lg) return unify_term(r, l, s) ? ConditionStatus::Satisfied : ConditionStatus::Failed;
  return ConditionStatus::Pending;
}

// ---- validation ----------------------------------------------------------------------

namespace {

bool contains(const std::vector<std::string>& vs, const std::string& v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

bool all_in(const std::vector<std::string>& vs, const std::vector<std::string>& bound) {
  for (const auto& v : vs)
    if (!contains(bound, v)) return false;
  return true;
}

void add_all(std::vector<std::string>& bound, const std::vector<std::string>& vs) {
  for (const auto& v : vs)
    if (!contains(bound, v)) bound.push_back(v);
}

Diagnostic rule_error(std::size_t i, const Rule& r, std::string msg) {
  Diagnostic d;
  d.message = std::move(msg);
  d.span = r.span;
  d.rule = i;
  return d;
}

}  // namespace

std::vector<Diagnostic> validate(const Program& program) {
  std::vector<Diagnostic> out;

  std::map<std::string, std::set<std::size_t>> arities;
  auto note = [&](const PredicateKey& k) { arities[k.name].insert(k.arity); };
  for (const auto& k : program.predicates()) note(k);
  for (const auto& p : program.pairs) {
    note(p.left);
    note(p.right);
  }
  for (const auto& [name, as] : arities) {
    if (as.size() < 2) continue;
    std::string list;
    for (auto a : as) list += (list.empty() ? "" : ", ") + std::to_string(a);
    out.push_back({Severity::Error, "predicate " + name + " is used with arities " + list, {}, {}});
  }

  for (std::size_t i = 0; i < program.rules.size(); ++i) {
    const Rule& r = program.rules[i];
    if (r.body.empty()) {
      out.push_back(rule_error(i, r, "rule body is empty"));
      continue;
    }
    std::vector<std::string> bound;
    for (const auto& b : r.body) b.collect_variables(bound);
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& c : r.conditions) {
        if (c.kind != SideCondition::Kind::Eq) continue;
        std::vector<std::string> lv, rv;
        c.left.collect_variables(lv);
        c.right.collect_variables(rv);
        std::size_t before = bound.size();
        if (all_in(lv, bound)) add_all(bound, rv);
        if (all_in(rv, bound)) add_all(bound, lv);
        grew = grew || bound.size() != before;
      }
    }
    std::vector<std::string> hv;
    r.head.collect_variables(hv);
    for (const auto& v : hv)
      if (!contains(bound, v))
        out.push_back(rule_error(i, r, "head variable " + v + " does not occur in the body (range restriction)"));
    for (const auto& c : r.conditions) {
      std::vector<std::string> cv;
      c.collect_variables(cv);
      for (const auto& v : cv)
        if (!contains(bound, v))
          out.push_back(rule_error(i, r, "variable " + v + " in condition " + c.to_string() + " is never bound"));
    }
  }

  std::set<Atom> seen;
  for (const auto& a : program.axioms) {
    if (!a.atom.is_ground()) {
      out.push_back({Severity::Error, "axiom " + a.atom.to_string() + " is not ground", a.span, {}});
      continue;
    }
    if (!seen.insert(a.atom).second)
      out.push_back({Severity::Error, "duplicate axiom " + a.atom.to_string(), a.span, {}});
    bool nan = false;
    if (const auto* d = std::get_if<double>(&a.value)) nan = *d != *d;
    if (const auto* t = std::get_if<Triple>(&a.value)) nan = t->x != t->x || t->y != t->y || t->z != t->z;
    if (nan) out.push_back({Severity::Error, "axiom " + a.atom.to_string() + " has a NaN value", a.span, {}});
  }

  auto heads = program.rule_heads();
  for (const auto& k : program.axiom_predicates())
    if (heads.count(k) && !program.inputs.count(k))
      out.push_back({Severity::Error,
                     "predicate " + k.to_string() + " has both axioms and rules; declare it with @input", {}, {}});

  auto preds = program.predicates();
  for (const auto& p : program.pairs) {
    if (!preds.count(p.left))
      out.push_back({Severity::Error, "pairing names unknown predicate " + p.left.to_string(), {}, {}});
    if (!preds.count(p.right))
      out.push_back({Severity::Error, "pairing names unknown predicate " + p.right.to_string(), {}, {}});
  }
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    if (d.severity == Severity::Error) return true;
  return false;
}

// ---- arithmetic desugaring -----------------------------------------------------------

namespace {

class FreshNames {
 public:
  explicit FreshNames(const Rule& r) { r.collect_variables(used_); }
  Term next() {
    for (;;) {
      std::string name = "T" + std::to_string(++counter_);
      if (!contains(used_, name)) {
        used_.push_back(name);
        return Term::variable(name);
      }
    }
  }

 private:
  std::vector<std::string> used_;
  int counter_ = 0;
};

Term lift_head(const Term& t, FreshNames& fresh, std::vector<SideCondition>& conds) {
  if (t.kind() == Term::Kind::Arith) {
    Term v = fresh.next();
    conds.push_back(SideCondition::eq(v, t));
    return v;
  }
  if (t.kind() == Term::Kind::Cons)
    return Term::cons(lift_head(t.head(), fresh, conds), lift_head(t.tail(), fresh, conds));
  return t;
}

Term lift_body(const Term& t, FreshNames& fresh, std::vector<SideCondition>& conds) {
  if (t.kind() == Term::Kind::Arith) {
    Term v = fresh.next();
    conds.push_back(SideCondition::eq(t.base(), Term::arith(v, -t.offset())));
    return v;
  }
  if (t.kind() == Term::Kind::Cons)
    return Term::cons(lift_body(t.head(), fresh, conds), lift_body(t.tail(), fresh, conds));
  return t;
}

}  // namespace

Rule desugar_arithmetic(const Rule& rule) {
  Rule out = rule;
  FreshNames fresh(rule);
  std::vector<SideCondition> extra;
  for (auto& b : out.body)
    for (auto& t : b.args) t = lift_body(t, fresh, extra);
  for (auto& t : out.head.args) t = lift_head(t, fresh, extra);
  for (auto& c : extra) out.conditions.push_back(std::move(c));
  return out;
}

Program desugar_arithmetic(const Program& program) {
  Program out = program;
  for (auto& r : out.rules) r = desugar_arithmetic(r);
  return out;
}

// ---- alpha equivalence ----------------------------------------------------------------

namespace {

struct Renaming {
  std::map<std::string, std::string> fwd, bwd;

  bool term(const Term& a, const Term& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Term::Kind::Variable: {
        auto f = fwd.find(a.name());
        auto g = bwd.find(b.name());
        if (f != fwd.end() || g != bwd.end())
          return f != fwd.end() && g != bwd.end() && f->second == b.name() && g->second == a.name();
        fwd[a.name()] = b.name();
        bwd[b.name()] = a.name();
        return true;
      }
      case Term::Kind::Cons:
        return term(a.head(), b.head()) && term(a.tail(), b.tail());
      case Term::Kind::Arith:
        return a.offset() == b.offset() && term(a.base(), b.base());
      default:
        return a == b;
    }
  }

  bool atom(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!term(a.args[i], b.args[i])) return false;
    return true;
  }

  bool condition(const SideCondition& a, const SideCondition& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == SideCondition::Kind::Guard) return atom(a.atom, b.atom);
    Renaming saved = *this;
    if (term(a.left, b.left) && term(a.right, b.right)) return true;
    *this = saved;
    return term(a.left, b.right) && term(a.right, b.left);
  }
};

bool match_conditions(const std::vector<SideCondition>& a, const std::vector<SideCondition>& b,
                      std::vector<bool>& used, std::size_t i, Renaming& ren) {
  if (i == a.size()) return true;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    Renaming saved = ren;
    if (ren.condition(a[i], b[j])) {
      used[j] = true;
      if (match_conditions(a, b, used, i + 1, ren)) return true;
      used[j] = false;
    }
    ren = saved;
  }
  return false;
}

bool match_body(const Rule& a, const Rule& b, bool any_order, std::vector<bool>& used, std::size_t i,
                Renaming& ren) {
  if (i == a.body.size()) {
    std::vector<bool> cused(b.conditions.size(), false);
    Renaming saved = ren;
    if (match_conditions(a.conditions, b.conditions, cused, 0, ren)) return true;
    ren = saved;
    return false;
  }
  for (std::size_t j = 0; j < b.body.size(); ++j) {
    if (used[j] || (!any_order && j != i)) continue;
    Renaming saved = ren;
    if (ren.atom(a.body[i], b.body[j])) {
      used[j] = true;
      if (match_body(a, b, any_order, used, i + 1, ren)) return true;
      used[j] = false;
    }
    ren = saved;
  }
  return false;
}

}  // namespace

bool alpha_equivalent(const Rule& a, const Rule& b, bool ignore_body_order) {
  if (a.body.size() != b.body.size() || a.conditions.size() != b.conditions.size()) return false;
  Renaming ren;
  if (!ren.atom(a.head, b.head)) return false;
  std::vector<bool> used(b.body.size(), false);
  return match_body(a, b, ignore_body_order, used, 0, ren);
}

// ---- predicate renaming ---------------------------------------------------------------

Program rename_predicates(const Program& program, const std::map<std::string, std::string>& names) {
  auto rn = [&](const std::string& n) {
    auto it = names.find(n);
    return it == names.end() ? n : it->second;
  };
  Program out = program;
  for (auto& r : out.rules) {
    r.head.predicate = rn(r.head.predicate);
    for (auto& b : r.body) b.predicate = rn(b.predicate);
    for (auto& c : r.conditions)
      if (c.kind == SideCondition::Kind::Guard) c.atom.predicate = rn(c.atom.predicate);
  }
  for (auto& a : out.axioms) a.atom.predicate = rn(a.atom.predicate);
  std::set<PredicateKey> inputs;
  for (const auto& k : out.inputs) inputs.insert({rn(k.name), k.arity});
  out.inputs = std::move(inputs);
  for (auto& p : out.pairs) {
    p.left.name = rn(p.left.name);
    p.right.name = rn(p.right.name);
    p.product = rn(p.product);
  }
  return out;
}

}  // namespace wlp
