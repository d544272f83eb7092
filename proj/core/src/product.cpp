#include "wlp/product.hpp"

#include <algorithm>
#include <functional>

namespace wlp {

std::string_view policy_name(AlignmentPolicy p) {
  switch (p) {
    case AlignmentPolicy::LeftToRight: return "left_to_right";
    case AlignmentPolicy::Crossed: return "crossed";
    case AlignmentPolicy::Explicit: return "explicit";
  }
  return "left_to_right";
}

namespace {

Term rename_term(const Term& t, const std::string& suffix) {
  switch (t.kind()) {
    case Term::Kind::Variable: return Term::variable(t.name() + suffix);
    case Term::Kind::Cons: return Term::cons(rename_term(t.head(), suffix), rename_term(t.tail(), suffix));
    case Term::Kind::Arith: return Term::arith(rename_term(t.base(), suffix), t.offset());
    default: return t;
  }
}

Atom rename_atom(const Atom& a, const std::string& suffix) {
  Atom out(a.predicate);
  for (const auto& t : a.args) out.args.push_back(rename_term(t, suffix));
  return out;
}

Rule rename_rule(const Rule& r, const std::string& suffix) {
  Rule out;
  out.head = rename_atom(r.head, suffix);
  for (const auto& b : r.body) out.body.push_back(rename_atom(b, suffix));
  for (const auto& c : r.conditions) {
    SideCondition d = c;
    if (c.kind == SideCondition::Kind::Guard) {
      d.atom = rename_atom(c.atom, suffix);
    } else {
      d.left = rename_term(c.left, suffix);
      d.right = rename_term(c.right, suffix);
    }
    out.conditions.push_back(std::move(d));
  }
  return out;
}

Atom fresh_atom(const PredicateKey& k, const std::string& stem) {
  Atom a(k.name);
  for (std::size_t i = 1; i <= k.arity; ++i) a.args.push_back(Term::variable(stem + std::to_string(i)));
  return a;
}

// A definition of a factor predicate: a rule, or (when absent) its axioms passed through.
struct Definition {
  std::optional<std::size_t> rule;
};

std::vector<Definition> definitions(const Program& p, const PredicateKey& k, const char* side) {
  std::vector<Definition> out;
  for (std::size_t i = 0; i < p.rules.size(); ++i)
    if (p.rules[i].head.key() == k) out.push_back({i});
  if (out.empty()) {
    out.push_back({std::nullopt});
  } else {
    for (const auto& a : p.axioms)
      if (a.atom.key() == k)
        throw TransformError(std::string("cannot pair ") + k.to_string() + ": the " + side +
                             " program defines it by both rules and axioms");
  }
  return out;
}

struct BodyItem {
  Atom atom;
  BodySource source;
};

std::string rule_label(const std::optional<std::size_t>& r) {
  return r ? "rule " + std::to_string(*r + 1) : std::string("axioms");
}

class ProductBuilder {
 public:
  ProductBuilder(const Program& left, const Program& right, const PairingSpec& spec)
      : left_(left), right_(right), spec_(spec) {}

  Program build() {
    check();
    Program out;
    merge_factors(out);
    for (const auto& pair : spec_.pairs) emit_pair(pair, out);
    return out;
  }

 private:
  void check() {
    auto lp = left_.predicates();
    auto rp = right_.predicates();
    std::set<std::string> names;
    for (const auto& k : lp) names.insert(k.name);
    for (const auto& k : rp) names.insert(k.name);
    std::set<std::string> products;
    std::set<PredicateKey> used_left, used_right;
    for (const auto& p : spec_.pairs) {
      if (!lp.count(p.left)) throw TransformError("left program has no predicate " + p.left.to_string());
      if (!rp.count(p.right)) throw TransformError("right program has no predicate " + p.right.to_string());
      if (names.count(p.product) || left_.has_predicate_name(p.product) || right_.has_predicate_name(p.product))
        throw TransformError("product name " + p.product + " clashes with an existing predicate");
      if (!products.insert(p.product).second)
        throw TransformError("product name " + p.product + " is used for two pairs");
      if (!used_left.insert(p.left).second || !used_right.insert(p.right).second)
        throw TransformError("a predicate may appear in only one pair");
    }
    for (const auto& k : lp) {
      bool clash = false;
      for (const auto& j : rp) clash = clash || j.name == k.name;
      if (!clash) continue;
      if (left_.defines_by_rules(k) || right_.defines_by_rules(k))
        throw TransformError("predicate " + k.name + " is defined in both programs; rename them apart first");
    }
    if (left_.semiring && right_.semiring && *left_.semiring != *right_.semiring)
      throw TransformError("factor programs declare different semirings");
  }

  void merge_factors(Program& out) {
    for (std::size_t i = 0; i < left_.rules.size(); ++i) {
      Rule r = left_.rules[i];
      auto prov = std::make_shared<RuleProvenance>();
      prov->component = Component::Factor1;
      prov->source_rule = i;
      r.provenance = prov;
      out.rules.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < right_.rules.size(); ++i) {
      Rule r = right_.rules[i];
      auto prov = std::make_shared<RuleProvenance>();
      prov->component = Component::Factor2;
      prov->source_rule = i;
      r.provenance = prov;
      out.rules.push_back(std::move(r));
    }
    std::map<Atom, std::size_t> seen;
    auto add = [&](const Axiom& a, Component c) {
      auto it = seen.find(a.atom);
      if (it != seen.end()) {
        if (out.axioms[it->second].value != a.value)
          throw TransformError("shared axiom " + a.atom.to_string() + " has different values in the two programs");
        out.axioms[it->second].component = Component::Shared;
        return;
      }
      Axiom b = a;
      b.component = c;
      seen.emplace(a.atom, out.axioms.size());
      out.axioms.push_back(std::move(b));
    };
    for (const auto& a : left_.axioms) add(a, Component::Factor1);
    for (const auto& a : right_.axioms) add(a, Component::Factor2);
    out.semiring = left_.semiring ? left_.semiring : right_.semiring;
    out.inputs = left_.inputs;
    out.inputs.insert(right_.inputs.begin(), right_.inputs.end());
    out.pairs = left_.pairs;
    out.pairs.insert(out.pairs.end(), right_.pairs.begin(), right_.pairs.end());
    for (const auto& p : spec_.pairs) out.pairs.push_back({p.left, p.right, p.product});
  }

  void emit_pair(const PredicatePair& pair, Program& out) {
    auto ldefs = definitions(left_, pair.left, "left");
    auto rdefs = definitions(right_, pair.right, "right");
    if (!ldefs[0].rule && !rdefs[0].rule) {
      Rule r;
      Atom w = fresh_atom(pair.left, "W");
      Atom x = fresh_atom(pair.right, "X");
      r.head.predicate = pair.product;
      r.head.args = w.args;
      r.head.args.insert(r.head.args.end(), x.args.begin(), x.args.end());
      r.body = {w, x};
      r.origin = pair.product + " bridges axioms of " + pair.left.to_string() + " and " + pair.right.to_string();
      auto prov = std::make_shared<RuleProvenance>();
      prov->component = Component::Shared;
      prov->bridging = true;
      prov->body = {{BodySource::Side::Left, 0, 0}, {BodySource::Side::Right, 0, 0}};
      r.provenance = prov;
      out.rules.push_back(std::move(r));
      return;
    }
    for (const auto& ld : ldefs)
      for (const auto& rd : rdefs) out.rules.push_back(combine(pair, ld, rd));
  }

  Rule combine(const PredicatePair& pair, const Definition& ld, const Definition& rd) {
    Rule l = ld.rule ? rename_rule(left_.rules[*ld.rule], "1")
                     : Rule{fresh_atom(pair.left, "W1_"), {fresh_atom(pair.left, "W1_")}, {}, {}, {}, {}};
    Rule r = rd.rule ? rename_rule(right_.rules[*rd.rule], "2")
                     : Rule{fresh_atom(pair.right, "X2_"), {fresh_atom(pair.right, "X2_")}, {}, {}, {}, {}};

    Rule out;
    out.head.predicate = pair.product;
    out.head.args = l.head.args;
    out.head.args.insert(out.head.args.end(), r.head.args.begin(), r.head.args.end());

    std::vector<BodyItem> body;
    for (std::size_t i = 0; i < l.body.size(); ++i) body.push_back({l.body[i], {BodySource::Side::Left, i, 0}});
    for (std::size_t j = 0; j < r.body.size(); ++j) body.push_back({r.body[j], {BodySource::Side::Right, 0, j}});
    for (const auto& p : spec_.pairs) fold(p, ld, rd, body);

    auto prov = std::make_shared<RuleProvenance>();
    prov->component = Component::Shared;
    if (ld.rule) {
      prov->left_rule = left_.rules[*ld.rule];
      prov->left_index = *ld.rule;
    }
    if (rd.rule) {
      prov->right_rule = right_.rules[*rd.rule];
      prov->right_index = *rd.rule;
    }
    for (auto& item : body) {
      out.body.push_back(std::move(item.atom));
      prov->body.push_back(item.source);
    }
    out.conditions = l.conditions;
    out.conditions.insert(out.conditions.end(), r.conditions.begin(), r.conditions.end());
    out.origin = pair.product + " from " + pair.left.name + " " + rule_label(ld.rule) + " x " + pair.right.name +
                 " " + rule_label(rd.rule) + " (" + std::string(policy_name(spec_.policy)) + ")";
    out.provenance = prov;
    return out;
  }

  void fold(const PredicatePair& p, const Definition& ld, const Definition& rd, std::vector<BodyItem>& body) {
    std::vector<std::size_t> ls, rs;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i].source.side == BodySource::Side::Paired) continue;
      if (body[i].atom.key() == p.left && body[i].source.side == BodySource::Side::Left) ls.push_back(i);
      if (body[i].atom.key() == p.right && body[i].source.side == BodySource::Side::Right) rs.push_back(i);
    }
    if (ls.empty() || rs.empty()) return;
    bool ambiguous = ls.size() > 1 || rs.size() > 1;
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    auto in_order = [&] {
      for (std::size_t i = 0; i < std::min(ls.size(), rs.size()); ++i) matches.emplace_back(ls[i], rs[i]);
    };
    if (!ambiguous || spec_.policy == AlignmentPolicy::LeftToRight) {
      in_order();
    } else if (spec_.policy == AlignmentPolicy::Crossed) {
      if (ls.size() >= 2 && rs.size() >= 2) {
        if (ls.size() != 2 || rs.size() != 2)
          throw TransformError("crossed alignment needs exactly two " + p.left.to_string() + " and two " +
                               p.right.to_string() + " antecedents");
        matches = {{ls[0], rs[1]}, {ls[1], rs[0]}};
      } else {
        in_order();
      }
    } else {
      const ExplicitAlignment* found = nullptr;
      for (const auto& a : spec_.alignments)
        if (ld.rule && rd.rule && a.left_rule == *ld.rule && a.right_rule == *rd.rule) found = &a;
      if (!found)
        throw TransformError("pairing " + p.left.to_string() + " with " + p.right.to_string() + " in " +
                             p.product + " from left " + rule_label(ld.rule) + " and right " +
                             rule_label(rd.rule) + " is ambiguous and no explicit alignment covers it");
      for (const auto& [li, rj] : found->premises) {
        std::optional<std::size_t> a, b;
        for (std::size_t i : ls)
          if (body[i].source.left == li) a = i;
        for (std::size_t j : rs)
          if (body[j].source.right == rj) b = j;
        if (a && b) matches.emplace_back(*a, *b);
      }
    }
    std::set<std::size_t> removed;
    for (const auto& [i, j] : matches) {
      Atom folded(p.product, body[i].atom.args);
      folded.args.insert(folded.args.end(), body[j].atom.args.begin(), body[j].atom.args.end());
      body[i] = {std::move(folded), {BodySource::Side::Paired, body[i].source.left, body[j].source.right}};
      removed.insert(j);
    }
    std::vector<BodyItem> kept;
    for (std::size_t i = 0; i < body.size(); ++i)
      if (!removed.count(i)) kept.push_back(std::move(body[i]));
    body = std::move(kept);
  }

  const Program& left_;
  const Program& right_;
  const PairingSpec& spec_;
};

}  // namespace

Program product_transform(const Program& left, const Program& right, const PairingSpec& spec) {
  return ProductBuilder(left, right, spec).build();
}

NaturalPairing natural_pairing(const Program& p, const Program& q, const std::set<PredicateKey>& shared) {
  auto renaming = [&](const Program& prog, const std::string& suffix) {
    std::map<std::string, std::string> names;
    for (const auto& k : prog.predicates())
      if (!shared.count(k)) names[k.name] = k.name + suffix;
    return names;
  };
  NaturalPairing out;
  out.left = rename_predicates(p, renaming(p, "1"));
  out.right = rename_predicates(q, renaming(q, "2"));
  // Same name pairs even across arities (a path over states with a path over state pairs).
  std::map<std::string, std::vector<PredicateKey>> qheads;
  for (const auto& k : q.rule_heads())
    if (!shared.count(k)) qheads[k.name].push_back(k);
  std::set<std::string> paired;
  for (const auto& k : p.rule_heads()) {
    auto it = qheads.find(k.name);
    if (it == qheads.end() || shared.count(k) || paired.count(k.name)) continue;
    const PredicateKey* match = &it->second.front();
    for (const auto& cand : it->second)
      if (cand.arity == k.arity) match = &cand;
    paired.insert(k.name);
    out.spec.pairs.push_back({{k.name + "1", k.arity}, {k.name + "2", match->arity}, k.name + "_12"});
  }
  return out;
}

Program drop_rules(const Program& program, const RuleSelector& selector) {
  for (std::size_t i : selector.rules)
    if (i >= program.rules.size()) throw TransformError("no rule " + std::to_string(i + 1) + " to drop");
  for (const auto& name : selector.head_predicates) {
    bool any = false;
    for (const auto& r : program.rules) any = any || r.head.predicate == name;
    if (!any) throw TransformError("no rule concludes " + name);
  }
  Program out = program;
  out.rules.clear();
  for (std::size_t i = 0; i < program.rules.size(); ++i) {
    if (selector.rules.count(i) || selector.head_predicates.count(program.rules[i].head.predicate)) continue;
    out.rules.push_back(program.rules[i]);
  }
  return out;
}

Program keep_rules(const Program& program, const std::set<std::size_t>& rules) {
  RuleSelector drop;
  for (std::size_t i : rules)
    if (i >= program.rules.size()) throw TransformError("no rule " + std::to_string(i + 1) + " to keep");
  for (std::size_t i = 0; i < program.rules.size(); ++i)
    if (!rules.count(i)) drop.rules.insert(i);
  return drop_rules(program, drop);
}

Program add_equality_constraint(const Program& program, std::size_t rule,
                                const std::vector<std::pair<std::string, std::string>>& equalities) {
  if (rule >= program.rules.size()) throw TransformError("no rule " + std::to_string(rule + 1));
  Program out = program;
  Rule& r = out.rules[rule];
  std::vector<std::string> vars;
  r.collect_variables(vars);
  for (const auto& [a, b] : equalities) {
    for (const auto* v : {&a, &b})
      if (std::find(vars.begin(), vars.end(), *v) == vars.end())
        throw TransformError("rule " + std::to_string(rule + 1) + " has no variable " + *v);
    r.conditions.push_back(SideCondition::eq(Term::variable(a), Term::variable(b)));
  }
  return out;
}

namespace {

// Equalities a rule forces through its Eq conditions.
class Equalities {
 public:
  explicit Equalities(const Rule& r) {
    for (const auto& c : r.conditions) {
      if (c.kind != SideCondition::Kind::Eq) continue;
      if (c.left.is_variable() && c.right.is_variable()) {
        unite(c.left.name(), c.right.name());
      } else if (c.left.is_variable()) {
        bound_.emplace_back(c.left.name(), c.right);
      } else if (c.right.is_variable()) {
        bound_.emplace_back(c.right.name(), c.left);
      }
    }
  }

  std::string find(const std::string& v) {
    auto it = parent_.find(v);
    if (it == parent_.end() || it->second == v) return v;
    std::string root = find(it->second);
    parent_[v] = root;
    return root;
  }

  Term normalize(const Term& t, int depth = 0) {
    if (depth > 32) return t;
    switch (t.kind()) {
      case Term::Kind::Variable: {
        std::string rep = find(t.name());
        for (const auto& [v, term] : bound_)
          if (find(v) == rep) return normalize(term, depth + 1);
        return Term::variable(rep);
      }
      case Term::Kind::Cons: return Term::cons(normalize(t.head(), depth), normalize(t.tail(), depth));
      case Term::Kind::Arith: return Term::arith(normalize(t.base(), depth), t.offset());
      default: return t;
    }
  }

  // Map every variable in a nontrivial class to the class member seen first in `order`.
  Substitution representatives(const std::vector<std::string>& order) {
    std::map<std::string, std::string> chosen;
    for (const auto& v : order) chosen.emplace(find(v), v);
    Substitution s;
    for (const auto& v : order) {
      const std::string& rep = chosen[find(v)];
      if (rep != v) s.emplace(v, Term::variable(rep));
    }
    return s;
  }

 private:
  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    parent_.emplace(a, a);
    parent_.emplace(b, b);
    if (ra != rb) parent_[rb] = ra;
  }

  std::map<std::string, std::string> parent_;
  std::vector<std::pair<std::string, Term>> bound_;
};

// Arithmetic with a variable base cannot be rebuilt from a non-variable; fold ints.
Term safe_arith(const Term& base, std::int64_t off) {
  if (base.is_variable() || base.is_int()) return Term::arith(base, off);
  return base;
}

Term apply_renaming(const Term& t, const Substitution& s) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = s.find(t.name());
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::Cons: return Term::cons(apply_renaming(t.head(), s), apply_renaming(t.tail(), s));
    case Term::Kind::Arith: return safe_arith(apply_renaming(t.base(), s), t.offset());
    default: return t;
  }
}

Atom apply_renaming(const Atom& a, const Substitution& s) {
  Atom out(a.predicate);
  for (const auto& t : a.args) out.args.push_back(apply_renaming(t, s));
  return out;
}

}  // namespace

Program collapse_arguments(const Program& program, const PredicateKey& predicate,
                           const std::vector<std::pair<std::size_t, std::size_t>>& positions) {
  std::set<std::size_t> drop;
  for (const auto& [i, j] : positions) {
    if (i >= predicate.arity || j >= predicate.arity)
      throw TransformError("position out of range for " + predicate.to_string());
    if (i == j) throw TransformError("cannot collapse a position with itself");
    if (!drop.insert(j).second) throw TransformError("position " + std::to_string(j + 1) + " collapsed twice");
  }
  for (const auto& [i, j] : positions)
    if (drop.count(i)) throw TransformError("collapse chains are not supported; keep position " + std::to_string(i + 1));

  auto shrink = [&](const Atom& a) {
    if (a.key() != predicate) return a;
    Atom out(a.predicate);
    for (std::size_t p = 0; p < a.args.size(); ++p)
      if (!drop.count(p)) out.args.push_back(a.args[p]);
    return out;
  };

  Program out = program;
  for (std::size_t ri = 0; ri < out.rules.size(); ++ri) {
    Rule& r = out.rules[ri];
    std::vector<const Atom*> occ;
    if (r.head.key() == predicate) occ.push_back(&r.head);
    for (const auto& b : r.body)
      if (b.key() == predicate) occ.push_back(&b);
    for (const auto& c : r.conditions)
      if (c.kind == SideCondition::Kind::Guard && c.atom.key() == predicate) occ.push_back(&c.atom);
    if (occ.empty()) continue;
    Equalities eq(r);
    for (const Atom* a : occ)
      for (const auto& [i, j] : positions)
        if (eq.normalize(a->args[i]) != eq.normalize(a->args[j]))
          throw TransformError("unsound collapse: rule " + std::to_string(ri + 1) + " does not force " +
                               a->args[i].to_string() + " = " + a->args[j].to_string() + " in " + a->to_string());
    std::vector<std::string> order;
    r.collect_variables(order);
    Substitution s = eq.representatives(order);
    r.head = shrink(apply_renaming(r.head, s));
    for (auto& b : r.body) b = shrink(apply_renaming(b, s));
    std::vector<SideCondition> conds;
    for (const auto& c : r.conditions) {
      SideCondition d = c;
      if (c.kind == SideCondition::Kind::Guard) {
        d.atom = shrink(apply_renaming(c.atom, s));
      } else {
        d.left = apply_renaming(c.left, s);
        d.right = apply_renaming(c.right, s);
        if (c.kind == SideCondition::Kind::Eq && d.left == d.right) continue;
      }
      if (std::find(conds.begin(), conds.end(), d) == conds.end()) conds.push_back(std::move(d));
    }
    r.conditions = std::move(conds);
  }
  for (auto& a : out.axioms) {
    if (a.atom.key() != predicate) continue;
    for (const auto& [i, j] : positions)
      if (a.atom.args[i] != a.atom.args[j])
        throw TransformError("unsound collapse: axiom " + a.atom.to_string() + " differs at the collapsed positions");
    a.atom = shrink(a.atom);
  }
  if (out.inputs.erase(predicate)) out.inputs.insert({predicate.name, predicate.arity - drop.size()});
  return out;
}

namespace {

bool is_bridging(const Rule& r) {
  if (!r.conditions.empty() || r.body.size() != 2) return false;
  std::vector<Term> args = r.body[0].args;
  args.insert(args.end(), r.body[1].args.begin(), r.body[1].args.end());
  if (args != r.head.args) return false;
  std::set<std::string> names;
  for (const auto& t : args)
    if (!t.is_variable() || !names.insert(t.name()).second) return false;
  return true;
}

}  // namespace

Program generalize_axioms(const Program& program, const std::string& predicate) {
  std::vector<std::size_t> defs;
  for (std::size_t i = 0; i < program.rules.size(); ++i)
    if (program.rules[i].head.predicate == predicate) defs.push_back(i);
  if (defs.size() != 1)
    throw TransformError(predicate + " must be defined by exactly one bridging rule, found " +
                         std::to_string(defs.size()) + " rules");
  const Rule& r = program.rules[defs[0]];
  if (!is_bridging(r)) throw TransformError("rule " + std::to_string(defs[0] + 1) + " is not a bridging rule");
  Program out = program;
  out.rules.erase(out.rules.begin() + static_cast<std::ptrdiff_t>(defs[0]));
  out.inputs.insert(r.head.key());
  return out;
}

Program fix_structure(const Program& program, const std::string& predicate, const std::string& witness,
                      const std::vector<std::size_t>& positions) {
  Program out = program;
  bool any = false;
  for (std::size_t i = 0; i < out.rules.size(); ++i) {
    Rule& r = out.rules[i];
    if (r.head.predicate != predicate) continue;
    any = true;
    Atom g(witness);
    for (std::size_t p : positions) {
      if (p >= r.head.args.size())
        throw TransformError("position " + std::to_string(p + 1) + " is out of range for " + r.head.to_string());
      g.args.push_back(r.head.args[p]);
    }
    r.conditions.push_back(SideCondition::guard(std::move(g)));
  }
  if (!any) throw TransformError("no rule concludes " + predicate);
  out.inputs.insert({witness, positions.size()});
  return out;
}

}  // namespace wlp
