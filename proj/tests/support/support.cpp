#include "support.hpp"

#include <algorithm>
#include <functional>

#include "wlp/textio.hpp"

namespace wlp::test {

Program in_semiring(Program program, SemiringId id) {
  const Semiring& sr = Semiring::get(id);
  for (auto& a : program.axioms) {
    if (id == SemiringId::Boolean) {
      if (const auto* d = std::get_if<double>(&a.value)) a.value = *d != 0.0;
    } else if (id != SemiringId::Entropy3) {
      if (const auto* b = std::get_if<bool>(&a.value)) a.value = *b ? sr.one() : sr.zero();
    }
  }
  program.semiring = id;
  return program;
}

Program fixture_program(std::string_view name, SemiringId id) { return in_semiring(fixture(name).combined(), id); }

Program partner_program(std::string_view name, SemiringId id) {
  const Fixture& f = fixture(name);
  if (!f.partner) throw Error("fixture " + std::string(name) + " has no partner");
  return in_semiring(f.partner->combined(), id);
}

Value solved(const Program& program, SemiringId id, std::string_view atom, const SolveOptions& options) {
  return solve(program, id, options).value_of(parse_atom(atom));
}

double as_double(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
  throw Error("not a scalar value: " + to_string(v));
}

double solved_real(const Program& program, SemiringId id, std::string_view atom, const SolveOptions& options) {
  return as_double(solved(program, id, atom, options));
}

Value enumerated(const Program& program, SemiringId id, std::string_view goal, EnumerationLimits limits) {
  return aggregate(enumerate_proofs(program, parse_atom(goal), limits).proofs, id);
}

bool round_trips(const Program& program) {
  return structurally_equal(parse_program(render_program(program)), program);
}

std::size_t product_rule(const Program& product, std::string_view name, std::size_t left, std::size_t right) {
  for (std::size_t i = 0; i < product.rules.size(); ++i) {
    const Rule& r = product.rules[i];
    const RuleProvenance* p = r.provenance.get();
    if (r.head.predicate != name || !p || p->component != Component::Shared || p->bridging) continue;
    if (p->left_index == left && p->right_index == right) return i;
  }
  throw Error("no product rule " + std::string(name) + " from rules " + std::to_string(left) + " x " +
              std::to_string(right));
}

namespace {

// The natural product with the cross terms of a path predicate removed and one
// equality on the step x step rule.
Program path_product(const Program& a, const Program& b, const std::string& x, const std::string& y) {
  auto np = natural_pairing(a, b);
  Program p = product_transform(np.left, np.right, np.spec);
  p = add_equality_constraint(p, product_rule(p, "path_12", 2, 2), {{x, y}});
  return drop_rules(p, {{product_rule(p, "path_12", 1, 2), product_rule(p, "path_12", 2, 1)}, {}});
}

}  // namespace

Program fsa_intersection(const Program& fsa, const Program& acceptor) {
  return path_product(fsa, acceptor, "A1", "A2");
}

Program transducer_composition(const Program& first, const Program& second) {
  return path_product(first, second, "B1", "A2");
}

Program identical_path_constraints(const Program& product) {
  Program p = product;
  p = add_equality_constraint(p, product_rule(p, "goal_12", 0, 0), {{"Q1", "Q2"}});
  p = add_equality_constraint(p, product_rule(p, "path_12", 1, 1), {{"Q1", "Q2"}});
  p = add_equality_constraint(p, product_rule(p, "path_12", 2, 2), {{"P1", "P2"}, {"Q1", "Q2"}, {"A1", "A2"}});
  return drop_rules(p, {{product_rule(p, "path_12", 1, 2), product_rule(p, "path_12", 2, 1)}, {}});
}

Program cky_pair_constraints(const Program& product) {
  Program p = product;
  std::size_t goal = product_rule(p, "goal_12", 0, 0);
  std::size_t unary = product_rule(p, "c_12", 1, 1);
  std::size_t binary = product_rule(p, "c_12", 2, 2);
  p = add_equality_constraint(p, goal, {{"N1", "N2"}});
  p = add_equality_constraint(p, unary, {{"I1", "I2"}});
  p = add_equality_constraint(p, binary, {{"I1", "I2"}, {"J1", "J2"}, {"K1", "K2"}});
  RuleSelector drop;
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    const auto& head = p.rules[i].head.predicate;
    if ((head == "c_12" || head == "goal_12") && i != goal && i != unary && i != binary) drop.rules.insert(i);
  }
  p = drop_rules(p, drop);
  return collapse_arguments(p, {"c_12", 6}, {{1, 4}, {2, 5}});
}

Program cky_product(const Program& left, const Program& right) {
  auto np = natural_pairing(left, right, {{"string", 2}, {"length", 1}});
  return cky_pair_constraints(product_transform(np.left, np.right, np.spec));
}

Program order_pair_constraints(const Program& product) {
  Program p = product;
  p = add_equality_constraint(p, product_rule(p, "goal_12", 0, 0), {{"Q1", "Q2"}});
  p = add_equality_constraint(p, product_rule(p, "path_12", 1, 1), {{"Q1", "Q2"}});
  p = add_equality_constraint(p, product_rule(p, "path_12", 2, 2),
                              {{"Q1", "Q2"}, {"A1", "A2"}, {"B1", "B2"}, {"P1", "Pp2"}});
  p = drop_rules(p, {{product_rule(p, "path_12", 1, 2), product_rule(p, "path_12", 2, 1)}, {}});
  return collapse_arguments(p, {"path_12", 3}, {{0, 2}});
}

namespace {

void walk(const Proof& p, const std::function<void(const Proof&)>& visit) {
  visit(p);
  for (const auto& c : p.children()) walk(c, visit);
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> spans_of(const Proof& proof, std::string_view predicate) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  walk(proof, [&](const Proof& n) {
    const Atom& a = n.root();
    if (!n.is_axiom() && a.predicate == predicate && a.args.size() >= 3)
      out.emplace_back(static_cast<std::size_t>(a.args[1].int_value()), static_cast<std::size_t>(a.args[2].int_value()));
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> labelled_spans_of(const Proof& proof, std::string_view predicate) {
  std::vector<std::string> out;
  walk(proof, [&](const Proof& n) {
    const Atom& a = n.root();
    if (!n.is_axiom() && a.predicate == predicate && a.args.size() >= 3)
      out.push_back(a.args[0].to_string() + ":" + a.args[1].to_string() + ":" + a.args[2].to_string());
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::string>> leaf_rows(const Proof& proof, std::string_view predicate) {
  std::vector<std::vector<std::string>> out;
  walk(proof, [&](const Proof& n) {
    if (!n.is_axiom() || n.root().predicate != predicate) return;
    std::vector<std::string> row;
    for (const auto& t : n.root().args) row.push_back(t.to_string());
    out.push_back(std::move(row));
  });
  return out;
}

Program random_acyclic_program(std::mt19937_64& rng, const RandomShape& shape) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  const std::vector<std::string> constants{"a", "b", "c"};
  const std::vector<std::string> vars{"X", "Y", "Z"};

  std::size_t bases = pick(2, 3);
  std::size_t derived = pick(2, std::min<std::size_t>(4, shape.max_predicates - bases));
  std::vector<PredicateKey> preds;
  for (std::size_t i = 0; i < bases; ++i) preds.push_back({"e" + std::to_string(i), pick(1, 2)});
  for (std::size_t i = 0; i < derived; ++i) preds.push_back({"d" + std::to_string(i), pick(1, 2)});

  Program p;
  std::set<Atom> seen;
  for (std::size_t n = 0; n < shape.max_axioms; ++n) {
    const PredicateKey& k = preds[pick(0, bases - 1)];
    std::vector<Term> args;
    for (std::size_t j = 0; j < k.arity; ++j) args.push_back(Term::symbol(constants[pick(0, 2)]));
    Atom a(k.name, std::move(args));
    if (seen.insert(a).second) p.axioms.push_back({a, weight(rng), Component::None, {}});
  }

  std::size_t budget = shape.max_rules;
  for (std::size_t d = 0; d < derived && budget > 0; ++d) {
    const PredicateKey& head_key = preds[bases + d];
    std::size_t reserve = derived - d - 1;  // at least one rule for each later predicate
    std::size_t count = std::max<std::size_t>(1, std::min(pick(1, 3), budget - reserve));
    for (std::size_t r = 0; r < count && budget > 0; ++r, --budget) {
      Rule rule;
      std::size_t width = pick(1, 3);
      std::vector<std::string> used;
      for (std::size_t b = 0; b < width; ++b) {
        const PredicateKey& k = preds[pick(0, bases + d - 1)];
        std::vector<Term> args;
        for (std::size_t j = 0; j < k.arity; ++j) {
          if (pick(0, 5) == 0) {
            args.push_back(Term::symbol(constants[pick(0, 2)]));
          } else {
            const std::string& v = vars[pick(0, 2)];
            args.push_back(Term::variable(v));
            if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);
          }
        }
        rule.body.emplace_back(k.name, std::move(args));
      }
      std::vector<Term> head;
      for (std::size_t j = 0; j < head_key.arity; ++j)
        head.push_back(used.empty() ? Term::symbol(constants[pick(0, 2)]) : Term::variable(used[pick(0, used.size() - 1)]));
      rule.head = Atom(head_key.name, std::move(head));
      if (used.size() >= 2 && pick(0, 3) == 0)
        rule.conditions.push_back(SideCondition::neq(Term::variable(used[0]), Term::variable(used[1])));
      p.rules.push_back(std::move(rule));
    }
  }
  p.semiring = SemiringId::Real;
  return p;
}

}  // namespace wlp::test
