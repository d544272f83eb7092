#include "wlp/infometrics.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <map>

namespace wlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double real_of(const Value& v, const Atom& atom) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw TypeError("axiom " + atom.to_string() + " needs a real weight, got " + std::string(carrier_name(v)));
}

double xlogy(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return -kInf;
  return x * std::log(y);
}

Triple goal_triple(const Chart& chart, const Atom& goal) {
  Triple sum{0.0, 0.0, 0.0};
  for (const auto& ans : query(chart, goal)) {
    const Triple& t = std::get<Triple>(ans.value);
    sum = {sum.x + t.x, sum.y + t.y, sum.z + t.z};
  }
  return sum;
}

Program lift_axioms(const Program& program, const std::function<Triple(const Atom&, double)>& lift) {
  Program out = program;
  out.semiring = SemiringId::Entropy3;
  for (auto& a : out.axioms) a.value = lift(a.atom, real_of(a.value, a.atom));
  return out;
}

Program lift_pair(const Program& program, const std::vector<Axiom>& p, const std::vector<Axiom>& q,
                  Triple (*weight)(double, double)) {
  std::map<Atom, std::pair<double, double>> both;
  for (const auto& a : p) both[a.atom].first += real_of(a.value, a.atom);
  for (const auto& a : q) both[a.atom].second += real_of(a.value, a.atom);
  Program out = program;
  out.semiring = SemiringId::Entropy3;
  out.axioms.clear();
  for (const auto& [atom, w] : both) {
    if (w.first < 0.0 || w.second < 0.0) throw TypeError("negative weight for " + atom.to_string());
    out.axioms.push_back({atom, weight(w.first, w.second), Component::None, {}});
  }
  return out;
}

Triple generalized_weight(double p, double q) {
  if (p == 0.0) return {0.0, 0.0, q};
  if (q == 0.0) return {p, kInf, q};
  return {p, p * std::log(p / q), q};
}

Triple solve_goal(const Program& lifted, const Atom& goal, const SolveOptions& options) {
  return goal_triple(solve(lifted, SemiringId::Entropy3, options), goal);
}

void assemble(KlReport& r, double r_pp) {
  if (r.p_bar == 0.0) throw Error("the goal has no proofs under p");
  r.ce_pp = r_pp / r.p_bar - std::log(r.p_bar);
  if (r.r_bar == -kInf || r.q_bar == 0.0) {
    r.ce_pq = -kInf;
    r.kl = kInf;
  } else {
    r.ce_pq = r.r_bar / r.p_bar - std::log(r.q_bar);
    r.kl = r.ce_pp - r.ce_pq;
  }
}

}  // namespace

Triple entropy_weight(double w) { return {w, -xlogy(w, w), 0.0}; }

Triple kl_weight(double p, double q) { return {p, xlogy(p, q), q}; }

Program lift_entropy(const Program& program) {
  return lift_axioms(program, [](const Atom& atom, double w) {
    if (w < 0.0) throw TypeError("axiom " + atom.to_string() + " has negative weight " + format_number(w));
    return entropy_weight(w);
  });
}

EntropyReport entropy_of_goal(const Program& program, const Atom& goal, const SolveOptions& options) {
  Triple t = solve_goal(lift_entropy(program), goal, options);
  if (t.x == 0.0) throw Error("goal " + goal.to_string() + " is underivable");
  return {t.x, t.y, t.y / t.x + std::log(t.x)};
}

Program lift_kl(const Program& program, const std::vector<Axiom>& p, const std::vector<Axiom>& q) {
  return lift_pair(program, p, q, &kl_weight);
}

Program lift_generalized_kl(const Program& program, const std::vector<Axiom>& p, const std::vector<Axiom>& q) {
  return lift_pair(program, p, q, &generalized_weight);
}

KlReport kl_divergence(const Program& program, const std::vector<Axiom>& p, const std::vector<Axiom>& q,
                       const Atom& goal, const SolveOptions& options, bool generalized) {
  Program pq = lift_kl(program, p, q);
  Program pp = lift_kl(program, p, p);
  auto self = std::async(std::launch::async, [&] { return solve_goal(pp, goal, options); });
  Triple t = solve_goal(pq, goal, options);
  Triple s = self.get();

  KlReport r;
  r.p_bar = t.x;
  r.r_bar = t.y;
  r.q_bar = t.z;
  assemble(r, s.y);
  if (generalized) {
    Triple g = solve_goal(lift_generalized_kl(program, p, q), goal, options);
    r.generalized_kl = g.y - g.x + g.z;
  }
  return r;
}

Program lift_factor_p(const Program& program) {
  return lift_axioms(program, [](const Atom& atom, double p) {
    if (p < 0.0) throw TypeError("axiom " + atom.to_string() + " has negative weight");
    return Triple{p, 0.0, 1.0};
  });
}

Program lift_factor_q(const Program& program) {
  return lift_axioms(program, [](const Atom& atom, double q) {
    if (q < 0.0) throw TypeError("axiom " + atom.to_string() + " has negative weight");
    return Triple{1.0, q == 0.0 ? -kInf : std::log(q), q};
  });
}

KlReport projection_kl(const Program& p_program, const Program& q_program, const PairingSpec& spec,
                       const ProjectionGoals& goals, const ProgramPass& constrain, const SolveOptions& options) {
  Program left = lift_factor_p(p_program);
  Program right = lift_factor_q(q_program);
  // Axioms common to both factors are shared structure and must carry weight 1 on both sides.
  std::map<Atom, Value> left_axioms;
  for (const auto& a : left.axioms) left_axioms.emplace(a.atom, a.value);
  for (auto& a : right.axioms) {
    auto it = left_axioms.find(a.atom);
    if (it == left_axioms.end()) continue;
    if (std::get<Triple>(it->second).x != 1.0 || std::get<Triple>(a.value).z != 1.0)
      throw TransformError("shared axiom " + a.atom.to_string() + " must have weight 1 in both programs");
    a.value = it->second = Triple{1.0, 0.0, 1.0};
  }
  for (auto& a : left.axioms) a.value = left_axioms.at(a.atom);

  Program product = product_transform(left, right, spec);
  if (constrain) product = constrain(product);

  std::vector<Axiom> p_facts;
  for (const auto& a : p_program.axioms) p_facts.push_back(a);
  Program pp = lift_kl(p_program, p_facts, p_facts);
  auto self = std::async(std::launch::async, [&] { return solve_goal(pp, goals.left, options); });

  Chart chart = solve(product, SemiringId::Entropy3, options);
  KlReport r;
  r.p_bar = goal_triple(chart, goals.left).x;
  r.r_bar = goal_triple(chart, goals.product).y;
  r.q_bar = goal_triple(chart, goals.right).z;
  assemble(r, self.get().y);
  return r;
}

}  // namespace wlp
