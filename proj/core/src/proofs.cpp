#include "wlp/proofs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace wlp {

Proof Proof::leaf(Atom root, Value value, Component provenance) {
  auto n = std::make_shared<Node>();
  n->root = std::move(root);
  n->value = std::move(value);
  n->leaf_provenance = provenance;
  return Proof(std::move(n));
}

Proof Proof::step(Atom root, std::size_t rule, std::vector<Proof> children,
                  std::shared_ptr<const RuleProvenance> provenance) {
  auto n = std::make_shared<Node>();
  n->root = std::move(root);
  n->rule = rule;
  std::size_t h = 0;
  for (const auto& c : children) h = std::max(h, c.height());
  n->height = h + 1;
  n->children = std::move(children);
  n->rule_provenance = std::move(provenance);
  return Proof(std::move(n));
}

Component Proof::provenance() const {
  if (is_axiom()) return node_->leaf_provenance;
  return node_->rule_provenance ? node_->rule_provenance->component : Component::None;
}

std::string Proof::to_string() const {
  std::string out;
  std::function<void(const Proof&, int)> walk = [&](const Proof& p, int depth) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += p.root().to_string();
    if (p.is_axiom()) {
      out += " = " + wlp::to_string(p.axiom_value());
    } else {
      out += "  [rule " + std::to_string(*p.rule() + 1) + "]";
    }
    out += "\n";
    for (const auto& c : p.children()) walk(c, depth + 1);
  };
  walk(*this, 0);
  return out;
}

namespace {

int compare(const Proof& a, const Proof& b) {
  if (auto c = a.root() <=> b.root(); c != 0) return c < 0 ? -1 : 1;
  if (a.rule() != b.rule()) return a.rule() < b.rule() ? -1 : 1;
  if (a.is_axiom()) {
    const Value& x = a.axiom_value();
    const Value& y = b.axiom_value();
    if (x == y) return 0;
    return wlp::to_string(x) < wlp::to_string(y) ? -1 : 1;
  }
  const auto& ca = a.children();
  const auto& cb = b.children();
  for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i)
    if (int c = compare(ca[i], cb[i])) return c;
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  return 0;
}

}  // namespace

bool operator==(const Proof& a, const Proof& b) { return a.node_ == b.node_ || compare(a, b) == 0; }
bool operator<(const Proof& a, const Proof& b) { return compare(a, b) < 0; }

// ---- naive grounding ---------------------------------------------------------------------

namespace {

class NaiveGrounder {
 public:
  explicit NaiveGrounder(const Program& p) : program_(p) {}

  Grounding run(std::size_t max_rounds) {
    Grounding g;
    for (const auto& a : program_.axioms) {
      g.axioms.emplace(a.atom, a.value);
      g.atoms.insert(a.atom);
    }
    std::set<GroundInstance> instances;
    for (std::size_t round = 0;; ++round) {
      if (round > max_rounds) throw DivergenceError("grounding did not terminate", round, 0.0);
      std::map<PredicateKey, std::vector<Atom>> by_pred;
      for (const auto& a : g.atoms) by_pred[a.key()].push_back(a);
      std::size_t before_atoms = g.atoms.size(), before_inst = instances.size();
      for (std::size_t r = 0; r < program_.rules.size(); ++r) {
        std::vector<Atom> body;
        match(r, 0, Substitution{}, body, by_pred, g.atoms, instances);
      }
      for (const auto& inst : instances) g.atoms.insert(inst.head);
      if (g.atoms.size() == before_atoms && instances.size() == before_inst) break;
    }
    g.instances.assign(instances.begin(), instances.end());
    return g;
  }

 private:
  void match(std::size_t r, std::size_t i, const Substitution& s, std::vector<Atom>& body,
             const std::map<PredicateKey, std::vector<Atom>>& by_pred, const std::set<Atom>& known,
             std::set<GroundInstance>& out) {
    const Rule& rule = program_.rules[r];
    if (i == rule.body.size()) {
      Substitution t = s;
      std::vector<bool> done(rule.conditions.size(), false);
      bool progress = true;
      while (progress) {
        progress = false;
        for (std::size_t c = 0; c < rule.conditions.size(); ++c) {
          if (done[c]) continue;
          const SideCondition& cond = rule.conditions[c];
          if (cond.kind == SideCondition::Kind::Guard) {
            Atom a = substitute(cond.atom, t);
            if (!a.is_ground()) continue;
            if (!known.count(a)) return;
            done[c] = progress = true;
            continue;
          }
          switch (evaluate_condition(cond, t)) {
            case ConditionStatus::Failed: return;
            case ConditionStatus::Satisfied: done[c] = progress = true; break;
            case ConditionStatus::Pending: break;
          }
        }
      }
      for (bool d : done)
        if (!d) return;
      Atom head = substitute(rule.head, t);
      if (!head.is_ground()) return;
      out.insert({r, std::move(head), body});
      return;
    }
    auto it = by_pred.find(rule.body[i].key());
    if (it == by_pred.end()) return;
    Atom pattern = substitute(rule.body[i], s);
    for (const auto& a : it->second) {
      Substitution t = s;
      if (!unify_into(pattern, a, t)) continue;
      body.push_back(a);
      match(r, i + 1, t, body, by_pred, known, out);
      body.pop_back();
    }
  }

  const Program& program_;
};

}  // namespace

Grounding ground_program(const Program& program, std::size_t max_rounds) {
  return NaiveGrounder(program).run(max_rounds);
}

// ---- enumeration ---------------------------------------------------------------------------

EnumerationResult enumerate_proofs(const Program& program, const Atom& goal, const EnumerationLimits& limits) {
  Grounding g = ground_program(program);
  EnumerationResult result;

  std::map<Atom, std::vector<const GroundInstance*>> by_head;
  for (const auto& inst : g.instances) by_head[inst.head].push_back(&inst);
  std::map<Atom, Component> leaf_component;
  for (const auto& a : program.axioms) leaf_component[a.atom] = a.component;

  std::vector<std::pair<std::string, Atom>> goals;
  for (const auto& a : g.atoms)
    if (unify(goal, a)) goals.emplace_back(a.to_string(), a);
  std::sort(goals.begin(), goals.end());

  // Atoms the goals depend on.
  std::map<Atom, std::size_t> id;
  std::vector<Atom> atoms;
  std::vector<Atom> stack;
  for (const auto& [text, a] : goals) stack.push_back(a);
  while (!stack.empty()) {
    Atom a = stack.back();
    stack.pop_back();
    if (id.count(a)) continue;
    id.emplace(a, atoms.size());
    atoms.push_back(a);
    auto it = by_head.find(a);
    if (it == by_head.end()) continue;
    for (const auto* inst : it->second)
      for (const auto& b : inst->body) stack.push_back(b);
  }

  std::size_t n = atoms.size();
  std::size_t depth = std::max<std::size_t>(limits.max_depth, 1);
  // exact[a][h]: proofs of atom a whose height is exactly h (index 0 unused).
  std::vector<std::vector<std::vector<Proof>>> exact(n, std::vector<std::vector<Proof>>(depth + 1));
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto ax = g.axioms.find(atoms[i]);
    if (ax == g.axioms.end()) continue;
    auto comp = leaf_component.find(atoms[i]);
    exact[i][1].push_back(Proof::leaf(atoms[i], ax->second, comp == leaf_component.end() ? Component::None : comp->second));
    count[i] = 1;
  }

  bool last_nonempty = true;
  for (std::size_t h = 2; h <= depth; ++h) {
    bool any = false;
    for (std::size_t a = 0; a < n; ++a) {
      auto it = by_head.find(atoms[a]);
      if (it == by_head.end()) continue;
      for (const auto* inst : it->second) {
        const auto& prov = program.rules[inst->rule].provenance;
        std::vector<std::size_t> body;
        for (const auto& b : inst->body) body.push_back(id.at(b));
        std::size_t k = body.size();
        std::vector<Proof> children(k, Proof::leaf(Atom{}, Value{false}));
        // Child j is the first one with height exactly h-1.
        for (std::size_t j = 0; j < k; ++j) {
          std::function<void(std::size_t)> gen = [&](std::size_t i) {
            if (count[a] >= limits.max_count) {
              result.truncated = true;
              return;
            }
            if (i == k) {
              exact[a][h].push_back(Proof::step(atoms[a], inst->rule, children, prov));
              ++count[a];
              return;
            }
            std::size_t lo = 1, hi = h - 1;
            if (i < j) hi = h - 2;
            if (i == j) lo = h - 1;
            for (std::size_t hh = lo; hh <= hi && hh >= 1; ++hh)
              for (const auto& p : exact[body[i]][hh]) {
                children[i] = p;
                gen(i + 1);
                if (count[a] >= limits.max_count) return;
              }
          };
          gen(0);
        }
      }
      if (!exact[a][h].empty()) any = true;
    }
    last_nonempty = any;
    if (!any) break;
  }
  if (last_nonempty && depth > 1) {
    // Proofs of height exactly max_depth exist, so taller ones may too.
    for (std::size_t a = 0; a < n && !result.truncated; ++a)
      if (!exact[a][depth].empty()) result.truncated = true;
  }

  for (const auto& [text, a] : goals) {
    std::size_t i = id.at(a);
    for (std::size_t h = 1; h <= depth; ++h)
      for (const auto& p : exact[i][h]) result.proofs.push_back(p);
  }
  return result;
}

Value proof_value(const Proof& proof, SemiringId semiring) {
  if (proof.is_axiom()) return proof.axiom_value();
  const Semiring& sr = Semiring::get(semiring);
  Value v = sr.one();
  for (const auto& c : proof.children()) v = sr.times(v, proof_value(c, semiring));
  return v;
}

Value aggregate(const std::vector<Proof>& proofs, SemiringId semiring) {
  const Semiring& sr = Semiring::get(semiring);
  Value v = sr.zero();
  for (const auto& p : proofs) v = sr.plus(v, proof_value(p, semiring));
  return v;
}

// ---- projection ----------------------------------------------------------------------------

namespace {

// Rewrite rule indices of an unpaired factor subproof into factor-program numbering.
Proof renumber(const Proof& p) {
  if (p.is_axiom()) return p;
  const RuleProvenance* prov = p.rule_provenance();
  std::size_t rule = *p.rule();
  if (prov && (prov->component == Component::Factor1 || prov->component == Component::Factor2))
    rule = prov->source_rule;
  std::vector<Proof> kids;
  for (const auto& c : p.children()) kids.push_back(renumber(c));
  std::shared_ptr<const RuleProvenance> keep;
  return Proof::step(p.root(), rule, std::move(kids), keep);
}

Proof project(const Proof& p, Factor f) {
  const RuleProvenance* prov = p.rule_provenance();
  if (p.is_axiom() || !prov || prov->component != Component::Shared)
    throw UnsupportedError("proof of " + p.root().to_string() + " carries no product provenance");
  bool left = f == Factor::Left;
  if (prov->bridging) return p.children().at(left ? 0 : 1);

  const std::optional<Rule>& side = left ? prov->left_rule : prov->right_rule;
  std::size_t width = side ? side->body.size() : 1;
  std::vector<std::optional<Proof>> parts(width);
  if (prov->body.size() != p.children().size())
    throw UnsupportedError("provenance of " + p.root().to_string() + " does not match its rule");
  for (std::size_t i = 0; i < p.children().size(); ++i) {
    const BodySource& src = prov->body[i];
    const Proof& child = p.children()[i];
    std::size_t slot = left ? src.left : src.right;
    if (src.side == BodySource::Side::Paired) {
      parts.at(slot) = project(child, f);
    } else if ((src.side == BodySource::Side::Left) == left) {
      parts.at(slot) = renumber(child);
    }
  }
  for (const auto& part : parts)
    if (!part) throw UnsupportedError("provenance of " + p.root().to_string() + " is incomplete");
  if (!side) return *parts[0];

  Substitution s;
  std::vector<Proof> kids;
  for (std::size_t i = 0; i < width; ++i) {
    if (!unify_into(side->body[i], parts[i]->root(), s))
      throw UnsupportedError("projected child " + parts[i]->root().to_string() + " does not fit " +
                             side->to_string());
    kids.push_back(*parts[i]);
  }
  for (std::size_t pass = 0; pass < side->conditions.size(); ++pass)
    for (const auto& c : side->conditions)
      if (evaluate_condition(c, s) == ConditionStatus::Failed)
        throw UnsupportedError("projected instance violates " + c.to_string());
  Atom head = substitute(side->head, s);
  if (!head.is_ground()) throw UnsupportedError("projected head " + head.to_string() + " is not ground");
  return Proof::step(std::move(head), left ? prov->left_index : prov->right_index, std::move(kids),
                     side->provenance);
}

}  // namespace

Proof project_proof(const Proof& proof, Factor which) { return project(proof, which); }

}  // namespace wlp
