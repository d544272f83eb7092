#include "wlp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

namespace wlp {

// ---- chart --------------------------------------------------------------------------------

void Chart::set(const Atom& atom, const Value& value) {
  if (Semiring::get(semiring_).is_zero(value)) {
    entries_.erase(atom);
    return;
  }
  entries_[atom] = value;
}

const Value* Chart::find(const Atom& atom) const {
  auto it = entries_.find(atom);
  return it == entries_.end() ? nullptr : &it->second;
}

Value Chart::value_of(const Atom& atom) const {
  const Value* v = find(atom);
  return v ? *v : Semiring::get(semiring_).zero();
}

std::vector<std::pair<Atom, Value>> Chart::sorted_entries() const {
  std::vector<std::pair<std::string, const std::pair<const Atom, Value>*>> keyed;
  keyed.reserve(entries_.size());
  for (const auto& e : entries_) keyed.emplace_back(e.first.to_string(), &e);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<Atom, Value>> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.emplace_back(k.second->first, k.second->second);
  return out;
}

std::string_view mode_name(SolveMode m) {
  switch (m) {
    case SolveMode::Auto: return "auto";
    case SolveMode::Priority: return "priority";
    case SolveMode::Iterate: return "iterate";
  }
  return "auto";
}

std::vector<Diagnostic> check_axiom_values(const Program& program, SemiringId semiring) {
  const Semiring& sr = Semiring::get(semiring);
  std::vector<Diagnostic> out;
  for (const auto& a : program.axioms)
    if (auto err = sr.domain_error(a.value))
      out.push_back({Severity::Error, "axiom " + a.atom.to_string() + ": " + *err, a.span, {}});
  return out;
}

std::vector<QueryAnswer> query(const Chart& chart, const Atom& pattern) {
  std::vector<QueryAnswer> out;
  for (auto& [atom, value] : chart.sorted_entries())
    if (auto s = unify(pattern, atom)) out.push_back({std::move(*s), atom, value});
  return out;
}

namespace {

// ---- grounding ------------------------------------------------------------------------------

struct Edge {
  std::size_t rule;
  std::size_t head;
  std::vector<std::size_t> body;
};

struct PredIndex {
  std::vector<std::size_t> all;
  std::vector<std::unordered_map<Term, std::vector<std::size_t>, TermHash>> by_position;
};

struct Pending {
  std::size_t rule;
  Substitution bindings;
  std::vector<std::size_t> body;
};

class Grounder {
 public:
  Grounder(const Program& program, const Semiring& sr, std::size_t max_rounds)
      : program_(program), sr_(sr), max_rounds_(max_rounds) {}

  void run() {
    for (const auto& a : program_.axioms) {
      if (sr_.is_zero(a.value)) continue;
      std::size_t id = intern(a.atom, 0);
      axiom_value_.resize(atoms_.size());
      axiom_value_[id] = a.value;
    }
    std::size_t round = 1;
    for (;; ++round) {
      bool any_delta = false;
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (round_of_[i] == round - 1) {
          any_delta = true;
          break;
        }
      if (!any_delta) break;
      if (round > max_rounds_)
        throw DivergenceError("grounding did not reach a fixpoint after " + std::to_string(max_rounds_) +
                                  " rounds; the program derives unboundedly many atoms",
                              max_rounds_, std::numeric_limits<double>::infinity());
      current_round_ = round;
      for (std::size_t r = 0; r < program_.rules.size(); ++r) {
        const Rule& rule = program_.rules[r];
        for (std::size_t k = 0; k < rule.body.size(); ++k) {
          Substitution s;
          std::vector<bool> done(rule.conditions.size(), false);
          std::vector<std::size_t> ids;
          join(r, k, 0, s, done, ids);
        }
      }
    }
    rounds_ = round - 1;
    axiom_value_.resize(atoms_.size());
  }

  std::vector<Atom> atoms_;
  std::vector<std::optional<Value>> axiom_value_;
  std::vector<Edge> edges_;
  std::size_t rounds_ = 0;

 private:
  std::size_t intern(const Atom& a, std::size_t round) {
    auto it = ids_.find(a);
    if (it != ids_.end()) return it->second;
    std::size_t id = atoms_.size();
    atoms_.push_back(a);
    round_of_.push_back(round);
    ids_.emplace(a, id);
    auto& idx = preds_[a.key()];
    idx.all.push_back(id);
    if (idx.by_position.size() < a.args.size()) idx.by_position.resize(a.args.size());
    for (std::size_t p = 0; p < a.args.size(); ++p) idx.by_position[p][a.args[p]].push_back(id);
    wake(a);
    return id;
  }

  // Candidates for a partially bound pattern, using the most selective bound position.
  const std::vector<std::size_t>* candidates(const Atom& pattern) const {
    auto it = preds_.find(pattern.key());
    if (it == preds_.end()) return nullptr;
    const PredIndex& idx = it->second;
    const std::vector<std::size_t>* best = &idx.all;
    for (std::size_t p = 0; p < pattern.args.size(); ++p) {
      if (!pattern.args[p].is_ground()) continue;
      auto hit = idx.by_position[p].find(pattern.args[p]);
      if (hit == idx.by_position[p].end()) return nullptr;
      if (hit->second.size() < best->size()) best = &hit->second;
    }
    return best;
  }

  bool allowed(std::size_t pos, std::size_t delta_pos, std::size_t id) const {
    std::size_t r = round_of_[id], d = current_round_ - 1;
    if (pos < delta_pos) return r < d;
    if (pos == delta_pos) return r == d;
    return r <= d;
  }

  bool settle_conditions(const Rule& rule, Substitution& s, std::vector<bool>& done) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t c = 0; c < rule.conditions.size(); ++c) {
        if (done[c] || rule.conditions[c].kind == SideCondition::Kind::Guard) continue;
        switch (evaluate_condition(rule.conditions[c], s)) {
          case ConditionStatus::Failed: return false;
          case ConditionStatus::Satisfied:
            done[c] = true;
            progress = true;
            break;
          case ConditionStatus::Pending: break;
        }
      }
    }
    return true;
  }

  void join(std::size_t r, std::size_t delta_pos, std::size_t pos, Substitution& s, std::vector<bool>& done,
            std::vector<std::size_t>& ids) {
    const Rule& rule = program_.rules[r];
    if (pos == rule.body.size()) {
      finish(r, s, done, ids);
      return;
    }
    Atom pattern = substitute(rule.body[pos], s);
    const std::vector<std::size_t>* found = candidates(pattern);
    if (!found) return;
    // Copied: recursion can intern new atoms into the index. Those belong to this round
    // and are excluded by allowed() anyway.
    const std::vector<std::size_t> cands = *found;
    for (std::size_t id : cands) {
      if (!allowed(pos, delta_pos, id)) continue;
      Substitution s2 = s;
      if (!unify_into(pattern, atoms_[id], s2)) continue;
      std::vector<bool> done2 = done;
      if (!settle_conditions(rule, s2, done2)) continue;
      ids.push_back(id);
      join(r, delta_pos, pos + 1, s2, done2, ids);
      ids.pop_back();
    }
  }

  void finish(std::size_t r, Substitution& s, std::vector<bool>& done, const std::vector<std::size_t>& ids) {
    const Rule& rule = program_.rules[r];
    for (std::size_t c = 0; c < rule.conditions.size(); ++c)
      if (!done[c] && rule.conditions[c].kind != SideCondition::Kind::Guard)
        throw Error("rule " + std::to_string(r + 1) + ": condition " + rule.conditions[c].to_string() +
                    " could not be decided (unbound variables)");
    Pending p{r, s, ids};
    attempt(std::move(p));
  }

  void attempt(Pending p) {
    const Rule& rule = program_.rules[p.rule];
    for (const auto& c : rule.conditions) {
      if (c.kind != SideCondition::Kind::Guard) continue;
      Atom g = substitute(c.atom, p.bindings);
      if (!g.is_ground())
        throw Error("rule " + std::to_string(p.rule + 1) + ": guard " + g.to_string() + " is not ground");
      if (!ids_.count(g)) {
        waiting_[g].push_back(std::move(p));
        return;
      }
    }
    Atom head = substitute(rule.head, p.bindings);
    if (!head.is_ground())
      throw Error("rule " + std::to_string(p.rule + 1) + " derived non-ground " + head.to_string());
    std::size_t h = intern(head, current_round_);
    edges_.push_back({p.rule, h, std::move(p.body)});
  }

  void wake(const Atom& a) {
    auto it = waiting_.find(a);
    if (it == waiting_.end()) return;
    std::vector<Pending> ready = std::move(it->second);
    waiting_.erase(it);
    for (auto& p : ready) attempt(std::move(p));
  }

  const Program& program_;
  const Semiring& sr_;
  std::size_t max_rounds_;
  std::size_t current_round_ = 0;
  std::vector<std::size_t> round_of_;
  std::unordered_map<Atom, std::size_t, AtomHash> ids_;
  std::map<PredicateKey, PredIndex> preds_;
  std::unordered_map<Atom, std::vector<Pending>, AtomHash> waiting_;
};

// ---- evaluation ----------------------------------------------------------------------------

bool all_finite(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return std::isfinite(*d);
  if (const auto* t = std::get_if<Triple>(&v)) return std::isfinite(t->x) && std::isfinite(t->y) && std::isfinite(t->z);
  return true;
}

class Evaluator {
 public:
  Evaluator(const Grounder& g, const Semiring& sr) : g_(g), sr_(sr) {}

  std::vector<Value> priority(ConvergenceReport& report) {
    std::size_t n = g_.atoms_.size();
    std::vector<std::string> text(n);
    for (std::size_t i = 0; i < n; ++i) text[i] = g_.atoms_[i].to_string();
    std::vector<Value> tent(n, sr_.zero());
    for (std::size_t i = 0; i < n; ++i)
      if (g_.axiom_value_[i]) tent[i] = *g_.axiom_value_[i];
    std::vector<std::vector<std::size_t>> occurs(n);
    std::vector<std::size_t> remaining(g_.edges_.size());
    for (std::size_t e = 0; e < g_.edges_.size(); ++e) {
      remaining[e] = g_.edges_[e].body.size();
      for (std::size_t b : g_.edges_[e].body) occurs[b].push_back(e);
    }

    struct Entry {
      Value value;
      std::size_t id;
    };
    auto cmp = [&](const Entry& a, const Entry& b) {
      if (sr_.better(a.value, b.value)) return true;
      if (sr_.better(b.value, a.value)) return false;
      if (text[a.id] != text[b.id]) return text[a.id] < text[b.id];
      return a.id < b.id;
    };
    std::set<Entry, decltype(cmp)> agenda(cmp);
    for (std::size_t i = 0; i < n; ++i)
      if (!sr_.is_zero(tent[i])) agenda.insert({tent[i], i});

    std::vector<bool> settled(n, false);
    std::size_t pops = 0;
    while (!agenda.empty()) {
      Entry top = *agenda.begin();
      agenda.erase(agenda.begin());
      settled[top.id] = true;
      ++pops;
      for (std::size_t e : occurs[top.id]) {
        if (--remaining[e] != 0) continue;
        const Edge& edge = g_.edges_[e];
        if (settled[edge.head]) continue;
        Value prod = sr_.one();
        for (std::size_t b : edge.body) prod = sr_.times(prod, tent[b]);
        if (sr_.is_zero(prod)) continue;
        Value next = sr_.plus(tent[edge.head], prod);
        if (next == tent[edge.head]) continue;
        if (!sr_.is_zero(tent[edge.head])) agenda.erase({tent[edge.head], edge.head});
        tent[edge.head] = next;
        agenda.insert({next, edge.head});
      }
    }
    report.mode = SolveMode::Priority;
    report.iterations = pops;
    report.residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!settled[i]) tent[i] = sr_.zero();
    return tent;
  }

  std::vector<Value> iterate(const SolveOptions& opts, ConvergenceReport& report) {
    std::size_t n = g_.atoms_.size();
    bool watch_overflow = sr_.id() == SemiringId::Real || sr_.id() == SemiringId::Entropy3;
    std::vector<Value> base(n, sr_.zero());
    for (std::size_t i = 0; i < n; ++i)
      if (g_.axiom_value_[i]) base[i] = *g_.axiom_value_[i];
    std::vector<Value> cur = base;
    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t sweep = 1; sweep <= opts.max_iterations; ++sweep) {
      std::vector<Value> next = base;
      for (const Edge& e : g_.edges_) {
        Value prod = sr_.one();
        bool finite = true;
        for (std::size_t b : e.body) {
          if (sr_.is_zero(cur[b])) {
            prod = sr_.zero();
            break;
          }
          finite = finite && all_finite(cur[b]);
          prod = sr_.times(prod, cur[b]);
        }
        if (sr_.is_zero(prod)) continue;
        if (watch_overflow && finite && !all_finite(prod)) overflow(sweep);
        bool was_finite = all_finite(next[e.head]) && all_finite(prod);
        next[e.head] = sr_.plus(next[e.head], prod);
        if (watch_overflow && was_finite && !all_finite(next[e.head])) overflow(sweep);
      }
      residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, distance(cur[i], next[i]));
      cur = std::move(next);
      if (opts.on_sweep) opts.on_sweep(sweep, g_.atoms_, cur);
      if (residual <= opts.tolerance) {
        report.mode = SolveMode::Iterate;
        report.iterations = sweep;
        report.residual = residual;
        return cur;
      }
    }
    throw DivergenceError("no convergence after " + std::to_string(opts.max_iterations) +
                              " sweeps (residual " + format_number(residual, 12) + ")",
                          opts.max_iterations, residual);
  }

 private:
  [[noreturn]] void overflow(std::size_t sweep) {
    throw DivergenceError("values grew without bound at sweep " + std::to_string(sweep), sweep,
                          std::numeric_limits<double>::infinity());
  }

  const Grounder& g_;
  const Semiring& sr_;
};

}  // namespace

Chart solve(const Program& program, SemiringId semiring, const SolveOptions& options) {
  auto diags = validate(program);
  for (auto& d : check_axiom_values(program, semiring)) diags.push_back(std::move(d));
  if (has_errors(diags)) throw ValidationError(std::move(diags));

  const Semiring& sr = Semiring::get(semiring);
  SolveMode mode = options.mode;
  if (mode == SolveMode::Auto) mode = sr.monotone_superior() ? SolveMode::Priority : SolveMode::Iterate;
  if (mode == SolveMode::Priority && !sr.monotone_superior())
    throw UnsupportedError("priority mode needs a monotone semiring; " + std::string(sr.name()) + " is not");

  Grounder g(program, sr, options.max_iterations);
  g.run();

  Chart chart(semiring);
  Evaluator ev(g, sr);
  std::vector<Value> values = mode == SolveMode::Priority ? ev.priority(chart.report())
                                                          : ev.iterate(options, chart.report());
  chart.report().grounding_rounds = g.rounds_;
  for (std::size_t i = 0; i < values.size(); ++i) chart.set(g.atoms_[i], values[i]);
  return chart;
}

}  // namespace wlp
