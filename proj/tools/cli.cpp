#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <optional>
#include <sstream>

#include "wlp/corpus.hpp"
#include "wlp/infometrics.hpp"
#include "wlp/product.hpp"
#include "wlp/proofs.hpp"
#include "wlp/solver.hpp"
#include "wlp/textio.hpp"

namespace wlp::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<Axiom> read_facts(const std::vector<std::string>& paths, const Value& def) {
  std::vector<Axiom> out;
  for (const auto& p : paths) {
    try {
      auto facts = parse_facts_tsv(read_text_file(p), def);
      out.insert(out.end(), facts.begin(), facts.end());
    } catch (const ParseError& e) {
      throw ParseError(p + ": " + e.detail(), e.span());
    }
  }
  return out;
}

Program load_program(const std::string& path) {
  try {
    return parse_program(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.detail(), e.span());
  }
}

SemiringId pick_semiring(const std::string& flag, const Program& program) {
  if (!flag.empty()) {
    auto id = parse_semiring_id(flag);
    if (!id) throw UsageError("unknown semiring '" + flag + "'");
    return *id;
  }
  if (program.semiring) return *program.semiring;
  throw UsageError("no semiring: pass --semiring or add an @semiring directive");
}

// Facts files carry plain numbers; a boolean solve reads nonzero as true.
void coerce_values(Program& program, SemiringId id) {
  for (auto& a : program.axioms) {
    if (id == SemiringId::Boolean) {
      if (const auto* d = std::get_if<double>(&a.value)) a.value = *d != 0.0;
    } else if (id != SemiringId::Entropy3) {
      const auto& s = Semiring::get(id);
      if (const auto* b = std::get_if<bool>(&a.value)) a.value = *b ? s.one() : s.zero();
    }
  }
}

Program with_facts(Program program, const std::vector<std::string>& facts, SemiringId id) {
  auto extra = read_facts(facts, Semiring::get(id).one());
  program.axioms.insert(program.axioms.end(), extra.begin(), extra.end());
  coerce_values(program, id);
  return program;
}

SolveMode parse_mode(const std::string& m) {
  if (m == "auto") return SolveMode::Auto;
  if (m == "priority") return SolveMode::Priority;
  if (m == "iterate") return SolveMode::Iterate;
  throw UsageError("unknown mode '" + m + "'");
}

PredicateKey parse_key(const std::string& text) {
  auto slash = text.rfind('/');
  if (slash == std::string::npos || slash == 0) throw UsageError("expected pred/arity, got '" + text + "'");
  try {
    std::size_t used = 0;
    unsigned long n = std::stoul(text.substr(slash + 1), &used);
    if (used != text.size() - slash - 1) throw std::invalid_argument("arity");
    return {text.substr(0, slash), n};
  } catch (const std::logic_error&) {
    throw UsageError("bad arity in '" + text + "'");
  }
}

std::size_t parse_index(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    long n = std::stol(text, &used);
    if (used != text.size() || n < 1) throw std::invalid_argument(what);
    return static_cast<std::size_t>(n - 1);
  } catch (const std::logic_error&) {
    throw UsageError("bad " + what + " '" + text + "' (expected a positive number)");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// p/1=q/1:pq
PredicatePair parse_pair(const std::string& text) {
  auto colon = text.rfind(':');
  auto eq = text.find('=');
  if (colon == std::string::npos || eq == std::string::npos || eq > colon)
    throw UsageError("expected --pair p/N=q/M:name, got '" + text + "'");
  return {parse_key(text.substr(0, eq)), parse_key(text.substr(eq + 1, colon - eq - 1)), text.substr(colon + 1)};
}

// L:R:i=j,k=l with 1-based rule numbers and premise positions.
ExplicitAlignment parse_alignment(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("expected --align L:R:i=j,..., got '" + text + "'");
  ExplicitAlignment a;
  a.left_rule = parse_index(parts[0], "rule number");
  a.right_rule = parse_index(parts[1], "rule number");
  for (const auto& m : split(parts[2], ',')) {
    auto ij = split(m, '=');
    if (ij.size() != 2) throw UsageError("bad premise pair '" + m + "'");
    a.premises.emplace_back(parse_index(ij[0], "premise"), parse_index(ij[1], "premise"));
  }
  return a;
}

void emit_program(const Program& p, const std::string& out_path, std::ostream& out) {
  std::string text = render_program(p);
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
  }
}

SolveOptions solve_options(double tol, std::size_t max_iters, const std::string& mode) {
  SolveOptions o;
  o.tolerance = tol;
  o.max_iterations = max_iters;
  o.mode = parse_mode(mode);
  return o;
}

nlohmann::ordered_json number(double d) {
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  return nlohmann::ordered_json::parse(format_number(d, 12));
}

// ---- subcommands ----------------------------------------------------------------------------

struct SolveArgs {
  std::string file, semiring, query, mode = "auto";
  std::vector<std::string> facts;
  double tol = 1e-12;
  std::size_t max_iters = 10000;
};

int do_solve(const SolveArgs& a, std::ostream& out) {
  Program base = load_program(a.file);
  SemiringId id = pick_semiring(a.semiring, base);
  Program p = with_facts(std::move(base), a.facts, id);
  Chart chart = solve(p, id, solve_options(a.tol, a.max_iters, a.mode));
  if (a.query.empty()) {
    out << render_chart(chart);
    return kOk;
  }
  for (const auto& ans : query(chart, parse_atom(a.query)))
    out << ans.atom.to_string() << ' ' << format_output(ans.value) << '\n';
  return kOk;
}

struct CheckArgs {
  std::string file;
  std::vector<std::string> facts;
  bool list = false;
};

int do_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  Program p = load_program(a.file);
  auto extra = read_facts(a.facts, Value{1.0});
  p.axioms.insert(p.axioms.end(), extra.begin(), extra.end());
  if (p.semiring) coerce_values(p, *p.semiring);
  auto diags = validate(p);
  if (p.semiring)
    for (auto& d : check_axiom_values(p, *p.semiring)) diags.push_back(std::move(d));
  for (const auto& d : diags) err << a.file << ": " << d.to_string() << '\n';
  if (a.list)
    for (std::size_t i = 0; i < p.rules.size(); ++i) out << (i + 1) << ": " << p.rules[i].to_string() << '\n';
  if (has_errors(diags)) return kValidation;
  if (!a.list) out << "ok: " << p.rules.size() << " rules, " << p.axioms.size() << " axioms\n";
  return kOk;
}

struct ProofsArgs {
  std::string file, goal, semiring;
  std::vector<std::string> facts;
  std::size_t max_depth = 64, max_count = 1000;
};

int do_proofs(const ProofsArgs& a, std::ostream& out) {
  Program base = load_program(a.file);
  SemiringId id = pick_semiring(a.semiring, base);
  Program p = with_facts(std::move(base), a.facts, id);
  auto diags = validate(p);
  for (auto& d : check_axiom_values(p, id)) diags.push_back(std::move(d));
  if (has_errors(diags)) throw ValidationError(std::move(diags));
  auto res = enumerate_proofs(p, parse_atom(a.goal), {a.max_depth, a.max_count});
  for (std::size_t i = 0; i < res.proofs.size(); ++i) {
    out << "proof " << (i + 1) << " value " << format_output(proof_value(res.proofs[i], id)) << '\n';
    out << res.proofs[i].to_string();
  }
  out << "proofs " << res.proofs.size() << " total " << format_output(aggregate(res.proofs, id))
      << (res.truncated ? " (truncated)" : "") << '\n';
  return kOk;
}

struct ProductArgs {
  std::string left, right, policy = "left", out_path;
  std::vector<std::string> pairs, shared, align, left_facts, right_facts;
  bool natural = false;
};

int do_product(const ProductArgs& a, std::ostream& out) {
  Program left = load_program(a.left);
  Program right = load_program(a.right);
  auto lf = read_facts(a.left_facts, Value{1.0});
  auto rf = read_facts(a.right_facts, Value{1.0});
  left.axioms.insert(left.axioms.end(), lf.begin(), lf.end());
  right.axioms.insert(right.axioms.end(), rf.begin(), rf.end());

  PairingSpec spec;
  if (a.natural) {
    std::set<PredicateKey> shared;
    for (const auto& s : a.shared) shared.insert(parse_key(s));
    auto np = natural_pairing(left, right, shared);
    left = std::move(np.left);
    right = std::move(np.right);
    spec = std::move(np.spec);
  } else if (!a.shared.empty()) {
    throw UsageError("--shared only applies with --natural");
  }
  for (const auto& p : a.pairs) spec.pairs.push_back(parse_pair(p));
  if (spec.pairs.empty()) throw UsageError("no pairs: pass --pair or --natural");
  if (a.policy == "left" || a.policy == "left_to_right") {
    spec.policy = AlignmentPolicy::LeftToRight;
  } else if (a.policy == "crossed") {
    spec.policy = AlignmentPolicy::Crossed;
  } else if (a.policy == "explicit") {
    spec.policy = AlignmentPolicy::Explicit;
  } else {
    throw UsageError("unknown policy '" + a.policy + "'");
  }
  for (const auto& al : a.align) spec.alignments.push_back(parse_alignment(al));
  emit_program(product_transform(left, right, spec), a.out_path, out);
  return kOk;
}

struct EditArgs {
  std::string file, out_path;
  std::vector<std::string> drop, keep, drop_head, constrain, collapse, generalize, fix;
};

int do_edit(const EditArgs& a, std::ostream& out) {
  Program p = load_program(a.file);
  // Rule numbers in --constrain, --drop-rule and --keep-rule all refer to the input file.
  std::map<std::size_t, std::vector<std::pair<std::string, std::string>>> eqs;
  for (const auto& c : a.constrain) {
    auto colon = c.find(':');
    if (colon == std::string::npos) throw UsageError("expected --constrain RULE:X=Y[,X=Y], got '" + c + "'");
    std::size_t rule = parse_index(c.substr(0, colon), "rule number");
    for (const auto& e : split(c.substr(colon + 1), ',')) {
      auto xy = split(e, '=');
      if (xy.size() != 2 || xy[0].empty() || xy[1].empty()) throw UsageError("bad equality '" + e + "'");
      eqs[rule].emplace_back(xy[0], xy[1]);
    }
  }
  for (const auto& [rule, list] : eqs) p = add_equality_constraint(p, rule, list);

  RuleSelector drop;
  for (const auto& d : a.drop) drop.rules.insert(parse_index(d, "rule number"));
  for (const auto& h : a.drop_head) drop.head_predicates.insert(h);
  if (!a.keep.empty()) {
    std::set<std::size_t> keep;
    for (const auto& k : a.keep) keep.insert(parse_index(k, "rule number"));
    for (std::size_t i = 0; i < p.rules.size(); ++i)
      if (!keep.count(i)) drop.rules.insert(i);
    for (std::size_t k : keep)
      if (k >= p.rules.size()) throw TransformError("no rule " + std::to_string(k + 1) + " to keep");
  }
  if (!drop.rules.empty() || !drop.head_predicates.empty()) p = drop_rules(p, drop);

  // pred/arity:i=j,k=l with 1-based positions
  for (const auto& c : a.collapse) {
    auto colon = c.find(':');
    if (colon == std::string::npos) throw UsageError("expected --collapse pred/N:i=j, got '" + c + "'");
    PredicateKey key = parse_key(c.substr(0, colon));
    std::vector<std::pair<std::size_t, std::size_t>> pos;
    for (const auto& e : split(c.substr(colon + 1), ',')) {
      auto ij = split(e, '=');
      if (ij.size() != 2) throw UsageError("bad position pair '" + e + "'");
      pos.emplace_back(parse_index(ij[0], "position"), parse_index(ij[1], "position"));
    }
    p = collapse_arguments(p, key, pos);
  }
  for (const auto& g : a.generalize) p = generalize_axioms(p, g);
  // pred:witness:1,3,4
  for (const auto& f : a.fix) {
    auto parts = split(f, ':');
    if (parts.size() != 3 || parts[0].empty() || parts[1].empty())
      throw UsageError("expected --fix pred:witness:positions, got '" + f + "'");
    std::vector<std::size_t> pos;
    for (const auto& s : split(parts[2], ',')) pos.push_back(parse_index(s, "position"));
    p = fix_structure(p, parts[0], parts[1], pos);
  }
  emit_program(p, a.out_path, out);
  return kOk;
}

struct EntropyArgs {
  std::string file, goal;
  std::vector<std::string> facts;
  double tol = 1e-12;
  std::size_t max_iters = 10000;
};

int do_entropy(const EntropyArgs& a, std::ostream& out) {
  Program p = with_facts(load_program(a.file), a.facts, SemiringId::Real);
  auto r = entropy_of_goal(p, parse_atom(a.goal), solve_options(a.tol, a.max_iters, "iterate"));
  nlohmann::ordered_json j;
  j["w_prime"] = number(r.w_prime);
  j["h_prime"] = number(r.h_prime);
  j["entropy"] = number(r.entropy);
  out << j.dump() << '\n';
  return kOk;
}

struct KlArgs {
  std::string file, goal, p_facts, q_facts;
  bool generalized = false;
  double tol = 1e-12;
  std::size_t max_iters = 10000;
};

int do_kl(const KlArgs& a, std::ostream& out) {
  Program p = load_program(a.file);
  auto pf = read_facts({a.p_facts}, Value{1.0});
  auto qf = read_facts({a.q_facts}, Value{1.0});
  auto r = kl_divergence(p, pf, qf, parse_atom(a.goal), solve_options(a.tol, a.max_iters, "iterate"),
                         a.generalized);
  nlohmann::ordered_json j;
  j["p_bar"] = number(r.p_bar);
  j["q_bar"] = number(r.q_bar);
  j["r_bar"] = number(r.r_bar);
  j["ce_pq"] = number(r.ce_pq);
  j["ce_pp"] = number(r.ce_pp);
  j["kl"] = number(r.kl);
  if (r.generalized_kl) j["generalized_kl"] = number(*r.generalized_kl);
  out << j.dump() << '\n';
  return kOk;
}

int do_fixtures(const std::string& name, const std::string& dir, bool list, std::ostream& out) {
  if (list) {
    for (const auto& f : all_fixtures()) out << f.name << "\t" << f.description << '\n';
    return kOk;
  }
  if (name.empty()) throw UsageError("fixtures needs a NAME or --list");
  if (dir.empty()) throw UsageError("fixtures needs -o DIR");
  const Fixture& f = fixture(name);
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& stem, const FactorData& d) {
    auto base = std::filesystem::path(dir) / stem;
    write_text_file(base.string() + ".wlp", render_program(d.program));
    write_text_file(base.string() + ".tsv", render_facts_tsv(d.facts));
    out << base.string() << ".wlp\n" << base.string() << ".tsv\n";
  };
  write(f.name, f.main);
  if (f.partner) write(f.name + ".partner", *f.partner);
  return kOk;
}

void add_solver_flags(CLI::App* cmd, double& tol, std::size_t& max_iters) {
  cmd->add_option("--tol", tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", max_iters, "Iteration budget")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted logic programs: solve, transform and measure", "wlp"};
  app.require_subcommand(1, 1);

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "Parse and validate a program");
  check_cmd->add_option("file", ca.file, "Program (.wlp)")->required();
  check_cmd->add_option("--facts", ca.facts, "Facts TSV (repeatable)");
  check_cmd->add_flag("--list", ca.list, "Print numbered rules");

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a program in a semiring");
  solve_cmd->add_option("file", sa.file, "Program (.wlp)")->required();
  solve_cmd->add_option("--facts", sa.facts, "Facts TSV (repeatable)");
  solve_cmd->add_option("--semiring", sa.semiring, "boolean|tropical|viterbi|real|entropy3");
  solve_cmd->add_option("--mode", sa.mode, "auto|priority|iterate");
  solve_cmd->add_option("--query", sa.query, "Print only atoms matching this pattern");
  add_solver_flags(solve_cmd, sa.tol, sa.max_iters);

  ProofsArgs pa;
  auto* proofs_cmd = app.add_subcommand("proofs", "Enumerate proofs of a goal");
  proofs_cmd->add_option("file", pa.file, "Program (.wlp)")->required();
  proofs_cmd->add_option("--goal", pa.goal, "Ground goal atom")->required();
  proofs_cmd->add_option("--facts", pa.facts, "Facts TSV (repeatable)");
  proofs_cmd->add_option("--semiring", pa.semiring, "Semiring for proof values");
  proofs_cmd->add_option("--max-depth", pa.max_depth, "Largest proof height");
  proofs_cmd->add_option("--max-count", pa.max_count, "Most proofs per atom");

  ProductArgs xa;
  auto* product_cmd = app.add_subcommand("product", "Pair two programs");
  product_cmd->add_option("left", xa.left, "First program")->required();
  product_cmd->add_option("right", xa.right, "Second program")->required();
  product_cmd->add_option("--left-facts", xa.left_facts, "Facts TSV for the first program");
  product_cmd->add_option("--right-facts", xa.right_facts, "Facts TSV for the second program");
  product_cmd->add_option("--pair", xa.pairs, "p/N=q/M:product (repeatable)");
  product_cmd->add_flag("--natural", xa.natural, "Rename apart and pair common rule heads");
  product_cmd->add_option("--shared", xa.shared, "Predicate kept common under --natural");
  product_cmd->add_option("--policy", xa.policy, "left|crossed|explicit");
  product_cmd->add_option("--align", xa.align, "L:R:i=j,... with 1-based rules and premises");
  product_cmd->add_option("-o,--output", xa.out_path, "Output file");

  EditArgs ea;
  auto* edit_cmd = app.add_subcommand("edit", "Apply program edits");
  edit_cmd->add_option("file", ea.file, "Program (.wlp)")->required();
  edit_cmd->add_option("--constrain", ea.constrain, "RULE:X=Y[,X=Y]");
  edit_cmd->add_option("--drop-rule", ea.drop, "Rule number to drop");
  edit_cmd->add_option("--keep-rule", ea.keep, "Rule number to keep; others are dropped");
  edit_cmd->add_option("--drop-head", ea.drop_head, "Drop every rule for this predicate");
  edit_cmd->add_option("--collapse", ea.collapse, "pred/N:i=j[,k=l] with 1-based positions");
  edit_cmd->add_option("--generalize", ea.generalize, "Replace a bridging rule by an input");
  edit_cmd->add_option("--fix", ea.fix, "pred:witness:i,j,...");
  edit_cmd->add_option("-o,--output", ea.out_path, "Output file");

  EntropyArgs na;
  auto* entropy_cmd = app.add_subcommand("entropy", "Entropy of the proof distribution of a goal");
  entropy_cmd->add_option("file", na.file, "Program (.wlp)")->required();
  entropy_cmd->add_option("--facts", na.facts, "Facts TSV (repeatable)");
  entropy_cmd->add_option("--goal", na.goal, "Goal atom or pattern")->required();
  add_solver_flags(entropy_cmd, na.tol, na.max_iters);

  KlArgs ka;
  auto* kl_cmd = app.add_subcommand("kl", "KL divergence between two weightings of one program");
  kl_cmd->add_option("file", ka.file, "Program (.wlp)")->required();
  kl_cmd->add_option("--p-facts", ka.p_facts, "Facts TSV for p")->required();
  kl_cmd->add_option("--q-facts", ka.q_facts, "Facts TSV for q")->required();
  kl_cmd->add_option("--goal", ka.goal, "Goal atom or pattern")->required();
  kl_cmd->add_flag("--generalized", ka.generalized, "Also report the unnormalized divergence");
  add_solver_flags(kl_cmd, ka.tol, ka.max_iters);

  std::string fixture_name, fixture_dir;
  bool fixture_list = false;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Write a built-in example to disk");
  fixtures_cmd->add_option("name", fixture_name, "Fixture name");
  fixtures_cmd->add_option("-o,--output", fixture_dir, "Output directory");
  fixtures_cmd->add_flag("--list", fixture_list, "List fixtures");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (check_cmd->parsed()) return do_check(ca, out, err);
    if (solve_cmd->parsed()) return do_solve(sa, out);
    if (proofs_cmd->parsed()) return do_proofs(pa, out);
    if (product_cmd->parsed()) return do_product(xa, out);
    if (edit_cmd->parsed()) return do_edit(ea, out);
    if (entropy_cmd->parsed()) return do_entropy(na, out);
    if (kl_cmd->parsed()) return do_kl(ka, out);
    if (fixtures_cmd->parsed()) return do_fixtures(fixture_name, fixture_dir, fixture_list, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ValidationError& e) {
    err << "invalid program:\n";
    for (const auto& d : e.diagnostics()) err << "  " << d.to_string() << '\n';
    return kValidation;
  } catch (const TypeError& e) {
    err << "type error: " << e.what() << '\n';
    return kValidation;
  } catch (const DivergenceError& e) {
    err << "no convergence: " << e.what() << "\n  iterations " << e.iterations() << "\n  residual "
        << format_number(e.residual(), 6) << '\n';
    return kDivergence;
  } catch (const TransformError& e) {
    err << "transform error: " << e.what() << '\n';
    return kTransform;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kTransform;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace wlp::cli
