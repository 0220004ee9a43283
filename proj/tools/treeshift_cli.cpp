// treeshift: classify weighted shifts on directed trees and cross-check the
// verdicts against dense matrix computations.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "treeshift/classify.hpp"
#include "treeshift/families.hpp"
#include "treeshift/oracle.hpp"
#include "treeshift/report.hpp"
#include "treeshift/spec_format.hpp"

using namespace treeshift;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitDisagree = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  std::string file;
  std::string family;
  std::size_t depth = 0;
  std::string c;
  std::string q;
};

struct Output {
  std::string format = "json";
};

void add_input(CLI::App* sub, Input& in) {
  sub->add_option("file", in.file, "tree-spec file ('-' for stdin)");
  sub->add_option("--family", in.family, "generated family")
      ->check(CLI::IsMember({"eunb", "fig1", "fig2", "fig3", "path"}));
  sub->add_option("--depth", in.depth, "truncation depth");
  sub->add_option("--c", in.c, "optimal constant for fig1/fig2/fig3 (fig2/fig3 default to alpha(n)^2 = 1/(n+1))");
  sub->add_option("--q", in.q, "ratio for the q-geometric path (default 1)");
}

void add_output(CLI::App* sub, Output& out) {
  sub->add_option("--format", out.format, "report format")->check(CLI::IsMember({"json", "text"}));
}

std::string read_all(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

WeightedShift load(const Input& in) {
  if (in.file.empty() == in.family.empty()) throw UsageError("give either a tree-spec file or --family");
  if (!in.file.empty()) return parse_tree_spec(read_all(in.file));
  auto opt = [](const std::string& v) { return v.empty() ? std::nullopt : std::optional(parse_rational(v)); };
  return families::generate(in.family, in.depth ? std::optional(in.depth) : std::nullopt, opt(in.c), opt(in.q));
}

ScopeKind parse_scope(const std::string& s) { return s == "full" ? ScopeKind::full : ScopeKind::interior; }

void emit(const json& j, const Output& out) {
  if (out.format == "text") {
    std::cout << json_to_text(j);
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

std::optional<std::pair<AtomFunction, AtomFunction>> transport(const std::string& phi, const std::string& psi) {
  if (phi.empty() && psi.empty()) return std::nullopt;
  return std::make_pair(AtomFunction::parse(phi.empty() ? "id" : phi), AtomFunction::parse(psi.empty() ? "id" : psi));
}

int run_izonp(std::uint64_t seed, const Output& out) {
  json checks = json::array();
  bool holds = true;
  auto record = [&](std::complex<double> b, std::complex<double> d) {
    const auto c = oracle::izonp_counterexample_check(b, d);
    json entry = izonp_json(c);
    entry["b"] = {b.real(), b.imag()};
    entry["d"] = {d.real(), d.imag()};
    checks.push_back(entry);
    if (c.precondition) holds = holds && c.holds();
  };
  record(1.0, 1.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) record({g(rng), g(rng)}, {g(rng), g(rng)});
  emit(json{{"check", "izonp"}, {"holds", holds}, {"instances", checks}}, out);
  return holds ? 0 : kExitDisagree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted shifts on directed trees: classification and matrix cross-checks"};
  app.require_subcommand(1);

  Input in;
  Output out;
  std::string scope = "interior";
  bool use_float = false;
  std::string phi, psi, check;
  std::uint64_t seed = 0;
  std::size_t random_trees = 0;
  std::size_t vectors = 100;

  CLI::App* classify_cmd = app.add_subcommand("classify", "per-vertex verdicts and optimal constant");
  add_input(classify_cmd, in);
  add_output(classify_cmd, out);
  classify_cmd->add_option("--scope", scope, "vertex scope")->check(CLI::IsMember({"interior", "full"}));
  classify_cmd->add_flag("--float", use_float, "floating-point arithmetic instead of exact rationals");
  classify_cmd->add_option("--phi", phi, "id, q:VALUE or const:VALUE");
  classify_cmd->add_option("--psi", psi, "id, q:VALUE or const:VALUE");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "cross-check verdicts against the dense matrix");
  add_input(oracle_cmd, in);
  add_output(oracle_cmd, out);
  oracle_cmd->add_option("--scope", scope, "vertex scope")->check(CLI::IsMember({"interior", "full"}));
  oracle_cmd->add_option("--phi", phi, "id, q:VALUE or const:VALUE");
  oracle_cmd->add_option("--psi", psi, "id, q:VALUE or const:VALUE");
  oracle_cmd->add_option("--seed", seed, "seed for random test vectors and corpora");
  oracle_cmd->add_option("--vectors", vectors, "random test vectors per check");
  oracle_cmd->add_option("--check", check, "standalone check")->check(CLI::IsMember({"izonp"}));
  oracle_cmd->add_option("--random-trees", random_trees, "run the comparison on N seeded random trees");

  CLI::App* dot_cmd = app.add_subcommand("dot", "Graphviz rendering of the tree");
  add_input(dot_cmd, in);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*oracle_cmd && !check.empty()) return run_izonp(seed, out);
    if (*oracle_cmd && random_trees > 0) {
      OracleOptions opt;
      opt.seed = seed;
      opt.random_vectors = vectors;
      opt.transport = transport(phi, psi);
      OracleComparison r = compare_random_trees(seed, random_trees, opt);
      emit(r.report, out);
      return r.agree ? 0 : kExitDisagree;
    }

    const WeightedShift s = load(in);

    if (*dot_cmd) {
      std::cout << export_dot(s);
      return 0;
    }

    if (*classify_cmd) {
      emit(classify_report(s, parse_scope(scope), use_float, transport(phi, psi)), out);
      return 0;
    }

    OracleOptions opt;
    opt.scope = parse_scope(scope);
    opt.seed = seed;
    opt.random_vectors = vectors;
    opt.transport = transport(phi, psi);
    OracleComparison r = compare_with_oracle(s, opt);
    emit(r.report, out);
    if (!r.agree) {
      std::cerr << "oracle disagreement; witness vector:\n" << r.witness.dump(2) << "\n";
      return kExitDisagree;
    }
    return 0;
  } catch (const oracle::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n" << e.dump();
    return kExitNumerical;
  } catch (const oracle::DimensionError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    // Parameter, tree-structure and number-format errors.
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
