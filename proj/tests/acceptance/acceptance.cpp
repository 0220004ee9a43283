// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every random input is drawn from a fixed seed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "treeshift/classify.hpp"
#include "treeshift/corpus.hpp"
#include "treeshift/families.hpp"
#include "treeshift/oracle.hpp"

using namespace treeshift;
using oracle::Domain;
using oracle::MatrixOperator;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr std::size_t kTrees = 200;
constexpr std::size_t kMatrices = 50;
constexpr double kVerdict = 1e-6;
constexpr double kResidual = 1e-9;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

const std::vector<WeightedShift>& trees() {
  static const auto corpus = corpus::tree_corpus(kSeed, kTrees);
  return corpus;
}

const std::vector<corpus::DenseSample>& matrices() {
  static const auto corpus = corpus::matrix_corpus(kSeed, kMatrices);
  return corpus;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

bool c_match(const Extended<Rational>& exact, const Extended<double>& approx) {
  if (exact.is_infinite() || approx.is_infinite()) return exact.is_infinite() == approx.is_infinite();
  return close(to_double(exact.value()), approx.value(), kVerdict);
}

std::vector<Vertex> full(const WeightedShift& s) { return scope_vertices(s, ScopeKind::full); }

bool nonzero(const WeightedShift& s, std::span<const Vertex> scope) {
  for (Vertex u : scope) {
    if (s.effective_norm_sq(u) != 0) return true;
  }
  return false;
}

std::string at(const std::string& what, std::size_t i) { return what + " #" + std::to_string(i); }

void criterion1(Outcome& o) {
  for (std::size_t i = 0; i < trees().size(); ++i) {
    const auto& s = trees()[i];
    const auto m = oracle::from_shift(s);
    if (!c_match(c_optimal(s, full(s)).value, oracle::oracle_c_optimal(m).value)) o.fail(at("c_opt mismatch on tree", i));
    if (is_quasinormal(s, full(s)).holds != oracle::check_quasinormal(m, std::nullopt, kSeed + i, 10).verdict()) {
      o.fail(at("quasinormal mismatch on tree", i));
    }
  }
}

void criterion2(Outcome& o) {
  auto check = [&](const MatrixOperator& m, std::uint64_t seed, const std::string& where) {
    const auto q = oracle::check_quasinormal(m, std::nullopt, seed, 100);
    if (q.polar_commutes != q.measures_equal || q.polar_commutes != q.absolutely_continuous) o.fail(where);
  };
  for (std::size_t i = 0; i < trees().size(); ++i) check(oracle::from_shift(trees()[i]), kSeed + i, at("tree", i));
  for (std::size_t i = 0; i < matrices().size(); ++i) check(MatrixOperator(matrices()[i].a), kSeed + i, at("matrix", i));
}

void criterion3(Outcome& o) {
  const Extended<Rational> one(Rational(1));
  for (std::size_t i = 0; i < trees().size(); ++i) {
    const auto& s = trees()[i];
    if (!nonzero(s, full(s))) continue;
    if (is_quasinormal(s, full(s)).holds != (c_optimal(s, full(s)).value == one)) o.fail(at("exact, tree", i));
    const auto f = to_float(s);
    const auto fs = scope_vertices(f, ScopeKind::full);
    const auto cf = c_optimal(f, fs).value;
    const bool is_one = cf.is_finite() && std::abs(cf.value() - 1.0) <= kVerdict;
    if (is_quasinormal(f, fs).holds != is_one) o.fail(at("float, tree", i));
  }
  for (std::size_t i = 0; i < matrices().size(); ++i) {
    const MatrixOperator m(matrices()[i].a);
    const auto c = oracle::oracle_c_optimal(m).value;
    const bool is_one = c.is_finite() && std::abs(c.value() - 1.0) <= kVerdict;
    if (oracle::check_quasinormal(m, std::nullopt, kSeed + i, 100).verdict() != is_one) o.fail(at("matrix", i));
  }
}

void criterion4(Outcome& o) {
  std::size_t built = 0;
  auto check = [&](const MatrixOperator& m, const std::string& where) {
    const auto c = oracle::oracle_c_optimal(m);
    if (c.value.is_infinite()) return;
    const auto t = oracle::build_T(m);
    if (!t) return o.fail(where + ": no intertwiner for a finite constant");
    ++built;
    if (t->intertwining_residual > kResidual) o.fail(where + ": ||TA - |A||| too large");
    if (t->commutation_residual > kResidual) o.fail(where + ": spectral commutation residual too large");
    if (std::abs(t->norm - t->sqrt_c) > kVerdict) o.fail(where + ": ||T|| differs from sqrt(c)");
    if (t->range_residual > kResidual) o.fail(where + ": range residual too large");
    if (t->adjoint_residual > kResidual) o.fail(where + ": U = P T* residual too large");
  };
  for (std::size_t i = 0; i < trees().size(); ++i) check(oracle::from_shift(trees()[i]), at("tree", i));
  for (std::size_t i = 0; i < matrices().size(); ++i) check(MatrixOperator(matrices()[i].a), at("matrix", i));
  if (built == 0) o.fail("no instance with a finite constant");
}

void criterion5(Outcome& o) {
  corpus::Rng rng(kSeed);
  for (int i = 0; i < 50; ++i) {
    const auto ic = corpus::random_isometric_contraction(rng);
    const oracle::Matrix k = ic.subspace;
    const oracle::Matrix gap = ic.t.adjoint() * ic.t * k - k;
    if (gap.norm() > kResidual) o.fail(at("T*T k != k for contraction", static_cast<std::size_t>(i)));
  }
  std::normal_distribution<double> g;
  int drawn = 0;
  while (drawn < 20) {
    const std::complex<double> b{g(rng), g(rng)}, d{g(rng), g(rng)};
    const auto c = oracle::izonp_counterexample_check(b, d, kResidual);
    if (!c.precondition) continue;
    ++drawn;
    if (!c.holds()) o.fail(at("2x2 instance", static_cast<std::size_t>(drawn)));
  }
}

void criterion6(Outcome& o) {
  const auto params = families::comb_for_constant(4);
  const auto s = families::gen_fig1(params, 5);
  const auto r = classify(s);
  if (!(r.c_opt == Extended<Rational>(Rational(4)))) o.fail("interior c_opt is " + format_extended(r.c_opt));
  if (r.hyponormal != Tristate::no) o.fail("hyponormal verdict is " + to_string(r.hyponormal));
  if (hyponormal_sum(s, s.tree().at("u1")) != Rational(5, 4)) o.fail("hyponormality sum at u1 is not 5/4");
  if (!r.abc3) o.fail("abc3 fails");
  double last = -1;
  for (std::size_t d = 2; d <= 8; ++d) {
    const double b = norm_bound(families::gen_fig1(params, d)).value;
    if (!(b > last)) o.fail(at("norm bound does not increase at depth", d));
    last = b;
  }
}

void criterion7(Outcome& o) {
  for (std::size_t d = 2; d <= 8; ++d) {
    const auto r = classify(families::gen_fig2(families::chain_vanishing(), d));
    if (!(r.c_opt == Extended<Rational>(Rational(d + 1)))) o.fail(at("c_opt != depth+1 at depth", d));
    if (!r.abc3) o.fail(at("abc3 fails at depth", d));
    if (r.hyponormal != Tristate::no) o.fail(at("not reported non-hyponormal at depth", d));
  }
}

void criterion8(Outcome& o) {
  for (std::size_t d = 2; d <= 6; ++d) {
    const auto s = families::gen_eunb(d);
    const auto scope = interior_vertices(s);
    if (!is_quasinormal(s, scope).holds) o.fail(at("not quasinormal at depth", d));
    for (Vertex u : scope) {
      for (const Rational alpha : {Rational(1, 2), Rational(1), Rational(2)}) {
        if (!sleu_identity_check(s, u, alpha).is_zero) o.fail(at("nonzero residual at depth", d));
      }
    }
  }
}

void criterion9(Outcome& o) {
  constexpr std::size_t depth = 5;
  corpus::Rng rng(kSeed);
  std::uniform_int_distribution<int> num(1, 15), den(1, 16);
  std::size_t generated = 0;
  for (int i = 0; i < 100; ++i) {
    // alpha(n)^2 in (0, 1), gamma(n)^2 > 0; beta fixed by the sum rule.
    std::vector<Rational> alpha_sq(depth + 2), gamma_sq(depth + 1);
    for (auto& a : alpha_sq) a = Rational(num(rng), 16);
    for (auto& c : gamma_sq) c = Rational(num(rng), den(rng));
    families::ForkParams p;
    p.chain.alpha_sq = [alpha_sq](std::size_t n) { return alpha_sq.at(n); };
    p.chain.beta_sq = [alpha_sq](std::size_t n) { return 1 - alpha_sq.at(n + 1); };
    p.gamma_sq = [gamma_sq](std::size_t n) { return gamma_sq.at(n); };
    p.delta_sq = [b = p.chain.beta_sq, gamma_sq](std::size_t n) { return b(n) + gamma_sq.at(n); };
    bool valid = true;
    for (std::size_t n = 0; n <= depth; ++n) {
      const bool ratio = families::fork_ratio_condition(p, n);
      const bool delta = families::fork_delta_condition(p, n);
      if (ratio != delta) o.fail(at("conditions differ on draw", static_cast<std::size_t>(i)));
      valid = valid && delta;
    }
    if (!valid) continue;
    ++generated;
    if (classify(families::gen_fig3(p, depth)).hyponormal != Tristate::yes) {
      o.fail(at("fork shift not hyponormal on draw", static_cast<std::size_t>(i)));
    }
  }
  if (generated == 0) o.fail("no valid draw");
}

void criterion10(Outcome& o) {
  const std::vector<std::pair<AtomFunction, AtomFunction>> pairs{
      {AtomFunction::identity(), AtomFunction::identity()},
      {AtomFunction::identity(), AtomFunction::psi(Rational(1, 2))},
      {AtomFunction::identity(), AtomFunction::psi(2)},
      {AtomFunction::constant(1), AtomFunction::identity()}};
  auto check = [&](const MatrixOperator& m, std::uint64_t seed, const std::string& where) {
    for (const auto& [phi, psi] : pairs) {
      if (!oracle::check_generalized(m, phi, psi, std::nullopt, seed, 20).operators_agree()) {
        o.fail(where + " (" + phi.name() + ", " + psi.name() + ")");
      }
    }
  };
  for (std::size_t i = 0; i < kMatrices; ++i) check(MatrixOperator(matrices()[i].a), kSeed + i, at("matrix", i));
  for (std::size_t i = 0; i < 20; ++i) check(oracle::from_shift(trees()[i]), kSeed + i, at("tree", i));

  for (const Rational q : {Rational(2), Rational(1, 2), Rational(3)}) {
    const auto s = families::gen_q_path(q, 8);
    const auto scope = interior_vertices(s);
    const auto phi = AtomFunction::identity();
    const auto psi = AtomFunction::psi(q);
    if (!(generalized_c_optimal(s, phi, psi, scope).value == Extended<Rational>(Rational(1)))) {
      o.fail("q-path classify constant is not 1 for q=" + to_string(q));
    }
    const auto g = oracle::check_generalized(oracle::from_shift(s), phi, psi,
                                             oracle::domain_of(oracle::matrix_scope(s, ScopeKind::interior)), kSeed, 20);
    if (g.functional_residual > kResidual) o.fail("condition (b) residual too large for q=" + to_string(q));
  }
}

void criterion11(Outcome& o) {
  corpus::Rng rng(kSeed);
  for (std::size_t i = 0; i < 50; ++i) {
    const auto s = corpus::random_positive_path(rng);
    const auto scope = interior_vertices(s);
    if (abc3_holds(s, scope).holds != is_quasinormal(s, scope).holds) o.fail(at("path", i));
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
    double budget_s;  // 0: no runtime bound
  };
  const std::vector<Criterion> criteria{
      {1, "classifier and matrix agree on 200 random trees", criterion1, 30},
      {2, "polar commutation, measure equality and absolute continuity agree", criterion2, 0},
      {3, "quasinormal iff optimal constant is 1", criterion3, 0},
      {4, "intertwiner construction diagnostics", criterion4, 0},
      {5, "isometric contractions and the 2x2 counterexample", criterion5, 0},
      {6, "comb family at c = 4", criterion6, 5},
      {7, "chain family with vanishing alpha", criterion7, 0},
      {8, "eunb truncations", criterion8, 0},
      {9, "fork conditions and hyponormality", criterion9, 0},
      {10, "transported conditions agree", criterion10, 0},
      {11, "path shifts: abc3 iff quasinormal", criterion11, 0},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) o.fail("took " + std::to_string(secs) + " s");
    all = all && o.pass;
    std::printf("%s criterion %2d: %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.pass ? "" : " -- ", o.detail.str().c_str());
  }
  return all ? 0 : 1;
}
