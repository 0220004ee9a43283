#include <doctest.h>

#include <cmath>
#include <random>

#include "treeshift/classify.hpp"
#include "treeshift/corpus.hpp"
#include "treeshift/families.hpp"
#include "treeshift/oracle.hpp"
#include "treeshift/spec_format.hpp"

using namespace treeshift;
using namespace treeshift::oracle;

namespace {

WeightedShift fork12() { return parse_tree_spec("root w\nedge w a 1\nedge w b 2\n"); }

double opnorm(const Matrix& m) {
  if (m.size() == 0) return 0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

}  // namespace

TEST_CASE("tolerance ordering") {
  Tolerances ok;
  CHECK_NOTHROW(ok.validate());
  Tolerances bad{1e-6, 1e-7, 1e-9};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(MatrixOperator(Matrix::Identity(2, 2), bad), std::invalid_argument);
  CHECK_THROWS_AS(MatrixOperator(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("spectral atoms") {
  MatrixOperator id(Matrix::Identity(3, 3));
  REQUIRE(id.atoms().size() == 1);
  CHECK(id.atoms()[0] == doctest::Approx(1.0));
  CHECK(id.isometry().isApprox(Matrix::Identity(3, 3)));

  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 2;
  d(1, 1) = 3;
  d(2, 2) = 2;
  MatrixOperator dm(d);
  REQUIRE(dm.atoms().size() == 2);
  CHECK(dm.atoms()[0] == doctest::Approx(2.0));
  CHECK(dm.atoms()[1] == doctest::Approx(3.0));
  CHECK(dm.projections()[0].trace().real() == doctest::Approx(2.0));
  CHECK(dm.min_gap() == doctest::Approx(1.0));
  CHECK_FALSE(dm.fragile());

  auto m = from_shift(fork12());
  REQUIRE(m.atoms().size() == 2);
  CHECK(m.atoms()[0] == 0.0);
  CHECK(m.atoms()[1] == doctest::Approx(std::sqrt(5.0)));
  CHECK(m.polar_residual() < 1e-12);
  CHECK(m.modulus_residual() < 1e-12);
  CHECK(m.labels() == std::vector<std::string>{"w", "a", "b"});
}

TEST_CASE("close singular values are flagged") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = 1 + 5e-7;
  MatrixOperator m(d);
  CHECK(m.atoms().size() == 2);
  CHECK(m.fragile());
}

TEST_CASE("three-vertex tree: infinite constant") {
  auto m = from_shift(fork12());
  auto c = oracle_c_optimal(m);
  CHECK(c.value.is_infinite());
  REQUIRE(c.witness);
  CHECK_FALSE(build_T(m).has_value());
  auto q = check_quasinormal(m);
  CHECK_FALSE(q.verdict());
  CHECK(q.consistent());
}

TEST_CASE("unitary and zero operators") {
  corpus::Rng rng(5);
  MatrixOperator u(corpus::random_unitary(5, rng));
  auto q = check_quasinormal(u, std::nullopt, 1, 20);
  CHECK(q.verdict());
  CHECK(q.consistent());
  CHECK(oracle_c_optimal(u).value.value() == doctest::Approx(1.0));

  MatrixOperator z(Matrix::Zero(3, 3));
  CHECK(oracle_c_optimal(z).value == Extended<double>(0.0));
  auto t = build_T(z);
  REQUIRE(t);
  CHECK(t->t.norm() == 0.0);
}

TEST_CASE("pencil") {
  Matrix n = Matrix::Zero(2, 2), m = Matrix::Zero(2, 2);
  n(0, 0) = 3;
  n(1, 1) = 1;
  m(0, 0) = 1;
  m(1, 1) = 1;
  CHECK(pencil_max(n, m, 1e-9, 1e-6).value.value() == doctest::Approx(3.0));
  m(0, 0) = 0;
  CHECK(pencil_max(n, m, 1e-9, 1e-6).value.is_infinite());
  n(0, 0) = 0;
  CHECK(pencil_max(n, m, 1e-9, 1e-6).value.value() == doctest::Approx(1.0));
}

TEST_CASE("izonp counterexample") {
  CHECK(izonp_counterexample_check(1.0, 1.0).holds());
  auto skipped = izonp_counterexample_check(1.0, -1.0);
  CHECK_FALSE(skipped.precondition);
  CHECK_FALSE(skipped.holds());
  auto c = izonp_counterexample_check(0.0, 2.0);
  CHECK(c.holds());
  CHECK(c.norm > 1.0);
}

TEST_CASE("dense corpus against the constructed constants") {
  for (const auto& sample : corpus::matrix_corpus(17, 24)) {
    INFO(corpus::to_string(sample.kind));
    MatrixOperator m(sample.a);
    auto q = check_quasinormal(m, std::nullopt, 3, 30);
    CHECK(q.consistent());
    auto c = oracle_c_optimal(m);
    if (sample.c_expected) {
      REQUIRE(c.value.is_finite());
      CHECK(c.value.value() == doctest::Approx(*sample.c_expected).epsilon(1e-6));
    }
    if (sample.kind == corpus::MatrixKind::quasinormal) CHECK(q.verdict());
    if (c.value.is_finite()) {
      auto t = build_T(m);
      REQUIRE(t);
      CHECK(t->intertwining_residual < 1e-9);
      CHECK(t->commutation_residual < 1e-9);
      CHECK(t->norm == doctest::Approx(t->sqrt_c).epsilon(1e-6));
      CHECK(t->adjoint_residual < 1e-9);
    }
  }
}

TEST_CASE("isometric contractions") {
  corpus::Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    auto ic = corpus::random_isometric_contraction(rng);
    CHECK(opnorm(ic.t) <= 1.0 + 1e-12);
    const Matrix tv = ic.t * ic.subspace;
    CHECK((tv.adjoint() * tv - Matrix::Identity(ic.subspace.cols(), ic.subspace.cols())).norm() < 1e-10);
    // T*T keeps the subspace invariant: the part of T*T V outside span V vanishes.
    const Matrix p = ic.subspace * ic.subspace.adjoint();
    const Matrix ttv = ic.t.adjoint() * ic.t * ic.subspace;
    CHECK(((Matrix::Identity(p.rows(), p.cols()) - p) * ttv).norm() < 1e-10);
  }
}

TEST_CASE("shift matrices agree with exact classification") {
  for (const auto& s : corpus::tree_corpus(29, 30)) {
    for (ScopeKind kind : {ScopeKind::full, ScopeKind::interior}) {
      auto scope = matrix_scope(s, kind);
      Domain domain = scope.size() == s.size() ? Domain{} : domain_of(scope);
      auto m = from_shift(s);
      auto c = c_optimal(s, scope);
      auto oc = oracle_c_optimal(m, domain);
      CHECK(oc.value.is_finite() == c.value.is_finite());
      if (c.value.is_finite()) CHECK(oc.value.value() == doctest::Approx(to_double(c.value.value())).epsilon(1e-6));
      CHECK(check_quasinormal(m, domain, 4, 10).verdict() == is_quasinormal(s, scope).holds);
    }
  }
}

TEST_CASE("dimension cap") {
  auto s = families::gen_eunb(6);
  CHECK_THROWS_AS(from_shift(s, {}, std::size_t{50}), DimensionError);
  CHECK_NOTHROW(from_shift(s, {}, std::size_t{200}));
}

TEST_CASE("q-path transported checks") {
  auto s = families::gen_q_path(2, 8);
  auto m = from_shift(s);
  auto scope = matrix_scope(s, ScopeKind::interior);
  auto g = check_generalized(m, AtomFunction::identity(), AtomFunction::psi(2), domain_of(scope), 2, 20);
  CHECK(g.intertwines);
  CHECK(g.functional);
  CHECK(g.inclusion);
  CHECK(g.measures_agree(1e-6));
  REQUIRE(g.c.is_finite());
  CHECK(g.c.value() == doctest::Approx(1.0));

  auto plain = check_generalized(m, AtomFunction::identity(), AtomFunction::identity(), domain_of(scope), 2, 20);
  CHECK_FALSE(plain.inclusion);
  CHECK(plain.operators_agree());
  CHECK(plain.measures_agree(1e-6));
}
