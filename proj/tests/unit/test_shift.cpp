#include <doctest.h>

#include <cmath>
#include <random>

#include "treeshift/corpus.hpp"
#include "treeshift/families.hpp"
#include "treeshift/shift.hpp"
#include "treeshift/spec_format.hpp"

using namespace treeshift;

namespace {

WeightedShift fork12() { return parse_tree_spec("root w\nedge w a 1\nedge w b 2\n"); }

double inner_abs(const FiniteVector& f, const FiniteVector& g) {
  std::complex<double> s = 0;
  for (const auto& [v, x] : f.entries()) s += std::conj(x) * g[v];
  return std::abs(s);
}

}  // namespace

TEST_CASE("apply") {
  auto s = fork12();
  CHECK(apply(s, FiniteVector{}).is_zero());

  auto p = parse_tree_spec("root w\nedge w a 2\n");
  auto g = apply(p, FiniteVector::basis(p.tree().root()));
  CHECK(g.entries().size() == 1);
  CHECK(g[p.tree().at("a")] == std::complex<double>(2.0));

  auto h = apply(s, FiniteVector::basis(0));
  CHECK(h[s.tree().at("a")] == std::complex<double>(1.0));
  CHECK(h[s.tree().at("b")] == std::complex<double>(2.0));
  CHECK(h.norm_sq() == doctest::Approx(5.0));
}

TEST_CASE("vertex norms") {
  auto s = fork12();
  CHECK(vertex_norm_sq(s, s.tree().at("a")) == 0);
  CHECK(vertex_norm_sq(s, 0) == 5);
  auto fig2 = families::gen_fig2(families::chain_for_constant(4), 5);
  for (int i = 0; i < 5; ++i) CHECK(fig2.norm_sq(fig2.tree().at("u" + std::to_string(i))) == 1);
}

TEST_CASE("chi_eq and chi_plus") {
  auto s = fork12();
  CHECK(chi_eq(s, s.tree().at("a")).empty());
  CHECK(chi_eq(s, 0).empty());
  CHECK(chi_plus(s, s.tree().at("a")).empty());

  auto path = parse_tree_spec("root p0\nedge p0 p1 3\nedge p1 p2 3\nedge p2 p3 3\n");
  CHECK(chi_eq(path, path.tree().at("p1")) == std::vector<Vertex>{path.tree().at("p2")});

  auto e = families::gen_eunb(4);
  for (Vertex u = 0; u < e.size(); ++u) {
    if (e.tree().depth(u) > 2) continue;  // children and grandchildren present
    auto plus = chi_plus(e, u);
    REQUIRE(plus.size() == 1);
    CHECK(e.has_weight(plus[0]));
    for (Vertex v : e.tree().children(u)) CHECK((v == plus[0]) == e.has_weight(v));
  }

  auto zero_child = parse_tree_spec("root w\nedge w a 0\nedge a b 1\n");
  CHECK(chi_plus(zero_child, 0).empty());
}

TEST_CASE("norm bound") {
  auto zero = parse_tree_spec("root w\nedge w a 0\nedge w b 0\n");
  CHECK(norm_bound(zero).value == 0.0);
  CHECK(norm_bound(fork12()).value == doctest::Approx(std::sqrt(5.0)));
  for (std::size_t d = 2; d <= 6; ++d) {
    auto nb = norm_bound(families::gen_eunb(d));
    CHECK(nb.max_norm_sq == Rational(d * d));
    CHECK(nb.unbounded_family);
  }
}

TEST_CASE("shifted basis vectors: norms, orthogonality, linearity") {
  for (const auto& s : corpus::tree_corpus(11, 30)) {
    std::vector<FiniteVector> images;
    for (Vertex u = 0; u < s.size(); ++u) {
      images.push_back(apply(s, FiniteVector::basis(u)));
      CHECK(images.back().norm_sq() == doctest::Approx(to_double(s.norm_sq(u))));
    }
    for (Vertex u = 0; u < s.size(); ++u) {
      for (Vertex v = u + 1; v < s.size(); ++v) CHECK(inner_abs(images[u], images[v]) == 0.0);
    }
    std::mt19937_64 rng(s.size());
    std::normal_distribution<double> g;
    FiniteVector f, h;
    for (Vertex u = 0; u < s.size(); ++u) {
      f.set(u, {g(rng), g(rng)});
      h.set(u, {g(rng), g(rng)});
    }
    const std::complex<double> a{0.5, -1.5}, b{2.0, 0.25};
    auto lhs = apply(s, a * f + b * h);
    auto rhs = a * apply(s, f) + b * apply(s, h);
    for (Vertex v = 0; v < s.size(); ++v) CHECK(std::abs(lhs[v] - rhs[v]) < 1e-12);
  }
}

TEST_CASE("construction checks") {
  auto t = fork12().tree();
  CHECK_THROWS_AS(WeightedShift(t, {Rational(0), Rational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedShift(t, {Rational(1), Rational(1), Rational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedShift(t, {Rational(0), Rational(-1), Rational(1)}), std::invalid_argument);
  auto f = to_float(fork12());
  CHECK(f.norm_sq(0) == doctest::Approx(5.0));
}
