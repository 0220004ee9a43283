#include "treeshift/corpus.hpp"

#include <algorithm>
#include <cmath>

namespace treeshift::corpus {

using oracle::Index;
using oracle::Matrix;

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = {g(rng), g(rng)};
  }
  return m;
}

const Rational& positive_square(Rng& rng) {
  const auto& sq = weight_squares();
  return sq[pick(rng, 1, sq.size() - 1)];
}

struct ChildPlan {
  Rational weight_sq;
  Rational target;
};

std::vector<ChildPlan> plan_children(const Rational& target, Rng& rng) {
  const auto& sq = weight_squares();
  std::vector<ChildPlan> out;
  const double r = uniform(rng, 0, 1);
  const Rational quarter = target / 4;
  const bool splittable = std::find(sq.begin() + 1, sq.end(), quarter) != sq.end();
  if (r < 0.55) {
    out.push_back({target, target});
    if (pick(rng, 0, 2) == 0) out.push_back({0, positive_square(rng)});
  } else if (r < 0.7 && splittable) {
    const std::size_t heirs = pick(rng, 1, 3);
    for (std::size_t i = 0; i < 4; ++i) {
      Rational t = target;
      if (i >= heirs) {
        while (t == target) t = positive_square(rng);
      }
      out.push_back({quarter, t});
    }
  } else {
    const std::size_t k = pick(rng, 1, 3);
    for (std::size_t i = 0; i < k; ++i) out.push_back({sq[pick(rng, 0, sq.size() - 1)], positive_square(rng)});
  }
  return out;
}

}  // namespace

const std::vector<Rational>& weight_squares() {
  static const std::vector<Rational> values{Rational(0),    Rational(1, 16), Rational(1, 9), Rational(1, 4),
                                            Rational(1),    Rational(4),     Rational(9),    Rational(16)};
  return values;
}

WeightedShift random_uniform_tree(Rng& rng, std::size_t max_vertices) {
  const auto& sq = weight_squares();
  const std::size_t n = pick(rng, 1, std::max<std::size_t>(1, max_vertices));
  DirectedTree::Builder builder("v0");
  std::vector<Rational> w{0};
  for (std::size_t i = 1; i < n; ++i) {
    builder.add_edge("v" + std::to_string(pick(rng, 0, i - 1)), "v" + std::to_string(i));
    w.push_back(sq[pick(rng, 0, sq.size() - 1)]);
  }
  return WeightedShift(std::move(builder).build(), std::move(w), ExactArithmetic{}, {"random", {}, {}, {}});
}

WeightedShift random_class_tree(Rng& rng, std::size_t max_vertices) {
  DirectedTree::Builder builder("t0");
  std::vector<Rational> w{0};
  std::vector<Rational> target{positive_square(rng)};
  std::vector<std::size_t> level{0};
  const std::size_t max_height = pick(rng, 2, 5);
  std::size_t height = 0;
  for (std::size_t d = 0; d < max_height; ++d) {
    std::vector<std::vector<ChildPlan>> plans;
    std::size_t added = 0;
    for (std::size_t u : level) {
      plans.push_back(plan_children(target[u], rng));
      added += plans.back().size();
    }
    if (w.size() + added > max_vertices) break;
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (const ChildPlan& p : plans[i]) {
        const std::size_t id = w.size();
        builder.add_edge("t" + std::to_string(level[i]), "t" + std::to_string(id));
        w.push_back(p.weight_sq);
        target.push_back(p.target);
        next.push_back(id);
      }
    }
    level = std::move(next);
    height = d + 1;
  }
  return WeightedShift(std::move(builder).build(), std::move(w), ExactArithmetic{}, {"random-class", height, {}, {}});
}

std::vector<WeightedShift> tree_corpus(std::uint64_t seed, std::size_t count) {
  std::vector<WeightedShift> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed * 1000003ULL + i);
    out.push_back(i % 2 == 0 ? random_uniform_tree(rng) : random_class_tree(rng));
  }
  return out;
}

WeightedShift random_positive_path(Rng& rng, std::size_t max_depth) {
  const std::size_t depth = pick(rng, 3, std::max<std::size_t>(3, max_depth));
  std::vector<Rational> w(depth);
  for (auto& x : w) x = positive_square(rng);
  const std::size_t mode = pick(rng, 0, 2);
  if (mode < 2) {
    const std::size_t start = mode == 0 ? 0 : pick(rng, 0, depth - 1);
    for (std::size_t i = start + 1; i < depth; ++i) w[i] = w[start];
  }
  DirectedTree::Builder builder("p0");
  std::vector<Rational> full{0};
  for (std::size_t n = 1; n <= depth; ++n) {
    builder.add_edge("p" + std::to_string(n - 1), "p" + std::to_string(n));
    full.push_back(w[n - 1]);
  }
  return WeightedShift(std::move(builder).build(), std::move(full), ExactArithmetic{}, {"path", depth, {}, {}});
}

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::generic: return "generic";
    case MatrixKind::quasinormal: return "quasinormal";
    case MatrixKind::weakly_quasinormal: return "weakly_quasinormal";
    case MatrixKind::rank_deficient: return "rank_deficient";
  }
  return "generic";
}

Matrix random_unitary(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, n, rng));
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

DenseSample random_matrix(MatrixKind kind, Rng& rng, Index max_dim) {
  const Index n = static_cast<Index>(pick(rng, 2, static_cast<std::size_t>(std::max<Index>(2, max_dim))));
  DenseSample out{kind, Matrix::Zero(n, n), std::nullopt};
  switch (kind) {
    case MatrixKind::generic:
      out.a = gaussian(n, n, rng) / std::sqrt(static_cast<double>(n));
      return out;
    case MatrixKind::rank_deficient: {
      const Index r = static_cast<Index>(pick(rng, 1, static_cast<std::size_t>(n - 1)));
      out.a = gaussian(n, r, rng) * gaussian(r, n, rng) / static_cast<double>(n);
      return out;
    }
    case MatrixKind::quasinormal: {
      const Index zero = static_cast<Index>(pick(rng, 0, static_cast<std::size_t>(n / 3)));
      Matrix d = Matrix::Zero(n, n);
      Index at = 0;
      double t = 0.5;
      while (at < n - zero) {
        const Index m = std::min<Index>(static_cast<Index>(pick(rng, 1, 3)), n - zero - at);
        d.block(at, at, m, m) = (t + uniform(rng, 0, 0.3)) * random_unitary(m, rng);
        t += 0.5;
        at += m;
      }
      const Matrix w = random_unitary(n, rng);
      out.a = w * d * w.adjoint();
      out.c_expected = 1.0;
      return out;
    }
    case MatrixKind::weakly_quasinormal: {
      const Index budget = n / 2;
      std::vector<Index> sizes;
      for (Index used = 0; used < budget;) {
        const Index m = std::min<Index>(static_cast<Index>(pick(rng, 1, 2)), budget - used);
        sizes.push_back(m);
        used += m;
      }
      Matrix a = Matrix::Zero(n, n);
      Index block = 0, sink = budget;  // H_j blocks first, then H_0
      double t = 0.5, min_cos_sq = 1.0;
      for (Index m : sizes) {
        const double tj = t + uniform(rng, 0, 0.3);
        t += 0.5;
        Eigen::VectorXd cs(m), sn(m);
        for (Index i = 0; i < m; ++i) {
          const double c = uniform(rng, 0.4, 0.95);
          cs(i) = c;
          sn(i) = std::sqrt(1 - c * c);
          min_cos_sq = std::min(min_cos_sq, c * c);
        }
        const Matrix v1 = random_unitary(m, rng), v2 = random_unitary(m, rng);
        a.block(block, block, m, m) = tj * v1 * cs.cast<std::complex<double>>().asDiagonal() * v2;
        a.block(sink, block, m, m) = tj * sn.cast<std::complex<double>>().asDiagonal() * v2;
        block += m;
        sink += m;
      }
      const Matrix w = random_unitary(n, rng);
      out.a = w * a * w.adjoint();
      out.c_expected = 1.0 / min_cos_sq;
      return out;
    }
  }
  return out;
}

std::vector<DenseSample> matrix_corpus(std::uint64_t seed, std::size_t count) {
  static constexpr MatrixKind kinds[] = {MatrixKind::generic, MatrixKind::quasinormal,
                                         MatrixKind::weakly_quasinormal, MatrixKind::rank_deficient};
  std::vector<DenseSample> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed * 7919ULL + i);
    out.push_back(random_matrix(kinds[i % 4], rng));
  }
  return out;
}

IsometricContraction random_isometric_contraction(Rng& rng, Index max_dim) {
  const Index n = static_cast<Index>(pick(rng, 2, static_cast<std::size_t>(std::max<Index>(2, max_dim))));
  const Index k = static_cast<Index>(pick(rng, 1, static_cast<std::size_t>(n - 1)));
  Matrix c = gaussian(n - k, n - k, rng);
  Eigen::JacobiSVD<Matrix> svd(c);
  c *= uniform(rng, 0.2, 1.0) / svd.singularValues()(0);
  Matrix d = Matrix::Zero(n, n);
  d.topLeftCorner(k, k).setIdentity();
  d.bottomRightCorner(n - k, n - k) = c;
  const Matrix w = random_unitary(n, rng), v = random_unitary(n, rng);
  return {w * d * v.adjoint(), v.leftCols(k)};
}

}  // namespace treeshift::corpus
