#include "treeshift/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace treeshift::oracle {

void Tolerances::validate() const {
  if (!(lin > 0 && lin < cluster && cluster < verdict) || !std::isfinite(verdict)) {
    throw std::invalid_argument("tolerances must satisfy 0 < lin < cluster < verdict");
  }
}

std::size_t dimension_cap() {
  if (const char* env = std::getenv("TREESHIFT_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 2000;
}

namespace {

double fro(const Matrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

/// Projection onto the column space of m, ignoring singular values whose
/// square is at or below kernel_tol.
Matrix column_projection(const Matrix& m, double kernel_tol) {
  Matrix p = Matrix::Zero(m.rows(), m.rows());
  if (m.cols() == 0) return p;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) * s(i) <= kernel_tol) continue;
    const Vector w = svd.matrixU().col(i);
    p += w * w.adjoint();
  }
  return p;
}

/// Level sets of a family of projections, e.g. F_s and G_s.
struct Levels {
  std::vector<double> values;
  std::vector<Matrix> image;    // applied after A
  std::vector<Matrix> modulus;  // applied after |A|
};

Levels spectral_levels(const MatrixOperator& m) {
  return {m.atoms(), m.projections(), m.projections()};
}

Levels transported_levels(const MatrixOperator& m, const AtomFunction& phi, const AtomFunction& psi) {
  const auto& t = m.atoms();
  std::vector<double> phi_v(t.size()), psi_v(t.size()), all;
  for (std::size_t k = 0; k < t.size(); ++k) {
    phi_v[k] = phi.apply(t[k]);
    psi_v[k] = psi.apply(t[k]);
    all.push_back(phi_v[k]);
    all.push_back(psi_v[k]);
  }
  std::sort(all.begin(), all.end());
  const double radius = m.tolerances().cluster;
  std::vector<double> levels;
  for (double x : all) {
    if (levels.empty() || x - levels.back() > radius * std::max(1.0, std::abs(x))) levels.push_back(x);
  }
  auto level_of = [&](double x) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < levels.size(); ++j) {
      if (std::abs(levels[j] - x) < std::abs(levels[best] - x)) best = j;
    }
    return best;
  };
  const Index n = m.dim();
  Levels out{levels, std::vector<Matrix>(levels.size(), Matrix::Zero(n, n)),
             std::vector<Matrix>(levels.size(), Matrix::Zero(n, n))};
  for (std::size_t k = 0; k < t.size(); ++k) {
    out.image[level_of(psi_v[k])] += m.projections()[k];
    out.modulus[level_of(phi_v[k])] += m.projections()[k];
  }
  return out;
}

/// Domain basis columns, their components in each modulus level, and
/// seeded random combinations; all normalized.
std::vector<Vector> test_vectors(const Matrix& q, const std::vector<Matrix>& components, std::uint64_t seed,
                                 std::size_t random_count) {
  std::vector<Vector> out;
  for (Index j = 0; j < q.cols(); ++j) out.push_back(q.col(j));
  for (const Matrix& g : components) {
    for (Index j = 0; j < q.cols(); ++j) {
      Vector v = g * q.col(j);
      const double nv = v.norm();
      if (nv > 1e-12) out.push_back(v / nv);
    }
  }
  if (q.cols() > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (std::size_t r = 0; r < random_count; ++r) {
      Vector z(q.cols());
      for (Index j = 0; j < q.cols(); ++j) z(j) = {gauss(rng), gauss(rng)};
      Vector v = q * z;
      out.push_back(v / v.norm());
    }
  }
  return out;
}

struct MassComparison {
  bool equal = true;
  bool absolutely_continuous = true;
};

/// image_s = ||F_s A f||^2 against modulus_s = ||G_s |A| f||^2.
MassComparison compare_masses(const MatrixOperator& m, const Levels& lv, const Vector& f) {
  const double threshold = m.tolerances().verdict * m.scale() * m.scale() * f.squaredNorm();
  const Vector af = m.matrix() * f;
  const Vector mf = m.modulus() * f;
  MassComparison out;
  for (std::size_t j = 0; j < lv.values.size(); ++j) {
    const double img = (lv.image[j] * af).squaredNorm();
    const double mod = (lv.modulus[j] * mf).squaredNorm();
    if (std::abs(img - mod) > threshold) out.equal = false;
    if (img > threshold && mod <= threshold) out.absolutely_continuous = false;
  }
  return out;
}

struct MeasureVerdicts {
  bool equal = true;
  bool absolutely_continuous = true;
  std::size_t tested = 0;
  std::optional<Vector> witness;
};

MeasureVerdicts measure_verdicts(const MatrixOperator& m, const Levels& lv, const Matrix& q, std::uint64_t seed,
                                 std::size_t random_count) {
  MeasureVerdicts out;
  for (const Vector& f : test_vectors(q, lv.modulus, seed, random_count)) {
    ++out.tested;
    const MassComparison c = compare_masses(m, lv, f);
    if ((!c.equal || !c.absolutely_continuous) && !out.witness) out.witness = f;
    out.equal = out.equal && c.equal;
    out.absolutely_continuous = out.absolutely_continuous && c.absolutely_continuous;
  }
  return out;
}

struct LevelPencil {
  Extended<double> value = 0.0;
  std::vector<double> per_level;
  std::optional<std::size_t> infinite_level;
  std::optional<Vector> witness;
};

/// sup ||G_s|A|f||^2 / ||F_s A f||^2 over levels s and f in the domain.
LevelPencil level_pencil(const MatrixOperator& m, const Levels& lv, const Matrix& q) {
  const double s2 = m.scale() * m.scale();
  const double kernel_tol = m.tolerances().lin * s2;
  const double verdict_tol = m.tolerances().verdict * s2;
  LevelPencil out;
  double best = 0;
  for (std::size_t j = 0; j < lv.values.size(); ++j) {
    const Matrix mq = m.modulus() * q;
    const Matrix aq = m.matrix() * q;
    const Matrix n = mq.adjoint() * lv.modulus[j] * mq;
    const Matrix d = aq.adjoint() * lv.image[j] * aq;
    PencilMax p = pencil_max(n, d, kernel_tol, verdict_tol);
    if (p.value.is_infinite()) {
      out.per_level.push_back(std::numeric_limits<double>::infinity());
      if (!out.infinite_level) {
        out.infinite_level = j;
        out.witness = q * *p.witness;
      }
      continue;
    }
    out.per_level.push_back(p.value.value());
    if (p.value.value() > best) {
      best = p.value.value();
      if (p.witness) out.witness = q * *p.witness;
    }
  }
  out.value = out.infinite_level ? Extended<double>::infinity() : Extended<double>(best);
  return out;
}

}  // namespace

MatrixOperator::MatrixOperator(Matrix a, Tolerances tol, std::vector<std::string> labels)
    : a_(std::move(a)), tol_(tol), labels_(std::move(labels)) {
  tol_.validate();
  if (a_.rows() != a_.cols()) throw std::invalid_argument("operator matrix must be square");
  const Index n = a_.rows();
  if (labels_.empty()) {
    for (Index i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  } else if (static_cast<Index>(labels_.size()) != n) {
    throw std::invalid_argument("basis label count does not match the matrix");
  }
  if (!a_.allFinite()) throw NumericalError("matrix has non-finite entries", dump());
  modulus_ = u_ = range_projection_ = modulus_range_projection_ = Matrix::Zero(n, n);
  min_gap_ = std::numeric_limits<double>::infinity();
  if (n == 0) return;

  Eigen::JacobiSVD<Matrix> svd(a_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const Matrix& w = svd.matrixU();
  const Matrix& v = svd.matrixV();
  if (!s.allFinite() || !w.allFinite() || !v.allFinite()) {
    throw NumericalError("singular value decomposition did not converge", dump());
  }
  norm_ = s(0);

  const Matrix gram = a_.adjoint() * a_;
  const Matrix rebuilt = v * s.cwiseAbs2().cast<std::complex<double>>().asDiagonal() * v.adjoint();
  if (fro(gram - rebuilt) > tol_.lin * std::max(1.0, fro(gram))) {
    throw NumericalError("eigendecomposition of A*A has a large residual", dump());
  }

  // Singular values come sorted descending; cluster them ascending.
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = n - 1 - i;
  std::vector<std::vector<Index>> clusters;
  for (Index i : order) {
    if (clusters.empty() || s(i) - s(clusters.back().back()) > tol_.cluster) clusters.emplace_back();
    clusters.back().push_back(i);
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& members = clusters[c];
    const double lo = s(members.front());
    const double hi = s(members.back());
    double t = 0;
    if (!(c == 0 && lo <= tol_.cluster)) {
      for (Index i : members) t += s(i);
      t /= static_cast<double>(members.size());
    }
    Matrix e = Matrix::Zero(n, n);
    for (Index i : members) {
      e += v.col(i) * v.col(i).adjoint();
      if (t > 0) {
        u_ += w.col(i) * v.col(i).adjoint();
        range_projection_ += w.col(i) * w.col(i).adjoint();
        modulus_range_projection_ += v.col(i) * v.col(i).adjoint();
      }
    }
    modulus_ += t * e;
    if (!atoms_.empty()) min_gap_ = std::min(min_gap_, t - atoms_.back());
    atoms_.push_back(t);
    diameters_.push_back(hi - lo);
    projections_.push_back(std::move(e));
  }
  modulus_residual_ = fro(gram - modulus_ * modulus_);
  polar_residual_ = fro(a_ - u_ * modulus_);
}

std::string MatrixOperator::dump() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "matrix " << a_.rows() << "x" << a_.cols() << "\n";
  for (Index i = 0; i < a_.rows(); ++i) {
    for (Index j = 0; j < a_.cols(); ++j) {
      os << (j ? " " : "") << a_(i, j).real();
      if (a_(i, j).imag() != 0) os << (a_(i, j).imag() > 0 ? "+" : "") << a_(i, j).imag() << "i";
    }
    os << "\n";
  }
  return os.str();
}

Matrix domain_basis(Index dim, const Domain& domain) {
  if (!domain) return Matrix::Identity(dim, dim);
  Matrix q = Matrix::Zero(dim, static_cast<Index>(domain->size()));
  for (std::size_t j = 0; j < domain->size(); ++j) {
    const Index i = (*domain)[j];
    if (i < 0 || i >= dim) throw std::out_of_range("domain index outside the matrix");
    q(i, static_cast<Index>(j)) = 1.0;
  }
  return q;
}

MeasurePair measure_pair(const MatrixOperator& m, const Vector& f) {
  if (f.size() != m.dim()) throw std::invalid_argument("vector size does not match the operator");
  const double threshold = m.tolerances().verdict * m.scale() * m.scale() * f.squaredNorm();
  const Vector af = m.matrix() * f;
  const Vector mf = m.modulus() * f;
  MeasurePair out;
  for (std::size_t k = 0; k < m.atoms().size(); ++k) {
    const double t2 = m.atoms()[k] * m.atoms()[k];
    const double img = (m.projections()[k] * af).squaredNorm();
    const double mod = (m.projections()[k] * mf).squaredNorm();
    if (img > threshold) out.image.add(t2, img);
    if (mod > threshold) out.modulus.add(t2, mod);
  }
  return out;
}

QuasinormalCheck check_quasinormal(const MatrixOperator& m, const Domain& domain, std::uint64_t seed,
                                   std::size_t random_vectors) {
  const Tolerances& tol = m.tolerances();
  const Matrix q = domain_basis(m.dim(), domain);
  const Matrix& u = m.isometry();
  const Matrix& mod = m.modulus();
  QuasinormalCheck out;
  out.polar_residual = fro((u * mod - mod * u) * q) / m.scale();
  for (const Matrix& e : m.projections()) {
    out.projection_residual = std::max(out.projection_residual, fro((u * e - e * u) * q));
  }
  out.polar_commutes = out.polar_residual <= tol.verdict;
  out.projections_commute = out.projection_residual <= tol.verdict;
  MeasureVerdicts mv = measure_verdicts(m, spectral_levels(m), q, seed, random_vectors);
  out.measures_equal = mv.equal;
  out.absolutely_continuous = mv.absolutely_continuous;
  out.vectors_tested = mv.tested;
  out.witness = std::move(mv.witness);
  return out;
}

PencilMax pencil_max(const Matrix& n, const Matrix& m, double kernel_tol, double verdict_tol) {
  PencilMax out;
  if (m.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  const Matrix nh = hermitian_part(n);
  std::vector<Index> kernel, range;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    (es.eigenvalues()(i) <= kernel_tol ? kernel : range).push_back(i);
  }
  if (!kernel.empty()) {
    Matrix k(m.rows(), static_cast<Index>(kernel.size()));
    for (std::size_t j = 0; j < kernel.size(); ++j) k.col(static_cast<Index>(j)) = es.eigenvectors().col(kernel[j]);
    Eigen::SelfAdjointEigenSolver<Matrix> ek(hermitian_part(k.adjoint() * nh * k));
    const Index top = ek.eigenvalues().size() - 1;
    if (ek.eigenvalues()(top) > verdict_tol) {
      out.value = Extended<double>::infinity();
      out.witness = k * ek.eigenvectors().col(top);
      return out;
    }
  }
  if (range.empty()) return out;
  Matrix r(m.rows(), static_cast<Index>(range.size()));
  Eigen::VectorXd inv_sqrt(static_cast<Index>(range.size()));
  for (std::size_t j = 0; j < range.size(); ++j) {
    r.col(static_cast<Index>(j)) = es.eigenvectors().col(range[j]);
    inv_sqrt(static_cast<Index>(j)) = 1.0 / std::sqrt(es.eigenvalues()(range[j]));
  }
  const auto d = inv_sqrt.cast<std::complex<double>>().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> ec(hermitian_part(d * (r.adjoint() * nh * r) * d));
  const Index top = ec.eigenvalues().size() - 1;
  out.value = std::max(0.0, ec.eigenvalues()(top));
  out.witness = r * (d * ec.eigenvectors().col(top));
  return out;
}

OracleC oracle_c_optimal(const MatrixOperator& m, const Domain& domain) {
  const Matrix q = domain_basis(m.dim(), domain);
  LevelPencil p = level_pencil(m, spectral_levels(m), q);
  return {p.value, std::move(p.per_level), p.infinite_level, std::move(p.witness)};
}

bool TConstruction::passes(const Tolerances& tol) const {
  return intertwining_residual <= tol.verdict && commutation_residual <= tol.verdict &&
         std::abs(norm - sqrt_c) <= tol.verdict && range_residual <= tol.verdict &&
         adjoint_residual <= tol.verdict;
}

std::optional<TConstruction> build_T(const MatrixOperator& m, const Domain& domain) {
  const OracleC c = oracle_c_optimal(m, domain);
  if (c.value.is_infinite()) return std::nullopt;
  const Index n = m.dim();
  const Matrix q = domain_basis(n, domain);
  const double kernel_tol = m.tolerances().lin * m.scale() * m.scale();
  const Matrix aq = m.matrix() * q;
  const Matrix mq = m.modulus() * q;

  TConstruction out;
  out.t = Matrix::Zero(n, n);
  for (const Matrix& e : m.projections()) {
    const Matrix x = e * aq;
    if (x.cols() == 0) continue;
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Matrix pinv = Matrix::Zero(x.cols(), x.rows());
    for (Index i = 0; i < s.size(); ++i) {
      if (s(i) * s(i) <= kernel_tol) continue;
      pinv += svd.matrixV().col(i) * svd.matrixU().col(i).adjoint() / s(i);
    }
    out.t += (e * mq) * pinv;
  }

  out.intertwining_residual = fro(out.t * aq - mq);
  for (const Matrix& e : m.projections()) {
    out.commutation_residual = std::max(out.commutation_residual, fro(out.t * e - e * out.t));
  }
  out.norm = spectral_norm(out.t);
  out.sqrt_c = std::sqrt(c.value.value());
  out.range_residual = fro((Matrix::Identity(n, n) - m.modulus_range_projection()) * out.t);
  if (!domain) {
    out.adjoint_residual = fro(m.isometry() - m.range_projection() * out.t.adjoint());
  } else {
    const Matrix pk = column_projection(aq, kernel_tol);
    out.adjoint_residual = fro((m.isometry() - pk * out.t.adjoint()) * mq);
  }
  return out;
}

IzonpCheck izonp_counterexample_check(std::complex<double> b, std::complex<double> d, double tol) {
  IzonpCheck out;
  out.precondition = std::abs(b + d) > tol;
  if (!out.precondition) return out;
  const double h = 1.0 / std::sqrt(2.0);
  Matrix t(2, 2);
  t << h, b, h, d;
  const Vector e1 = Vector::Unit(2, 0);
  out.axis_isometric = std::abs((t * e1).squaredNorm() - 1.0) <= tol;
  const Vector g = t.adjoint() * t * e1;
  out.axis_not_preserved = std::abs(g(1)) > tol;
  out.norm = spectral_norm(t);
  out.not_contraction = out.norm > 1.0 + tol;
  return out;
}

GeneralizedCheck check_generalized(const MatrixOperator& m, const AtomFunction& phi, const AtomFunction& psi,
                                   const Domain& domain, std::uint64_t seed, std::size_t random_vectors) {
  const Tolerances& tol = m.tolerances();
  const Matrix q = domain_basis(m.dim(), domain);
  const Levels lv = transported_levels(m, phi, psi);
  const Matrix& u = m.isometry();
  const Matrix& a = m.matrix();
  const Index n = m.dim();

  GeneralizedCheck out;
  Matrix phi_mod = Matrix::Zero(n, n), psi_mod = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < m.atoms().size(); ++k) {
    phi_mod += phi.apply(m.atoms()[k]) * m.projections()[k];
    psi_mod += psi.apply(m.atoms()[k]) * m.projections()[k];
  }
  for (std::size_t j = 0; j < lv.values.size(); ++j) {
    const Matrix& g = lv.modulus[j];
    const Matrix& f = lv.image[j];
    out.intertwining_residual = std::max(out.intertwining_residual, fro((u * g - f * u) * q));
    out.inclusion_residual = std::max(out.inclusion_residual, fro((f * a - a * g) * q) / m.scale());
  }
  out.functional_residual = fro((u * phi_mod - psi_mod * u) * q) / m.scale();
  out.intertwines = out.intertwining_residual <= tol.verdict;
  out.functional = out.functional_residual <= tol.verdict;
  out.inclusion = out.inclusion_residual <= tol.verdict;

  MeasureVerdicts mv = measure_verdicts(m, lv, q, seed, random_vectors);
  out.measures_equal = mv.equal;
  out.absolutely_continuous = mv.absolutely_continuous;
  out.witness = std::move(mv.witness);
  out.c = level_pencil(m, lv, q).value;
  return out;
}

}  // namespace treeshift::oracle
