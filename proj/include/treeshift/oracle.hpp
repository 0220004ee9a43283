#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "treeshift/classify.hpp"
#include "treeshift/measures.hpp"
#include "treeshift/numeric.hpp"
#include "treeshift/shift.hpp"

namespace treeshift::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct Tolerances {
  double lin = 1e-9;      // linear-algebra residuals
  double cluster = 1e-7;  // singular value clustering radius
  double verdict = 1e-6;  // decision margin

  /// Requires 0 < lin < cluster < verdict.
  void validate() const;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::string dump = {})
      : std::runtime_error(what), dump_(std::move(dump)) {}
  const std::string& dump() const { return dump_; }

 private:
  std::string dump_;
};

class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// TREESHIFT_DIM_CAP when set, 2000 otherwise.
std::size_t dimension_cap();

/// Dense operator with its modulus, spectral atoms and polar isometry.
///
/// The decomposition comes from a Jacobi SVD A = W diag(s) V*, so
/// A*A = V diag(s^2) V* without squaring the condition number. Singular
/// values are clustered single-linkage within the clustering radius; each
/// cluster becomes one atom t_k (its mean, or exactly 0 for the cluster at
/// the origin) with projection E_k = V_k V_k*.
class MatrixOperator {
 public:
  explicit MatrixOperator(Matrix a, Tolerances tol = {}, std::vector<std::string> labels = {});

  Index dim() const { return a_.rows(); }
  const Matrix& matrix() const { return a_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Tolerances& tolerances() const { return tol_; }

  /// |A| = sum_k t_k E_k.
  const Matrix& modulus() const { return modulus_; }
  /// Partial isometry with A = U|A| and U = 0 on ker A.
  const Matrix& isometry() const { return u_; }
  /// Atoms in increasing order.
  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<Matrix>& projections() const { return projections_; }
  const std::vector<double>& cluster_diameters() const { return diameters_; }
  /// Projection onto ran A.
  const Matrix& range_projection() const { return range_projection_; }
  /// Projection onto ran |A| (= ker A complement).
  const Matrix& modulus_range_projection() const { return modulus_range_projection_; }

  double norm() const { return norm_; }
  double scale() const { return norm_ > 1.0 ? norm_ : 1.0; }
  /// ||A*A - |A|^2|| (Frobenius).
  double modulus_residual() const { return modulus_residual_; }
  /// ||A - U|A||| (Frobenius).
  double polar_residual() const { return polar_residual_; }
  /// Smallest gap between consecutive atoms (infinity with one atom).
  double min_gap() const { return min_gap_; }
  /// Some gap below ten clustering radii.
  bool fragile() const { return min_gap_ < 10.0 * tol_.cluster; }

  std::string dump() const;

 private:
  Matrix a_;
  Tolerances tol_;
  std::vector<std::string> labels_;
  Matrix modulus_, u_, range_projection_, modulus_range_projection_;
  std::vector<double> atoms_, diameters_;
  std::vector<Matrix> projections_;
  double norm_ = 0, modulus_residual_ = 0, polar_residual_ = 0, min_gap_ = 0;
};

/// Coordinate subspace the checks are restricted to; nullopt is the whole
/// space.
using Domain = std::optional<std::vector<Index>>;

/// Orthonormal basis of the domain as columns.
Matrix domain_basis(Index dim, const Domain& domain);

/// Column for e_u equals apply(s, e_u), real nonnegative weights.
template <class Arith>
MatrixOperator from_shift(const BasicWeightedShift<Arith>& s, Tolerances tol = {},
                          std::optional<std::size_t> cap = std::nullopt) {
  const std::size_t limit = cap.value_or(dimension_cap());
  if (s.size() > limit) {
    throw DimensionError("tree has " + std::to_string(s.size()) + " vertices, above the matrix cap of " +
                         std::to_string(limit));
  }
  const auto n = static_cast<Index>(s.size());
  Matrix a = Matrix::Zero(n, n);
  std::vector<std::string> labels(s.size());
  for (Vertex v = 0; v < s.size(); ++v) {
    labels[v] = s.tree().label(v);
    if (auto p = s.tree().parent(v)) a(static_cast<Index>(v), static_cast<Index>(*p)) = s.weight(v);
  }
  return MatrixOperator(std::move(a), tol, std::move(labels));
}

/// Vertices whose criterion can be read off the finite matrix: all of them
/// for full scope or untruncated trees, depth <= D-2 on a depth-D
/// truncation. Closed-form norms are invisible to the matrix and ignored.
template <class Arith>
std::vector<Vertex> matrix_scope(const BasicWeightedShift<Arith>& s, ScopeKind kind) {
  std::vector<Vertex> out;
  const auto& depth = s.annotations().truncation_depth;
  for (Vertex u = 0; u < s.size(); ++u) {
    if (kind == ScopeKind::full || !depth || s.tree().depth(u) + 2 <= *depth) out.push_back(u);
  }
  return out;
}

inline Domain domain_of(std::span<const Vertex> scope) {
  std::vector<Index> idx;
  idx.reserve(scope.size());
  for (Vertex v : scope) idx.push_back(static_cast<Index>(v));
  return idx;
}

struct MeasurePair {
  AtomicMeasure<FloatArithmetic> image;    // t_k -> ||E_k A f||^2
  AtomicMeasure<FloatArithmetic> modulus;  // t_k -> ||E_k |A| f||^2
};

/// Both measures, keyed by t_k^2; masses at or below the zero threshold
/// (verdict tolerance times max(1, ||A||^2) ||f||^2) are dropped.
MeasurePair measure_pair(const MatrixOperator& m, const Vector& f);

struct QuasinormalCheck {
  double polar_residual = 0;       // ||(U|A| - |A|U) P|| / max(1, ||A||)
  double projection_residual = 0;  // max_k ||(U E_k - E_k U) P||
  bool polar_commutes = true;
  bool projections_commute = true;
  bool measures_equal = true;
  bool absolutely_continuous = true;
  std::size_t vectors_tested = 0;
  std::optional<Vector> witness;  // first test vector where the measures differ

  bool verdict() const { return polar_commutes; }
  bool consistent() const {
    return polar_commutes == projections_commute && polar_commutes == measures_equal &&
           polar_commutes == absolutely_continuous;
  }
};

/// Quasinormality on the domain: polar commutation, commutation with every
/// spectral projection, and measure equality / absolute continuity over the
/// domain basis, its spectral components and `random_vectors` seeded
/// Gaussian vectors.
QuasinormalCheck check_quasinormal(const MatrixOperator& m, const Domain& domain = std::nullopt,
                                   std::uint64_t seed = 0, std::size_t random_vectors = 100);

struct PencilMax {
  Extended<double> value = 0.0;
  std::optional<Vector> witness;  // maximizer, or a kernel vector of M not killed by N
};

/// sup x*Nx / x*Mx over x with x*Mx > 0 for Hermitian PSD N, M, infinity when
/// some x with x*Mx <= kernel_tol has x*Nx > verdict_tol.
PencilMax pencil_max(const Matrix& n, const Matrix& m, double kernel_tol, double verdict_tol);

struct OracleC {
  Extended<double> value = 0.0;
  std::vector<double> per_atom;  // +inf where the kernel test fails
  std::optional<std::size_t> infinite_atom;
  std::optional<Vector> witness;
};

/// Least c with ||E_k |A| f||^2 <= c ||E_k A f||^2 for all atoms k and f in
/// the domain.
OracleC oracle_c_optimal(const MatrixOperator& m, const Domain& domain = std::nullopt);

struct TConstruction {
  Matrix t;
  double intertwining_residual = 0;  // ||(T A - |A|) P||
  double commutation_residual = 0;   // max_k ||T E_k - E_k T||
  double norm = 0;                   // ||T||
  double sqrt_c = 0;
  double range_residual = 0;         // ||(I - P_|A|) T||
  double adjoint_residual = 0;       // U against P T*

  bool passes(const Tolerances& tol) const;
};

/// T with T A = |A| on the domain, commuting with every E_k, ||T|| = sqrt(c).
/// nullopt when the optimal constant is infinite.
std::optional<TConstruction> build_T(const MatrixOperator& m, const Domain& domain = std::nullopt);

struct IzonpCheck {
  bool precondition = false;   // B + D != 0
  bool axis_isometric = false;
  bool axis_not_preserved = false;
  bool not_contraction = false;
  double norm = 0;
  bool holds() const { return precondition && axis_isometric && axis_not_preserved && not_contraction; }
};

/// T = [[1/sqrt2, b], [1/sqrt2, d]]: isometric on the first axis, yet T*T
/// does not keep that axis invariant and T is not a contraction.
IzonpCheck izonp_counterexample_check(std::complex<double> b, std::complex<double> d,
                                      double tol = 1e-9);

struct GeneralizedCheck {
  double intertwining_residual = 0;  // (a) max_s ||(U G_s - F_s U) P||
  double functional_residual = 0;    // (b) ||(U phi(|A|) - psi(|A|) U) P|| / scale
  double inclusion_residual = 0;     // (c) max_s ||(F_s A - A G_s) P|| / scale
  bool intertwines = true;
  bool functional = true;
  bool inclusion = true;
  bool measures_equal = true;
  bool absolutely_continuous = true;  // s -> ||F_s A f||^2  <<  s -> ||G_s |A| f||^2
  Extended<double> c = 0.0;           // least c: ||G_s|A|f||^2 <= c ||F_s A f||^2
  std::optional<Vector> witness;

  bool c_at_most_one(double tol) const { return c.is_finite() && c.value() <= 1.0 + tol; }
  bool operators_agree() const { return intertwines == functional && functional == inclusion; }
  bool measures_agree(double tol) const {
    return inclusion == measures_equal && inclusion == absolutely_continuous && inclusion == c_at_most_one(tol);
  }
};

/// Transported spectral projections F_s (psi-level sets) and G_s (phi-level
/// sets) of the atoms, and the conditions built from them.
GeneralizedCheck check_generalized(const MatrixOperator& m, const AtomFunction& phi, const AtomFunction& psi,
                                   const Domain& domain = std::nullopt, std::uint64_t seed = 0,
                                   std::size_t random_vectors = 100);

}  // namespace treeshift::oracle
