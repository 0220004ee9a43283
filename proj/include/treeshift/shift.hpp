#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treeshift/numeric.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

/// Facts a generator (or a tree-spec file) knows about the shift beyond its
/// finite weights: whether the tree is a depth truncation of an infinite
/// one, closed-form squared vertex norms on the infinite tree, and whether
/// the family's norm sequence is unbounded.
template <class T>
struct ShiftAnnotations {
  std::string family;
  std::optional<std::size_t> truncation_depth;
  std::vector<std::optional<T>> norm_oracle;  // squared norms, indexed by vertex
  std::optional<bool> unbounded_family;
};

/// Weighted shift S on a finite directed tree. Stores squared weight moduli
/// |w_v|^2 (every criterion depends on them only) and caches the squared
/// vertex norms ||S e_u||^2 = sum over children v of |w_v|^2.
template <class Arith>
class BasicWeightedShift {
 public:
  using value_type = typename Arith::value_type;
  using arithmetic_type = Arith;

  /// weight_sq is indexed by vertex; the root entry must be zero.
  BasicWeightedShift(DirectedTree tree, std::vector<value_type> weight_sq, Arith arith = {},
                     ShiftAnnotations<value_type> notes = {})
      : tree_(std::move(tree)),
        weight_sq_(std::move(weight_sq)),
        arith_(arith),
        notes_(std::move(notes)) {
    if (weight_sq_.size() != tree_.size()) {
      throw std::invalid_argument("weight table size does not match the tree");
    }
    if (weight_sq_[tree_.root()] != value_type(0)) {
      throw std::invalid_argument("the root carries no weight");
    }
    for (Vertex v = 0; v < tree_.size(); ++v) {
      if (!(weight_sq_[v] >= value_type(0))) {
        throw std::invalid_argument("negative squared weight at '" + tree_.label(v) + "'");
      }
    }
    if (!notes_.norm_oracle.empty() && notes_.norm_oracle.size() != tree_.size()) {
      throw std::invalid_argument("norm oracle size does not match the tree");
    }
    if (notes_.truncation_depth && *notes_.truncation_depth < tree_.height()) {
      throw std::invalid_argument("truncation depth is below the tree height");
    }
    norm_sq_.assign(tree_.size(), value_type(0));
    for (Vertex u = 0; u < tree_.size(); ++u) {
      for (Vertex v : tree_.children(u)) norm_sq_[u] += weight_sq_[v];
    }
  }

  const DirectedTree& tree() const { return tree_; }
  const Arith& arithmetic() const { return arith_; }
  const ShiftAnnotations<value_type>& annotations() const { return notes_; }
  std::size_t size() const { return tree_.size(); }

  const value_type& weight_sq(Vertex v) const { return weight_sq_.at(v); }
  double weight(Vertex v) const { return std::sqrt(arith_.to_real(weight_sq(v))); }
  bool has_weight(Vertex v) const { return !arith_.is_zero(weight_sq(v)); }

  /// ||S e_u||^2 computed from the finite tree.
  const value_type& norm_sq(Vertex u) const { return norm_sq_.at(u); }

  bool has_oracle_norm(Vertex u) const {
    return !notes_.norm_oracle.empty() && notes_.norm_oracle.at(u).has_value();
  }

  /// Squared norm used by the criteria: the closed-form value when one is
  /// attached, the finite-tree value otherwise.
  const value_type& effective_norm_sq(Vertex u) const {
    return has_oracle_norm(u) ? *notes_.norm_oracle[u] : norm_sq(u);
  }

  /// A vertex's norm is reliable when all of its children are present in
  /// the finite tree, or when a closed-form value is attached.
  bool norm_reliable(Vertex u) const {
    if (has_oracle_norm(u)) return true;
    return !notes_.truncation_depth || tree_.depth(u) < *notes_.truncation_depth;
  }

  /// Children present and every child norm reliable.
  bool criterion_reliable(Vertex u) const {
    if (!norm_reliable(u)) return false;
    if (notes_.truncation_depth && tree_.depth(u) >= *notes_.truncation_depth) return false;
    for (Vertex v : tree_.children(u)) {
      if (!norm_reliable(v)) return false;
    }
    return true;
  }

  bool is_zero() const {
    for (Vertex v = 0; v < size(); ++v) {
      if (has_weight(v)) return false;
    }
    return true;
  }

 private:
  DirectedTree tree_;
  std::vector<value_type> weight_sq_;
  std::vector<value_type> norm_sq_;
  Arith arith_;
  ShiftAnnotations<value_type> notes_;
};

using WeightedShift = BasicWeightedShift<ExactArithmetic>;
using FloatWeightedShift = BasicWeightedShift<FloatArithmetic>;

/// Float copy of an exact shift, annotations included.
FloatWeightedShift to_float(const WeightedShift& s, double eps = 1e-9);

/// Finitely supported vector on the vertex set.
class FiniteVector {
 public:
  using Entry = std::complex<double>;

  FiniteVector() = default;
  static FiniteVector basis(Vertex u) {
    FiniteVector f;
    f.entries_[u] = 1.0;
    return f;
  }

  Entry operator[](Vertex v) const {
    auto it = entries_.find(v);
    return it == entries_.end() ? Entry{} : it->second;
  }
  void set(Vertex v, Entry value) {
    if (value == Entry{}) {
      entries_.erase(v);
    } else {
      entries_[v] = value;
    }
  }
  void add(Vertex v, Entry value) { set(v, (*this)[v] + value); }

  const std::map<Vertex, Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  double norm_sq() const {
    double s = 0;
    for (const auto& [v, x] : entries_) s += std::norm(x);
    return s;
  }

  friend FiniteVector operator+(const FiniteVector& a, const FiniteVector& b) {
    FiniteVector out = a;
    for (const auto& [v, x] : b.entries_) out.add(v, x);
    return out;
  }
  friend FiniteVector operator*(Entry c, const FiniteVector& a) {
    FiniteVector out;
    for (const auto& [v, x] : a.entries_) out.set(v, c * x);
    return out;
  }

 private:
  std::map<Vertex, Entry> entries_;
};

/// (S f)(v) = w_v f(parent v), zero at the root.
template <class Arith>
FiniteVector apply(const BasicWeightedShift<Arith>& s, const FiniteVector& f) {
  FiniteVector g;
  for (const auto& [u, x] : f.entries()) {
    if (u >= s.size()) throw TreeError("vector entry outside the tree");
    for (Vertex v : s.tree().children(u)) {
      if (s.has_weight(v)) g.add(v, s.weight(v) * x);
    }
  }
  return g;
}

template <class Arith>
const typename Arith::value_type& vertex_norm_sq(const BasicWeightedShift<Arith>& s, Vertex u) {
  return s.norm_sq(u);
}

/// Children whose norm equals the norm of u (squared norms compared; exact
/// in rational mode). Uses effective norms.
template <class Arith>
std::vector<Vertex> chi_eq(const BasicWeightedShift<Arith>& s, Vertex u) {
  std::vector<Vertex> out;
  const auto& nu = s.effective_norm_sq(u);
  for (Vertex v : s.tree().children(u)) {
    if (s.arithmetic().equal(s.effective_norm_sq(v), nu)) out.push_back(v);
  }
  return out;
}

/// Members of chi_eq with nonzero weight.
template <class Arith>
std::vector<Vertex> chi_plus(const BasicWeightedShift<Arith>& s, Vertex u) {
  std::vector<Vertex> out;
  for (Vertex v : chi_eq(s, u)) {
    if (s.has_weight(v)) out.push_back(v);
  }
  return out;
}

template <class T>
struct NormBound {
  T max_norm_sq;
  double value;  // sqrt(max_norm_sq)
  bool unbounded_family = false;
};

/// Largest vertex norm of the finite tree, with the family's unboundedness
/// flag carried through.
template <class Arith>
NormBound<typename Arith::value_type> norm_bound(const BasicWeightedShift<Arith>& s) {
  using T = typename Arith::value_type;
  T best(0);
  for (Vertex u = 0; u < s.size(); ++u) {
    if (s.norm_sq(u) > best) best = s.norm_sq(u);
  }
  return {best, std::sqrt(s.arithmetic().to_real(best)),
          s.annotations().unbounded_family.value_or(false)};
}

}  // namespace treeshift
