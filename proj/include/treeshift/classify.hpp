#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treeshift/measures.hpp"
#include "treeshift/numeric.hpp"
#include "treeshift/shift.hpp"

namespace treeshift {

enum class ScopeKind { interior, full };

enum class Tristate { no, yes, unknown };

inline std::string to_string(Tristate t) {
  switch (t) {
    case Tristate::no: return "false";
    case Tristate::yes: return "true";
    case Tristate::unknown: return "unknown";
  }
  return "unknown";
}

/// Vertices whose criterion data (own norm and every child norm) is not
/// corrupted by truncation. For trees that are not truncations this is
/// every vertex.
template <class Arith>
std::vector<Vertex> interior_vertices(const BasicWeightedShift<Arith>& s) {
  std::vector<Vertex> out;
  for (Vertex u = 0; u < s.size(); ++u) {
    if (s.criterion_reliable(u)) out.push_back(u);
  }
  return out;
}

template <class Arith>
std::vector<Vertex> scope_vertices(const BasicWeightedShift<Arith>& s, ScopeKind kind) {
  if (kind == ScopeKind::interior) return interior_vertices(s);
  std::vector<Vertex> all(s.size());
  for (Vertex v = 0; v < s.size(); ++v) all[v] = v;
  return all;
}

/// A supremum over vertices together with the first vertex attaining it.
template <class T>
struct Supremum {
  Extended<T> value;
  std::optional<Vertex> argmax;
};

struct Verdict {
  bool holds = true;
  std::optional<Vertex> vertex;
  std::optional<Vertex> child;
};

namespace detail {

template <class Arith, class Pred>
Supremum<typename Arith::value_type> ratio_sup(const BasicWeightedShift<Arith>& s,
                                               std::span<const Vertex> scope, Pred in_denominator) {
  using T = typename Arith::value_type;
  const Arith& arith = s.arithmetic();
  Supremum<T> best{T(0), std::nullopt};
  for (Vertex u : scope) {
    const T& nu = s.effective_norm_sq(u);
    if (arith.is_zero(nu)) continue;
    T denom(0);
    for (Vertex v : s.tree().children(u)) {
      if (in_denominator(u, v)) denom += s.weight_sq(v);
    }
    if (arith.is_zero(denom)) return {Extended<T>::infinity(), u};
    T ratio = nu / denom;
    if (!best.argmax || ratio > best.value.value()) best = {ratio, u};
  }
  return best;
}

}  // namespace detail

/// Least c with ||S e_u||^2 <= c * sum_{v in chi_eq(u)} |w_v|^2 over the scope.
/// Zero when no scope vertex has positive norm.
template <class Arith>
Supremum<typename Arith::value_type> c_optimal(const BasicWeightedShift<Arith>& s,
                                               std::span<const Vertex> scope) {
  const Arith& arith = s.arithmetic();
  return detail::ratio_sup(s, scope, [&](Vertex u, Vertex v) {
    return arith.equal(s.effective_norm_sq(v), s.effective_norm_sq(u));
  });
}

/// Transported form: the denominator collects children v with
/// psi(||S e_v||) = phi(||S e_u||).
template <class Arith>
Supremum<typename Arith::value_type> generalized_c_optimal(const BasicWeightedShift<Arith>& s,
                                                           const AtomFunction& phi,
                                                           const AtomFunction& psi,
                                                           std::span<const Vertex> scope) {
  const Arith& arith = s.arithmetic();
  return detail::ratio_sup(s, scope, [&](Vertex u, Vertex v) {
    return arith.equal(psi.apply_sq(s.effective_norm_sq(v)), phi.apply_sq(s.effective_norm_sq(u)));
  });
}

/// Every nonzero-weight child has the norm of its parent.
template <class Arith>
Verdict is_quasinormal(const BasicWeightedShift<Arith>& s, std::span<const Vertex> scope) {
  const Arith& arith = s.arithmetic();
  for (Vertex u : scope) {
    for (Vertex v : s.tree().children(u)) {
      if (s.has_weight(v) && !arith.equal(s.effective_norm_sq(v), s.effective_norm_sq(u))) {
        return {false, u, v};
      }
    }
  }
  return {};
}

/// Every vertex of positive norm has a nonzero-weight child of equal norm.
template <class Arith>
Verdict abc3_holds(const BasicWeightedShift<Arith>& s, std::span<const Vertex> scope) {
  for (Vertex u : scope) {
    if (s.arithmetic().is_zero(s.effective_norm_sq(u))) continue;
    if (chi_plus(s, u).empty()) return {false, u, std::nullopt};
  }
  return {};
}

template <class T>
struct HyponormalVerdict {
  Tristate value = Tristate::yes;
  std::optional<Vertex> vertex;
  std::optional<Vertex> child;  // set when a nonzero weight leads to a zero-norm child
  std::optional<T> sum;
};

/// sum over nonzero-weight children of |w_v|^2 / ||S e_v||^2; nullopt when
/// some such child has zero norm.
template <class Arith>
std::optional<typename Arith::value_type> hyponormal_sum(const BasicWeightedShift<Arith>& s, Vertex u) {
  using T = typename Arith::value_type;
  T sum(0);
  for (Vertex v : s.tree().children(u)) {
    if (!s.has_weight(v)) continue;
    const T& nv = s.effective_norm_sq(v);
    if (s.arithmetic().is_zero(nv)) return std::nullopt;
    sum += s.weight_sq(v) / nv;
  }
  return sum;
}

/// Per-vertex hyponormality test: nonzero weights lead to vertices of
/// positive norm, and the ratio sum at each vertex is at most one.
/// A definite violation wins over missing data.
template <class Arith>
HyponormalVerdict<typename Arith::value_type> is_hyponormal(const BasicWeightedShift<Arith>& s,
                                                            std::span<const Vertex> scope) {
  using T = typename Arith::value_type;
  bool missing = false;
  for (Vertex u : scope) {
    bool reliable = true;
    for (Vertex v : s.tree().children(u)) {
      if (s.has_weight(v) && !s.norm_reliable(v)) reliable = false;
    }
    if (!reliable || (s.annotations().truncation_depth &&
                      s.tree().depth(u) >= *s.annotations().truncation_depth)) {
      missing = true;
      continue;
    }
    for (Vertex v : s.tree().children(u)) {
      if (s.has_weight(v) && s.arithmetic().is_zero(s.effective_norm_sq(v))) {
        return {Tristate::no, u, v, std::nullopt};
      }
    }
    T sum = *hyponormal_sum(s, u);
    if (!s.arithmetic().less_or_equal(sum, T(1))) return {Tristate::no, u, std::nullopt, sum};
  }
  return {missing ? Tristate::unknown : Tristate::yes, std::nullopt, std::nullopt, std::nullopt};
}

struct SleuResidual {
  bool is_zero;
  double value;
};

/// |sum_{v in Chi(u)} ||S e_v||^{2 alpha} |w_v|^2 - ||S e_u||^{2(alpha+1)}|.
/// In rational mode equal bases are merged before any power is taken, so a
/// cancelling sum is reported as exactly zero even for fractional alpha.
template <class Arith>
SleuResidual sleu_identity_check(const BasicWeightedShift<Arith>& s, Vertex u, const Rational& alpha) {
  using T = typename Arith::value_type;
  if (alpha <= 0) throw std::domain_error("alpha must be positive");
  const Arith& arith = s.arithmetic();
  if constexpr (Arith::is_exact) {
    std::map<T, T> coeff;  // base (a squared norm) -> coefficient
    for (Vertex v : s.tree().children(u)) {
      if (s.has_weight(v)) coeff[s.effective_norm_sq(v)] += s.weight_sq(v);
    }
    const T& nu = s.effective_norm_sq(u);
    coeff[nu] -= nu;
    double value = 0;
    bool zero = true;
    for (const auto& [base, c] : coeff) {
      if (c == 0 || base == 0) continue;
      zero = false;
      if (auto p = exact_pow(base, alpha)) {
        value += to_double(c * *p);
      } else {
        value += to_double(c) * std::pow(to_double(base), to_double(alpha));
      }
    }
    return {zero, std::abs(value)};
  } else {
    const double a = to_double(alpha);
    double lhs = 0;
    for (Vertex v : s.tree().children(u)) lhs += std::pow(s.effective_norm_sq(v), a) * s.weight_sq(v);
    const double rhs = std::pow(s.effective_norm_sq(u), a + 1);
    const double value = std::abs(lhs - rhs);
    return {value <= arith.eps * std::max(1.0, rhs), value};
  }
}

template <class T>
struct ClassificationReport {
  bool quasinormal = true;
  bool weakly_quasinormal = true;
  Extended<T> c_opt = T(0);
  bool abc3 = true;
  Tristate hyponormal = Tristate::unknown;
  std::optional<T> hyponormal_sum;

  std::optional<Vertex> quasinormal_vertex;
  std::optional<Vertex> quasinormal_child;
  std::optional<Vertex> c_opt_vertex;
  std::optional<Vertex> abc3_vertex;
  std::optional<Vertex> hyponormal_vertex;

  ScopeKind scope_kind = ScopeKind::interior;
  std::vector<Vertex> scope;
  std::vector<Vertex> boundary_vertices;
  bool fragile = false;
};

template <class Arith>
ClassificationReport<typename Arith::value_type> classify(const BasicWeightedShift<Arith>& s,
                                                          ScopeKind kind = ScopeKind::interior) {
  ClassificationReport<typename Arith::value_type> r;
  r.scope_kind = kind;
  r.scope = scope_vertices(s, kind);
  std::vector<bool> in_scope(s.size(), false);
  for (Vertex u : r.scope) in_scope[u] = true;
  for (Vertex u = 0; u < s.size(); ++u) {
    if (!in_scope[u]) r.boundary_vertices.push_back(u);
  }

  const Verdict qn = is_quasinormal(s, r.scope);
  r.quasinormal = qn.holds;
  r.quasinormal_vertex = qn.vertex;
  r.quasinormal_child = qn.child;

  auto c = c_optimal(s, r.scope);
  r.c_opt = c.value;
  r.c_opt_vertex = c.argmax;
  r.weakly_quasinormal = c.value.is_finite();

  const Verdict a3 = abc3_holds(s, r.scope);
  r.abc3 = a3.holds;
  r.abc3_vertex = a3.vertex;

  auto h = is_hyponormal(s, r.scope);
  r.hyponormal = h.value;
  r.hyponormal_vertex = h.vertex;
  r.hyponormal_sum = h.sum;

  for (Vertex u : r.scope) {
    for (Vertex v : s.tree().children(u)) {
      if (s.arithmetic().near_miss(s.effective_norm_sq(u), s.effective_norm_sq(v))) r.fragile = true;
    }
  }
  return r;
}

}  // namespace treeshift
