#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treeshift/numeric.hpp"
#include "treeshift/shift.hpp"

namespace treeshift {

/// Finite positive measure on [0, inf) with finitely many atoms.
///
/// Atoms are keyed by the square of their location: every location produced
/// here is a vertex norm, i.e. the square root of a rational, so squared keys
/// stay exact in rational mode. In float mode keys within the arithmetic's
/// tolerance are merged. Atoms whose mass vanishes are removed, so support
/// inclusion is a key-set test.
template <class Arith>
class AtomicMeasure {
 public:
  using value_type = typename Arith::value_type;

  struct Atom {
    value_type location_sq;
    value_type mass;
  };

  explicit AtomicMeasure(Arith arith = {}) : arith_(arith) {}

  void add(const value_type& location_sq, const value_type& mass) {
    if (mass < value_type(0)) throw std::invalid_argument("negative atom mass");
    auto it = atoms_.begin();
    for (; it != atoms_.end(); ++it) {
      if (arith_.equal(it->location_sq, location_sq)) {
        it->mass += mass;
        if (arith_.is_zero(it->mass)) atoms_.erase(it);
        return;
      }
      if (location_sq < it->location_sq) break;
    }
    if (!arith_.is_zero(mass)) atoms_.insert(it, Atom{location_sq, mass});
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  const Arith& arithmetic() const { return arith_; }

  const Atom* find(const value_type& location_sq) const {
    for (const auto& a : atoms_) {
      if (arith_.equal(a.location_sq, location_sq)) return &a;
    }
    return nullptr;
  }

  value_type mass_at(const value_type& location_sq) const {
    const Atom* a = find(location_sq);
    return a ? a->mass : value_type(0);
  }

  value_type total_mass() const {
    value_type total(0);
    for (const auto& a : atoms_) total += a.mass;
    return total;
  }

  /// Same support and masses equal under the arithmetic.
  bool equals(const AtomicMeasure& other) const {
    if (atoms_.size() != other.atoms_.size()) return false;
    for (const auto& a : atoms_) {
      const Atom* b = other.find(a.location_sq);
      if (!b || !arith_.equal(a.mass, b->mass)) return false;
    }
    return true;
  }

 private:
  Arith arith_;
  std::vector<Atom> atoms_;
};

/// A Borel map [0, inf) -> [0, inf) evaluated on atom locations. The presets
/// all act on squared locations without leaving the rationals.
class AtomFunction {
 public:
  enum class Kind { identity, scale, constant };

  static AtomFunction identity() { return AtomFunction(Kind::identity, 1); }
  /// x -> sqrt(q) x.
  static AtomFunction psi(const Rational& q) {
    if (q <= 0) throw std::domain_error("psi_q needs q > 0");
    return AtomFunction(Kind::scale, q);
  }
  /// x -> value.
  static AtomFunction constant(const Rational& value) {
    if (value < 0) throw std::domain_error("constant map must be nonnegative");
    return AtomFunction(Kind::constant, value);
  }
  /// "id", "q:VALUE" or "const:VALUE".
  static AtomFunction parse(std::string_view text);

  Kind kind() const { return kind_; }
  const Rational& parameter() const { return param_; }
  bool is_identity() const { return kind_ == Kind::identity; }
  std::string name() const;

  /// Image of a squared location, as a squared location.
  Rational apply_sq(const Rational& x_sq) const {
    switch (kind_) {
      case Kind::identity: return x_sq;
      case Kind::scale: return param_ * x_sq;
      case Kind::constant: return param_ * param_;
    }
    return x_sq;
  }
  double apply_sq(double x_sq) const {
    switch (kind_) {
      case Kind::identity: return x_sq;
      case Kind::scale: return to_double(param_) * x_sq;
      case Kind::constant: { double c = to_double(param_); return c * c; }
    }
    return x_sq;
  }
  double apply(double x) const { return std::sqrt(apply_sq(x * x)); }

  friend bool operator==(const AtomFunction&, const AtomFunction&) = default;

 private:
  AtomFunction(Kind kind, Rational param) : kind_(kind), param_(std::move(param)) {}
  Kind kind_;
  Rational param_;
};

namespace detail {

template <class Arith>
typename Arith::value_type abs_sq(const Arith& arith, FiniteVector::Entry x) {
  return arith.from_real(std::norm(x));
}

template <class Arith>
typename Arith::value_type power(const Arith& arith, const typename Arith::value_type& base,
                                 const Rational& alpha) {
  if constexpr (Arith::is_exact) {
    (void)arith;
    if (alpha == 1) return base;
    auto p = exact_pow(base, alpha);
    if (!p) throw std::domain_error("atom location is irrational for this exponent; use float mode");
    return *p;
  } else {
    return std::pow(base, to_double(alpha));
  }
}

}  // namespace detail

/// sigma -> <E(sigma)|S|f, |S|f> where E is the spectral measure of |S|^alpha:
/// each vertex u contributes ||S e_u||^2 |f(u)|^2 at location ||S e_u||^alpha.
template <class Arith>
AtomicMeasure<Arith> modulus_measure(const BasicWeightedShift<Arith>& s, const FiniteVector& f,
                                     const Rational& alpha = 1) {
  if (alpha <= 0) throw std::domain_error("alpha must be positive");
  const Arith& arith = s.arithmetic();
  AtomicMeasure<Arith> mu(arith);
  for (const auto& [u, x] : f.entries()) {
    const auto& n = s.norm_sq(u);
    mu.add(detail::power(arith, n, alpha), n * detail::abs_sq(arith, x));
  }
  return mu;
}

/// sigma -> <E(sigma) S f, S f>: each child v of u contributes |w_v|^2 |f(u)|^2
/// at location ||S e_v||.
template <class Arith>
AtomicMeasure<Arith> image_measure(const BasicWeightedShift<Arith>& s, const FiniteVector& f) {
  const Arith& arith = s.arithmetic();
  AtomicMeasure<Arith> mu(arith);
  for (const auto& [u, x] : f.entries()) {
    const auto fx = detail::abs_sq(arith, x);
    for (Vertex v : s.tree().children(u)) mu.add(s.norm_sq(v), s.weight_sq(v) * fx);
  }
  return mu;
}

/// mu << nu; for atomic measures, support inclusion.
template <class Arith>
bool absolutely_continuous(const AtomicMeasure<Arith>& mu, const AtomicMeasure<Arith>& nu) {
  for (const auto& a : mu.atoms()) {
    if (!nu.find(a.location_sq)) return false;
  }
  return true;
}

/// Essential supremum of d mu / d nu, infinity when mu is not << nu.
template <class Arith>
Extended<typename Arith::value_type> rn_derivative_sup(const AtomicMeasure<Arith>& mu,
                                                       const AtomicMeasure<Arith>& nu) {
  using T = typename Arith::value_type;
  if (!absolutely_continuous(mu, nu)) return Extended<T>::infinity();
  T best(0);
  for (const auto& b : nu.atoms()) {
    T ratio = mu.mass_at(b.location_sq) / b.mass;
    if (ratio > best) best = ratio;
  }
  return best;
}

/// sigma -> mu(phi^{-1}(sigma)).
template <class Arith>
AtomicMeasure<Arith> pushforward(const AtomicMeasure<Arith>& mu, const AtomFunction& phi) {
  AtomicMeasure<Arith> out(mu.arithmetic());
  for (const auto& a : mu.atoms()) out.add(phi.apply_sq(a.location_sq), a.mass);
  return out;
}

}  // namespace treeshift
