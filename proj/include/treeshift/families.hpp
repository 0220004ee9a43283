#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "treeshift/numeric.hpp"
#include "treeshift/shift.hpp"

namespace treeshift::families {

/// A family parameter violated one of its defining relations.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// n -> value, for the squares of the weight sequences.
using Sequence = std::function<Rational(std::size_t)>;

/// Chain u_0, u_1, ... with weights alpha(i) (i >= 1) plus a side branch at
/// every u_i of weight beta(i) continuing as a constant-weight path.
/// Requires alpha(n)^2 + beta(n-1)^2 = 1.
struct ChainParams {
  Sequence alpha_sq;  // indexed from 1
  Sequence beta_sq;   // indexed from 0
};

/// ChainParams plus a comb r_0, r_1, ... hung from the root: r_0 has weight
/// q(0), r_{n+1} has weight 1 and r_n carries a second child s_n of weight
/// q(n) followed by a constant gamma(n) path. Requires 1 + q(n)^2 = gamma(n)^2.
struct CombParams {
  ChainParams chain;
  Sequence q_sq;
  Sequence gamma_sq;
  bool q_unbounded = false;
};

/// ChainParams where the side vertex w_i forks into a_i (weight beta(i)) and
/// b_i (weight gamma(i)), both continuing as constant delta(i) paths.
/// Requires delta(n)^2 = beta(n)^2 + gamma(n)^2 and delta(n) > 1.
struct ForkParams {
  ChainParams chain;
  Sequence gamma_sq;
  Sequence delta_sq;
};

void validate(const ChainParams& p, std::size_t depth);
void validate(const CombParams& p, std::size_t depth);
void validate(const ForkParams& p, std::size_t depth);

/// beta(n)^2 / delta(n)^2 + alpha(n+1)^2 < 1.
bool fork_ratio_condition(const ForkParams& p, std::size_t n);
/// delta(n) > 1.
bool fork_delta_condition(const ForkParams& p, std::size_t n);

/// Full binary tree; at every vertex one child gets weight 0 and the other
/// gets n+1 (parent weight 0 at level n) or the parent's weight.
WeightedShift gen_eunb(std::size_t depth);

WeightedShift gen_fig1(const CombParams& p, std::size_t depth);
WeightedShift gen_fig2(const ChainParams& p, std::size_t depth);
WeightedShift gen_fig3(const ForkParams& p, std::size_t depth);

/// Path p_0 -> p_1 -> ... -> p_depth, weight of p_n given by weights_sq[n-1].
WeightedShift gen_classical_path(std::span<const Rational> weights_sq, std::size_t depth);

/// Path with w_1 = 1 and w_{n+1} = w_n / sqrt(q).
WeightedShift gen_q_path(const Rational& q, std::size_t depth);

// Presets.

/// alpha(n)^2 = 1/c, q(0)^2 = 1/(c-1) and q(n) = q(0) + n, with q(n)^2 for
/// n >= 1 taken as the exact value of the nearest double. Optimal constant c.
CombParams comb_for_constant(const Rational& c);
/// alpha(n)^2 = 1/c.
ChainParams chain_for_constant(const Rational& c);
/// alpha(n)^2 = 1/(n+1): inf alpha = 0.
ChainParams chain_vanishing();
/// alpha(n)^2 = 1/c, gamma(n)^2 = 1.
ForkParams fork_for_constant(const Rational& c);
/// alpha(n)^2 = 1/(n+1), gamma(n)^2 = 1.
ForkParams fork_vanishing();

/// Named family with defaults: eunb (depth 4), fig1 (c = 4, depth 5),
/// fig2 and fig3 (vanishing alpha unless c is given, depth 5) and path
/// (the q-geometric path, q = 1, depth 6).
WeightedShift generate(const std::string& family, std::optional<std::size_t> depth = std::nullopt,
                       std::optional<Rational> c = std::nullopt, std::optional<Rational> q = std::nullopt);

}  // namespace treeshift::families
