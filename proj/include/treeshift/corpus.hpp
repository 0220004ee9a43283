#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "treeshift/oracle.hpp"
#include "treeshift/shift.hpp"

namespace treeshift::corpus {

using Rng = std::mt19937_64;

/// Squared weights 0, 1/16, 1/9, 1/4, 1, 4, 9, 16.
const std::vector<Rational>& weight_squares();

/// Uniform recursive tree on at most max_vertices vertices with weights
/// drawn from weight_squares(). Not a truncation.
WeightedShift random_uniform_tree(Rng& rng, std::size_t max_vertices = 25);

/// Tree grown level by level from target norms: most vertices hand their
/// own norm to one heir (or to several of four equal children), the rest
/// get arbitrary weights. Leaves sit at the last level and the tree is
/// flagged as a truncation at that depth, so interior verdicts vary.
WeightedShift random_class_tree(Rng& rng, std::size_t max_vertices = 25);

/// Alternates the two kinds, one generator per index.
std::vector<WeightedShift> tree_corpus(std::uint64_t seed, std::size_t count);

/// Path truncation with positive weights from weight_squares(); about half
/// the draws end in a constant run.
WeightedShift random_positive_path(Rng& rng, std::size_t max_depth = 10);

enum class MatrixKind { generic, quasinormal, weakly_quasinormal, rank_deficient };

std::string to_string(MatrixKind kind);

struct DenseSample {
  MatrixKind kind;
  oracle::Matrix a;
  /// Optimal constant known from the construction.
  std::optional<double> c_expected;
};

oracle::Matrix random_unitary(oracle::Index n, Rng& rng);

/// Dimension between 2 and max_dim, conjugated by a random unitary.
/// quasinormal: a direct sum of scaled unitaries and a zero block.
/// weakly_quasinormal: blocks A_j = [B_j; C_j] from H_j into H_j + H_0 with
/// B_j*B_j + C_j*C_j = t_j^2 and orthogonal C_j ranges; c = 1 / min cos^2.
DenseSample random_matrix(MatrixKind kind, Rng& rng, oracle::Index max_dim = 12);

/// Cycles through the kinds.
std::vector<DenseSample> matrix_corpus(std::uint64_t seed, std::size_t count);

struct IsometricContraction {
  oracle::Matrix t;
  oracle::Matrix subspace;  // orthonormal columns; t is isometric on their span
};

/// W diag(I_k, C) V* with ||C|| <= 1, isometric on the first k columns of V.
IsometricContraction random_isometric_contraction(Rng& rng, oracle::Index max_dim = 8);

}  // namespace treeshift::corpus
