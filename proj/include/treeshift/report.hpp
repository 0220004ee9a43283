#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "treeshift/classify.hpp"
#include "treeshift/measures.hpp"
#include "treeshift/oracle.hpp"
#include "treeshift/shift.hpp"

namespace treeshift {

using json = nlohmann::ordered_json;

json classification_json(const WeightedShift& s, const ClassificationReport<Rational>& r);
json classification_json(const FloatWeightedShift& s, const ClassificationReport<double>& r);

/// classification_json plus a generalized_c_opt field when a transport
/// pair is given; float mode classifies a float copy of the shift.
json classify_report(const WeightedShift& s, ScopeKind kind, bool use_float = false,
                     const std::optional<std::pair<AtomFunction, AtomFunction>>& transport = std::nullopt);

/// One "key: value" line per field of a JSON object, nested keys dotted.
std::string json_to_text(const json& j);

struct OracleOptions {
  ScopeKind scope = ScopeKind::interior;
  std::uint64_t seed = 0;
  std::size_t random_vectors = 100;
  /// (phi, psi) for the transported checks.
  std::optional<std::pair<AtomFunction, AtomFunction>> transport;
  oracle::Tolerances tolerances;
  std::optional<std::size_t> dimension_cap;
};

struct OracleComparison {
  json report;
  bool agree = true;
  /// Set when agree is false: the smallest vector exhibiting the mismatch,
  /// as vertex label -> [re, im].
  json witness;
};

/// Classifies the shift, builds its matrix and checks every verdict against
/// the matrix computation on the same vertex set.
OracleComparison compare_with_oracle(const WeightedShift& s, const OracleOptions& options = {});

/// Summary over tree_corpus(seed, count) at both scopes.
OracleComparison compare_random_trees(std::uint64_t seed, std::size_t count, const OracleOptions& options = {});

json izonp_json(const oracle::IzonpCheck& c);

}  // namespace treeshift
