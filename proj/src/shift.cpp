#include "treeshift/shift.hpp"

namespace treeshift {

FloatWeightedShift to_float(const WeightedShift& s, double eps) {
  std::vector<double> weight_sq(s.size());
  for (Vertex v = 0; v < s.size(); ++v) weight_sq[v] = to_double(s.weight_sq(v));
  const auto& notes = s.annotations();
  ShiftAnnotations<double> float_notes{notes.family, notes.truncation_depth, {}, notes.unbounded_family};
  for (const auto& n : notes.norm_oracle) {
    float_notes.norm_oracle.push_back(n ? std::optional<double>(to_double(*n)) : std::nullopt);
  }
  return FloatWeightedShift(s.tree(), std::move(weight_sq), FloatArithmetic{eps}, std::move(float_notes));
}

}  // namespace treeshift
