#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "treeshift/shift.hpp"

namespace treeshift {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line), message_(message) {}

  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

/// Reads the line-oriented tree format:
///
///   # comment
///   root <id>
///   edge <parent> <child> <weight>
///   norm <vertex> <value>
///   truncated <depth>
///
/// Weights and norms are decimals, integers, "p/q" or "sqrt(x)"; they are
/// stored squared and exactly. `root` must come before any edge. A `norm`
/// row attaches a closed-form vertex norm; `truncated` marks the tree as a
/// depth truncation of an infinite one.
WeightedShift parse_tree_spec(std::string_view text);

/// Inverse of parse_tree_spec: edges in breadth-first order, weights as
/// rationals when they are perfect squares and as sqrt(p/q) otherwise.
std::string write_tree_spec(const WeightedShift& s);

/// Weight as it would appear in a spec: "p/q" or "sqrt(p/q)".
std::string format_weight(const Rational& weight_sq);

/// Same labels, parents, child order, squared weights, annotations.
bool same_shift(const WeightedShift& a, const WeightedShift& b);

/// DOT digraph; nodes labelled "id [‖Se‖²=value]", edges by weight.
std::string export_dot(const WeightedShift& s);

}  // namespace treeshift
