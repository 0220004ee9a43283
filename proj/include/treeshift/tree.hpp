#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace treeshift {

/// Dense index of a vertex inside its DirectedTree. Index order is the
/// insertion order of labels and is the canonical basis order everywhere.
using Vertex = std::size_t;

class TreeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Finite rooted directed tree with labelled vertices and ordered child
/// lists. Immutable once built.
class DirectedTree {
 public:
  class Builder;

  /// Builds a tree from a root label and (parent, child) label pairs, in
  /// order. Throws TreeError on any structural violation.
  static DirectedTree from_edges(std::string_view root,
                                 std::span<const std::pair<std::string, std::string>> edges);

  std::size_t size() const { return labels_.size(); }
  Vertex root() const { return 0; }

  const std::string& label(Vertex v) const;
  std::optional<Vertex> find(std::string_view label) const;
  /// Like find, but throws TreeError for unknown labels.
  Vertex at(std::string_view label) const;

  std::optional<Vertex> parent(Vertex v) const;
  std::span<const Vertex> children(Vertex u) const;
  bool is_leaf(Vertex u) const { return children(u).empty(); }
  std::size_t depth(Vertex v) const;
  std::size_t height() const { return height_; }

  /// {u} together with every vertex below it, in breadth-first order.
  std::vector<Vertex> descendants(Vertex u) const;

  /// True iff the child sets are pairwise disjoint and cover V minus root.
  bool children_partition_check() const;

 private:
  DirectedTree() = default;
  void check(Vertex v) const;

  std::vector<std::string> labels_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<std::optional<Vertex>> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<std::size_t> depth_;
  std::size_t height_ = 0;

  friend class Builder;
};

/// Incremental construction; validation happens in build().
class DirectedTree::Builder {
 public:
  explicit Builder(std::string root_label);

  /// Adds the edge parent -> child, creating either vertex if new.
  Builder& add_edge(std::string_view parent, std::string_view child);
  /// Adds an isolated vertex (it must be connected by a later edge).
  Vertex add_vertex(std::string_view label);

  DirectedTree build() &&;

 private:
  DirectedTree tree_;
};

}  // namespace treeshift
