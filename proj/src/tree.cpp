#include "treeshift/tree.hpp"

#include <deque>

namespace treeshift {

const std::string& DirectedTree::label(Vertex v) const {
  check(v);
  return labels_[v];
}

std::optional<Vertex> DirectedTree::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vertex DirectedTree::at(std::string_view label) const {
  if (auto v = find(label)) return *v;
  throw TreeError("unknown vertex '" + std::string(label) + "'");
}

std::optional<Vertex> DirectedTree::parent(Vertex v) const {
  check(v);
  return parent_[v];
}

std::span<const Vertex> DirectedTree::children(Vertex u) const {
  check(u);
  return children_[u];
}

std::size_t DirectedTree::depth(Vertex v) const {
  check(v);
  return depth_[v];
}

std::vector<Vertex> DirectedTree::descendants(Vertex u) const {
  check(u);
  std::vector<Vertex> out{u};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (Vertex c : children_[out[i]]) out.push_back(c);
  }
  return out;
}

bool DirectedTree::children_partition_check() const {
  std::vector<int> hits(size(), 0);
  for (const auto& kids : children_) {
    for (Vertex c : kids) ++hits[c];
  }
  if (hits[root()] != 0) return false;
  for (Vertex v = 1; v < size(); ++v) {
    if (hits[v] != 1) return false;
  }
  return true;
}

void DirectedTree::check(Vertex v) const {
  if (v >= labels_.size()) throw TreeError("vertex index " + std::to_string(v) + " out of range");
}

DirectedTree DirectedTree::from_edges(std::string_view root,
                                      std::span<const std::pair<std::string, std::string>> edges) {
  Builder builder{std::string(root)};
  for (const auto& [p, c] : edges) builder.add_edge(p, c);
  return std::move(builder).build();
}

DirectedTree::Builder::Builder(std::string root_label) {
  add_vertex(root_label);
}

Vertex DirectedTree::Builder::add_vertex(std::string_view label) {
  if (label.empty()) throw TreeError("empty vertex label");
  std::string key(label);
  if (auto it = tree_.index_.find(key); it != tree_.index_.end()) return it->second;
  Vertex v = tree_.labels_.size();
  tree_.labels_.push_back(key);
  tree_.index_.emplace(std::move(key), v);
  tree_.parent_.emplace_back();
  tree_.children_.emplace_back();
  return v;
}

DirectedTree::Builder& DirectedTree::Builder::add_edge(std::string_view parent, std::string_view child) {
  Vertex p = add_vertex(parent);
  Vertex c = add_vertex(child);
  if (c == tree_.root()) throw TreeError("edge into the root '" + std::string(child) + "'");
  if (p == c) throw TreeError("self-loop at '" + std::string(child) + "'");
  if (tree_.parent_[c]) {
    throw TreeError("vertex '" + std::string(child) + "' already has parent '" +
                    tree_.labels_[*tree_.parent_[c]] + "'");
  }
  tree_.parent_[c] = p;
  tree_.children_[p].push_back(c);
  return *this;
}

DirectedTree DirectedTree::Builder::build() && {
  DirectedTree& t = tree_;
  const std::size_t n = t.labels_.size();
  t.depth_.assign(n, 0);
  std::vector<bool> seen(n, false);
  std::deque<Vertex> queue{t.root()};
  seen[t.root()] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (Vertex c : t.children_[u]) {
      if (seen[c]) throw TreeError("vertex '" + t.labels_[c] + "' reached twice");
      seen[c] = true;
      ++reached;
      t.depth_[c] = t.depth_[u] + 1;
      t.height_ = std::max(t.height_, t.depth_[c]);
      queue.push_back(c);
    }
  }
  if (reached != n) {
    for (Vertex v = 0; v < n; ++v) {
      if (seen[v]) continue;
      // Walk up from an unreached vertex: either we cycle or we hit a
      // parentless non-root vertex.
      std::vector<bool> on_path(n, false);
      Vertex w = v;
      while (t.parent_[w] && !on_path[w]) {
        on_path[w] = true;
        w = *t.parent_[w];
      }
      if (on_path[w]) throw TreeError("cycle through vertex '" + t.labels_[w] + "'");
      throw TreeError("vertex '" + t.labels_[w] + "' is not connected to the root");
    }
  }
  return std::move(tree_);
}

}  // namespace treeshift
