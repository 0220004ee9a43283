#include <doctest.h>

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "treeshift/families.hpp"
#include "treeshift/tree.hpp"

using namespace treeshift;
using Edges = std::vector<std::pair<std::string, std::string>>;

namespace {

DirectedTree path_wab() { return DirectedTree::from_edges("w", Edges{{"w", "a"}, {"a", "b"}}); }

DirectedTree full_binary(int depth) {
  Edges e;
  std::vector<std::string> level{"r"};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::string> next;
    for (const auto& u : level) {
      e.emplace_back(u, u + "0");
      e.emplace_back(u, u + "1");
      next.push_back(u + "0");
      next.push_back(u + "1");
    }
    level = next;
  }
  return DirectedTree::from_edges("r", e);
}

std::set<Vertex> by_parent_chain(const DirectedTree& t, Vertex u) {
  std::set<Vertex> out;
  for (Vertex v = 0; v < t.size(); ++v) {
    std::optional<Vertex> at = v;
    while (at) {
      if (*at == u) {
        out.insert(v);
        break;
      }
      at = t.parent(*at);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("children") {
  Edges none;
  auto single = DirectedTree::from_edges("w", none);
  CHECK(single.children(single.root()).empty());

  auto p = path_wab();
  REQUIRE(p.children(p.root()).size() == 1);
  CHECK(p.label(p.children(p.root())[0]) == "a");
  CHECK_THROWS_AS(p.at("zzz"), TreeError);

  auto eunb = families::gen_eunb(4);
  for (Vertex u = 0; u < eunb.size(); ++u) {
    if (eunb.tree().depth(u) < 4) CHECK(eunb.tree().children(u).size() == 2);
  }
}

TEST_CASE("descendants") {
  auto p = path_wab();
  CHECK(p.descendants(p.at("b")) == std::vector<Vertex>{p.at("b")});
  auto d = p.descendants(p.at("a"));
  CHECK(std::set<Vertex>(d.begin(), d.end()) == std::set<Vertex>{p.at("a"), p.at("b")});
  CHECK(full_binary(2).descendants(0).size() == 7);

  auto t = full_binary(3);
  for (Vertex u = 0; u < t.size(); ++u) {
    auto bfs = t.descendants(u);
    CHECK(std::set<Vertex>(bfs.begin(), bfs.end()) == by_parent_chain(t, u));
  }
}

TEST_CASE("partition of the non-root vertices by child sets") {
  CHECK(path_wab().children_partition_check());
  CHECK(families::gen_eunb(4).tree().children_partition_check());
  CHECK(full_binary(3).children_partition_check());
}

TEST_CASE("constructor rejects malformed edge lists") {
  CHECK_THROWS_AS(DirectedTree::from_edges("w", Edges{{"w", "a"}, {"w", "b"}, {"b", "a"}}), TreeError);
  CHECK_THROWS_AS(DirectedTree::from_edges("w", Edges{{"a", "w"}}), TreeError);
  CHECK_THROWS_AS(DirectedTree::from_edges("w", Edges{{"a", "a"}}), TreeError);
  CHECK_THROWS_WITH_AS(DirectedTree::from_edges("w", Edges{{"w", "a"}, {"x", "y"}}),
                       doctest::Contains("not connected"), TreeError);
  CHECK_THROWS_WITH_AS(DirectedTree::from_edges("w", Edges{{"w", "a"}, {"x", "y"}, {"y", "x"}}),
                       doctest::Contains("cycle"), TreeError);
}

TEST_CASE("depth, height, parents") {
  auto p = path_wab();
  CHECK(p.depth(p.at("b")) == 2);
  CHECK(p.height() == 2);
  CHECK(p.parent(p.at("a")) == p.root());
  CHECK_FALSE(p.parent(p.root()).has_value());
  CHECK(p.is_leaf(p.at("b")));
}
