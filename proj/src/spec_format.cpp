#include "treeshift/spec_format.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace treeshift {

namespace {

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

Rational parse_value(const std::string& text, std::size_t line, const char* what) {
  // A readable negative number gets its own message.
  try {
    if (parse_rational(text) < 0) throw ParseError(line, std::string("negative ") + what + " '" + text + "'");
  } catch (const std::invalid_argument&) {
  }
  try {
    return parse_squared_value(text);
  } catch (const std::invalid_argument&) {
    throw ParseError(line, "malformed number '" + text + "'");
  }
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::vector<Vertex> breadth_first(const DirectedTree& t) { return t.descendants(t.root()); }

}  // namespace

WeightedShift parse_tree_spec(std::string_view text) {
  struct Edge {
    std::string parent, child;
    Rational weight_sq;
    std::size_t line;
  };
  std::optional<std::string> root;
  std::vector<Edge> edges;
  std::unordered_map<std::string, std::size_t> edge_of;  // child -> index in edges
  std::vector<std::pair<std::string, std::pair<Rational, std::size_t>>> norms;
  std::optional<std::size_t> truncated;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto words = split_words(line);
    if (words.empty()) continue;
    const std::string& kw = words[0];
    if (kw == "root") {
      if (words.size() != 2) throw ParseError(line_no, "expected 'root <id>'");
      if (root) throw ParseError(line_no, "duplicate root line");
      root = words[1];
    } else if (kw == "edge") {
      if (words.size() != 4) throw ParseError(line_no, "expected 'edge <parent> <child> <weight>'");
      if (!root) throw ParseError(line_no, "edge before the root line");
      const std::string& p = words[1];
      const std::string& c = words[2];
      if (p == c) throw ParseError(line_no, "self-loop at '" + c + "'");
      if (c == *root) throw ParseError(line_no, "edge into the root '" + c + "'");
      if (auto it = edge_of.find(c); it != edge_of.end()) {
        throw ParseError(line_no, "vertex '" + c + "' already has parent '" + edges[it->second].parent + "' (line " +
                                      std::to_string(edges[it->second].line) + ")");
      }
      Rational w = parse_value(words[3], line_no, "weight");
      edge_of[c] = edges.size();
      edges.push_back({p, c, std::move(w), line_no});
    } else if (kw == "norm") {
      if (words.size() != 3) throw ParseError(line_no, "expected 'norm <vertex> <value>'");
      norms.push_back({words[1], {parse_value(words[2], line_no, "norm"), line_no}});
    } else if (kw == "truncated") {
      if (words.size() != 2) throw ParseError(line_no, "expected 'truncated <depth>'");
      if (truncated) throw ParseError(line_no, "duplicate truncated line");
      try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(words[1], &used);
        if (used != words[1].size()) throw std::invalid_argument("trailing");
        truncated = v;
      } catch (const std::exception&) {
        throw ParseError(line_no, "malformed depth '" + words[1] + "'");
      }
    } else {
      throw ParseError(line_no, "unknown keyword '" + kw + "'");
    }
  }
  if (!root) throw ParseError(line_no, "missing root line");

  // Every parent chain must reach the root without revisiting a vertex.
  for (const Edge& e : edges) {
    std::map<std::string, bool> seen{{e.child, true}};
    std::string at = e.parent;
    while (at != *root) {
      if (seen.count(at)) throw ParseError(e.line, "cycle through vertex '" + at + "'");
      seen[at] = true;
      auto it = edge_of.find(at);
      if (it == edge_of.end()) throw ParseError(e.line, "vertex '" + at + "' is not connected to the root");
      at = edges[it->second].parent;
    }
  }

  DirectedTree::Builder builder(*root);
  for (const Edge& e : edges) builder.add_edge(e.parent, e.child);
  DirectedTree tree = std::move(builder).build();

  std::vector<Rational> weight_sq(tree.size(), Rational(0));
  for (const Edge& e : edges) weight_sq[tree.at(e.child)] = e.weight_sq;

  ShiftAnnotations<Rational> notes;
  notes.family = "spec";
  notes.truncation_depth = truncated;
  if (!norms.empty()) {
    notes.norm_oracle.assign(tree.size(), std::nullopt);
    for (const auto& [label, value] : norms) {
      auto v = tree.find(label);
      if (!v) throw ParseError(value.second, "norm for unknown vertex '" + label + "'");
      notes.norm_oracle[*v] = value.first;
    }
  }
  if (truncated && *truncated < tree.height()) {
    throw ParseError(line_no, "truncation depth " + std::to_string(*truncated) + " is below the tree height " +
                                  std::to_string(tree.height()));
  }
  return WeightedShift(std::move(tree), std::move(weight_sq), ExactArithmetic{}, std::move(notes));
}

std::string format_weight(const Rational& weight_sq) {
  if (auto r = exact_sqrt(weight_sq)) return to_string(*r);
  return "sqrt(" + to_string(weight_sq) + ")";
}

std::string write_tree_spec(const WeightedShift& s) {
  const DirectedTree& t = s.tree();
  std::ostringstream os;
  os << "root " << t.label(t.root()) << "\n";
  if (const auto& d = s.annotations().truncation_depth) os << "truncated " << *d << "\n";
  for (Vertex u : breadth_first(t)) {
    for (Vertex v : t.children(u)) {
      os << "edge " << t.label(u) << " " << t.label(v) << " " << format_weight(s.weight_sq(v)) << "\n";
    }
  }
  for (Vertex u : breadth_first(t)) {
    if (s.has_oracle_norm(u)) os << "norm " << t.label(u) << " " << format_weight(s.effective_norm_sq(u)) << "\n";
  }
  return os.str();
}

bool same_shift(const WeightedShift& a, const WeightedShift& b) {
  const DirectedTree& ta = a.tree();
  const DirectedTree& tb = b.tree();
  if (ta.size() != tb.size() || ta.label(ta.root()) != tb.label(tb.root())) return false;
  if (a.annotations().truncation_depth != b.annotations().truncation_depth) return false;
  for (Vertex u = 0; u < ta.size(); ++u) {
    auto w = tb.find(ta.label(u));
    if (!w) return false;
    if (a.weight_sq(u) != b.weight_sq(*w)) return false;
    if (a.has_oracle_norm(u) != b.has_oracle_norm(*w)) return false;
    if (a.has_oracle_norm(u) && a.effective_norm_sq(u) != b.effective_norm_sq(*w)) return false;
    auto ca = ta.children(u);
    auto cb = tb.children(*w);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (ta.label(ca[i]) != tb.label(cb[i])) return false;
    }
  }
  return true;
}

std::string export_dot(const WeightedShift& s) {
  const DirectedTree& t = s.tree();
  std::ostringstream os;
  os << "digraph shift {\n";
  const auto order = breadth_first(t);
  for (Vertex u : order) {
    os << "  " << quoted(t.label(u)) << " [label=" << quoted(t.label(u) + " [‖Se‖²=" + to_string(s.norm_sq(u)) + "]")
       << "];\n";
  }
  for (Vertex u : order) {
    for (Vertex v : t.children(u)) {
      os << "  " << quoted(t.label(u)) << " -> " << quoted(t.label(v)) << " [label=" << quoted(format_weight(s.weight_sq(v)))
         << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace treeshift
