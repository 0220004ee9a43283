#include "treeshift/families.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace treeshift::families {

namespace {

std::string at(const char* what, std::size_t n) {
  return std::string(what) + " fails at n=" + std::to_string(n);
}

void check_depth(std::size_t depth) {
  if (depth < 2) throw ParameterError("truncation depth must be at least 2");
}

void check_positive(const Sequence& seq, const char* name, std::size_t from, std::size_t to) {
  for (std::size_t n = from; n <= to; ++n) {
    if (seq(n) <= 0) throw ParameterError(std::string(name) + "(" + std::to_string(n) + ") must be positive");
  }
}

/// Accumulates vertices, squared weights and closed-form norms.
class TreeAssembler {
 public:
  explicit TreeAssembler(std::string root) : builder_(root) {
    weight_sq_.push_back(0);
    oracle_.emplace_back();
  }

  void edge(const std::string& parent, const std::string& child, const Rational& weight_sq,
            std::optional<Rational> norm_sq = std::nullopt) {
    builder_.add_edge(parent, child);
    weight_sq_.push_back(weight_sq);
    oracle_.push_back(std::move(norm_sq));
  }

  void root_norm(Rational norm_sq) { oracle_[0] = std::move(norm_sq); }

  /// Constant-weight path below `from` down to depth `max_depth`.
  void tail(const std::string& from, std::size_t from_depth, const Rational& weight_sq,
            std::size_t max_depth, bool with_oracle) {
    std::string prev = from;
    for (std::size_t d = from_depth + 1, k = 1; d <= max_depth; ++d, ++k) {
      std::string next = from + "_" + std::to_string(k);
      edge(prev, next, weight_sq, with_oracle ? std::optional<Rational>(weight_sq) : std::nullopt);
      prev = next;
    }
  }

  WeightedShift finish(ShiftAnnotations<Rational> notes, bool keep_oracle) && {
    if (keep_oracle) notes.norm_oracle = std::move(oracle_);
    return WeightedShift(std::move(builder_).build(), std::move(weight_sq_), ExactArithmetic{}, std::move(notes));
  }

 private:
  DirectedTree::Builder builder_;
  std::vector<Rational> weight_sq_;
  std::vector<std::optional<Rational>> oracle_;
};

std::string chain(std::size_t i) { return "u" + std::to_string(i); }

// Chain u_0..u_depth with side branches w_i (i < depth) and their tails.
void add_chain(TreeAssembler& t, const ChainParams& p, std::size_t depth) {
  t.root_norm(1);
  for (std::size_t i = 0; i < depth; ++i) {
    t.edge(chain(i), chain(i + 1), p.alpha_sq(i + 1), Rational(1));
  }
  for (std::size_t i = 0; i < depth; ++i) {
    const std::string w = "w" + std::to_string(i);
    t.edge(chain(i), w, p.beta_sq(i), p.beta_sq(i));
    t.tail(w, i + 1, p.beta_sq(i), depth, true);
  }
}

}  // namespace

void validate(const ChainParams& p, std::size_t depth) {
  check_depth(depth);
  if (!p.alpha_sq || !p.beta_sq) throw ParameterError("alpha and beta sequences are required");
  check_positive(p.alpha_sq, "alpha", 1, depth);
  check_positive(p.beta_sq, "beta", 0, depth);
  for (std::size_t n = 1; n <= depth; ++n) {
    if (p.alpha_sq(n) + p.beta_sq(n - 1) != 1) throw ParameterError(at("alpha(n)^2 + beta(n-1)^2 = 1", n));
  }
}

void validate(const CombParams& p, std::size_t depth) {
  validate(p.chain, depth);
  if (!p.q_sq || !p.gamma_sq) throw ParameterError("q and gamma sequences are required");
  check_positive(p.q_sq, "q", 0, depth);
  for (std::size_t n = 0; n <= depth; ++n) {
    if (1 + p.q_sq(n) != p.gamma_sq(n)) throw ParameterError(at("1 + q(n)^2 = gamma(n)^2", n));
  }
}

void validate(const ForkParams& p, std::size_t depth) {
  validate(p.chain, depth);
  if (!p.gamma_sq || !p.delta_sq) throw ParameterError("gamma and delta sequences are required");
  check_positive(p.gamma_sq, "gamma", 0, depth);
  for (std::size_t n = 0; n <= depth; ++n) {
    if (p.delta_sq(n) != p.chain.beta_sq(n) + p.gamma_sq(n)) {
      throw ParameterError(at("delta(n)^2 = beta(n)^2 + gamma(n)^2", n));
    }
    if (!fork_delta_condition(p, n)) throw ParameterError(at("delta(n) > 1", n));
  }
}

bool fork_ratio_condition(const ForkParams& p, std::size_t n) {
  return p.chain.beta_sq(n) / p.delta_sq(n) + p.chain.alpha_sq(n + 1) < 1;
}

bool fork_delta_condition(const ForkParams& p, std::size_t n) { return p.delta_sq(n) > 1; }

WeightedShift gen_eunb(std::size_t depth) {
  check_depth(depth);
  DirectedTree::Builder builder("o");
  std::vector<Rational> weight_sq{0};
  std::vector<std::string> level{"o"};
  std::vector<Rational> level_weight{0};  // weight of the vertex itself
  for (std::size_t n = 0; n < depth; ++n) {
    std::vector<std::string> next;
    std::vector<Rational> next_weight;
    for (std::size_t i = 0; i < level.size(); ++i) {
      // Root children get 0 and 1; below, a zero-weight parent at level n
      // hands n+1 to its second child, a weighted parent hands its own weight.
      Rational w = (n == 0) ? Rational(1) : (level_weight[i] == 0 ? Rational(n + 1) : level_weight[i]);
      builder.add_edge(level[i], level[i] + "0");
      builder.add_edge(level[i], level[i] + "1");
      weight_sq.push_back(0);
      weight_sq.push_back(w * w);
      next.push_back(level[i] + "0");
      next.push_back(level[i] + "1");
      next_weight.push_back(0);
      next_weight.push_back(w);
    }
    level = std::move(next);
    level_weight = std::move(next_weight);
  }
  // Builder assigns indices in edge order, matching weight_sq.
  ShiftAnnotations<Rational> notes{"eunb", depth, {}, true};
  return WeightedShift(std::move(builder).build(), std::move(weight_sq), ExactArithmetic{}, std::move(notes));
}

WeightedShift gen_fig2(const ChainParams& p, std::size_t depth) {
  validate(p, depth);
  TreeAssembler t(chain(0));
  add_chain(t, p, depth);
  return std::move(t).finish({"fig2", depth, {}, false}, true);
}

WeightedShift gen_fig1(const CombParams& p, std::size_t depth) {
  validate(p, depth);
  TreeAssembler t(chain(0));
  add_chain(t, p.chain, depth);
  // The comb changes the root norm; drop the chain's closed-form root value.
  t.root_norm(1 + p.q_sq(0));
  t.edge(chain(0), "r0", p.q_sq(0), p.gamma_sq(0));
  for (std::size_t n = 0; n + 1 < depth; ++n) {
    const std::string r = "r" + std::to_string(n);
    const std::string s = "s" + std::to_string(n);
    t.edge(r, "r" + std::to_string(n + 1), Rational(1), p.gamma_sq(n + 1));
    t.edge(r, s, p.q_sq(n), p.gamma_sq(n));
    t.tail(s, n + 2, p.gamma_sq(n), depth, true);
  }
  return std::move(t).finish({"fig1", depth, {}, p.q_unbounded}, true);
}

WeightedShift gen_fig3(const ForkParams& p, std::size_t depth) {
  validate(p, depth);
  TreeAssembler t(chain(0));
  t.root_norm(1);
  for (std::size_t i = 0; i < depth; ++i) {
    t.edge(chain(i), chain(i + 1), p.chain.alpha_sq(i + 1), Rational(1));
  }
  for (std::size_t i = 0; i < depth; ++i) {
    const std::string id = std::to_string(i);
    const Rational& delta_sq = p.delta_sq(i);
    t.edge(chain(i), "w" + id, p.chain.beta_sq(i), delta_sq);
    if (i + 2 > depth) continue;
    t.edge("w" + id, "a" + id, p.chain.beta_sq(i), delta_sq);
    t.edge("w" + id, "b" + id, p.gamma_sq(i), delta_sq);
    t.tail("a" + id, i + 2, delta_sq, depth, true);
    t.tail("b" + id, i + 2, delta_sq, depth, true);
  }
  return std::move(t).finish({"fig3", depth, {}, false}, true);
}

WeightedShift gen_classical_path(std::span<const Rational> weights_sq, std::size_t depth) {
  if (weights_sq.size() != depth) throw ParameterError("path needs exactly one weight per edge");
  if (depth == 0) throw ParameterError("path depth must be positive");
  DirectedTree::Builder builder("p0");
  std::vector<Rational> w{0};
  for (std::size_t n = 1; n <= depth; ++n) {
    if (weights_sq[n - 1] < 0) throw ParameterError("negative squared weight");
    builder.add_edge("p" + std::to_string(n - 1), "p" + std::to_string(n));
    w.push_back(weights_sq[n - 1]);
  }
  ShiftAnnotations<Rational> notes{"path", depth, {}, std::nullopt};
  return WeightedShift(std::move(builder).build(), std::move(w), ExactArithmetic{}, std::move(notes));
}

WeightedShift gen_q_path(const Rational& q, std::size_t depth) {
  if (q <= 0) throw ParameterError("q must be positive");
  std::vector<Rational> w(depth);
  Rational current = 1;
  for (std::size_t n = 0; n < depth; ++n) {
    w[n] = current;
    current /= q;
  }
  WeightedShift path = gen_classical_path(w, depth);
  ShiftAnnotations<Rational> notes = path.annotations();
  notes.family = "qpath";
  notes.unbounded_family = q < 1;
  std::vector<Rational> full{0};
  full.insert(full.end(), w.begin(), w.end());
  return WeightedShift(path.tree(), std::move(full), ExactArithmetic{}, std::move(notes));
}

CombParams comb_for_constant(const Rational& c) {
  if (c <= 1) throw ParameterError("the optimal constant must exceed 1");
  ChainParams chain = chain_for_constant(c);
  const Rational q0_sq = 1 / (c - 1);
  const double q0 = std::sqrt(to_double(q0_sq));
  Sequence q_sq = [q0_sq, q0](std::size_t n) -> Rational {
    if (n == 0) return q0_sq;
    Rational q(q0 + static_cast<double>(n));
    return q * q;
  };
  Sequence gamma_sq = [q_sq](std::size_t n) -> Rational { return 1 + q_sq(n); };
  return {std::move(chain), std::move(q_sq), std::move(gamma_sq), true};
}

ChainParams chain_for_constant(const Rational& c) {
  if (c <= 1) throw ParameterError("the optimal constant must exceed 1");
  const Rational a = 1 / c;
  return {[a](std::size_t) { return a; }, [a](std::size_t) { return 1 - a; }};
}

ChainParams chain_vanishing() {
  return {[](std::size_t n) { return Rational(1, n + 1); },
          [](std::size_t n) { return 1 - Rational(1, n + 2); }};
}

namespace {
ForkParams fork_from_chain(ChainParams chain) {
  Sequence gamma_sq = [](std::size_t) { return Rational(1); };
  Sequence beta_sq = chain.beta_sq;
  Sequence delta_sq = [beta_sq](std::size_t n) { return beta_sq(n) + 1; };
  return {std::move(chain), std::move(gamma_sq), std::move(delta_sq)};
}
}  // namespace

ForkParams fork_for_constant(const Rational& c) { return fork_from_chain(chain_for_constant(c)); }
ForkParams fork_vanishing() { return fork_from_chain(chain_vanishing()); }

WeightedShift generate(const std::string& family, std::optional<std::size_t> depth, std::optional<Rational> c,
                       std::optional<Rational> q) {
  if (family == "eunb") return gen_eunb(depth.value_or(4));
  if (family == "fig1") return gen_fig1(comb_for_constant(c.value_or(4)), depth.value_or(5));
  if (family == "fig2") return gen_fig2(c ? chain_for_constant(*c) : chain_vanishing(), depth.value_or(5));
  if (family == "fig3") return gen_fig3(c ? fork_for_constant(*c) : fork_vanishing(), depth.value_or(5));
  if (family == "path") return gen_q_path(q.value_or(1), depth.value_or(6));
  throw ParameterError("unknown family '" + family + "'");
}

}  // namespace treeshift::families
