#include "treeshift/report.hpp"

#include <cmath>
#include <sstream>

#include "treeshift/corpus.hpp"

namespace treeshift {

namespace {

std::string format_value(const Rational& x) { return to_string(x); }
std::string format_value(double x) { return to_decimal_string(x); }

json label_or_null(const DirectedTree& t, const std::optional<Vertex>& v) {
  return v ? json(t.label(*v)) : json(nullptr);
}

json tristate_json(Tristate t) {
  switch (t) {
    case Tristate::yes: return true;
    case Tristate::no: return false;
    case Tristate::unknown: return "unknown";
  }
  return "unknown";
}

template <class Arith>
json classification_json_impl(const BasicWeightedShift<Arith>& s,
                              const ClassificationReport<typename Arith::value_type>& r) {
  const DirectedTree& t = s.tree();
  json j;
  j["family"] = s.annotations().family;
  j["vertices"] = s.size();
  j["scope"] = r.scope_kind == ScopeKind::interior ? "interior" : "full";
  j["quasinormal"] = r.quasinormal;
  j["weakly_quasinormal"] = r.weakly_quasinormal;
  j["c_opt"] = format_extended(r.c_opt);
  j["abc3"] = r.abc3;
  j["hyponormal"] = tristate_json(r.hyponormal);

  json w;
  if (r.quasinormal_vertex) {
    w["quasinormal"] = {{"vertex", t.label(*r.quasinormal_vertex)},
                        {"child", label_or_null(t, r.quasinormal_child)}};
  } else {
    w["quasinormal"] = nullptr;
  }
  w["c_opt"] = label_or_null(t, r.c_opt_vertex);
  w["abc3"] = label_or_null(t, r.abc3_vertex);
  if (r.hyponormal_vertex) {
    json h{{"vertex", t.label(*r.hyponormal_vertex)}};
    if (r.hyponormal_sum) h["sum"] = format_value(*r.hyponormal_sum);
    w["hyponormal"] = h;
  } else {
    w["hyponormal"] = nullptr;
  }
  j["witnesses"] = w;

  json boundary = json::array();
  for (Vertex v : r.boundary_vertices) boundary.push_back(t.label(v));
  j["boundary_vertices"] = boundary;
  j["fragile"] = r.fragile;

  const auto nb = norm_bound(s);
  j["norm_bound"] = {{"max_norm_sq", format_value(nb.max_norm_sq)},
                     {"value", nb.value},
                     {"unbounded_family", nb.unbounded_family}};
  return j;
}

void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
    return;
  }
  os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

json dump_vector(const oracle::Vector& f, const std::vector<std::string>& labels) {
  json out = json::object();
  for (oracle::Index i = 0; i < f.size(); ++i) {
    if (std::abs(f(i)) <= 1e-12) continue;
    out[labels[static_cast<std::size_t>(i)]] = {f(i).real(), f(i).imag()};
  }
  return out;
}

json basis_vector(const WeightedShift& s, Vertex u) {
  json out = json::object();
  out[s.tree().label(u)] = {1.0, 0.0};
  return out;
}

json extended_json(const Extended<double>& x) {
  return x.is_infinite() ? json("inf") : json(to_decimal_string(x.value()));
}

bool c_match(const Extended<Rational>& exact, const Extended<double>& approx, double tol) {
  if (exact.is_infinite() || approx.is_infinite()) return exact.is_infinite() == approx.is_infinite();
  const double e = to_double(exact.value());
  return std::abs(e - approx.value()) <= tol * std::max(1.0, std::abs(e));
}

}  // namespace

json classification_json(const WeightedShift& s, const ClassificationReport<Rational>& r) {
  return classification_json_impl(s, r);
}

json classification_json(const FloatWeightedShift& s, const ClassificationReport<double>& r) {
  return classification_json_impl(s, r);
}

json classify_report(const WeightedShift& s, ScopeKind kind, bool use_float,
                     const std::optional<std::pair<AtomFunction, AtomFunction>>& transport) {
  json j;
  if (use_float) {
    const FloatWeightedShift fs = to_float(s);
    j = classification_json(fs, classify(fs, kind));
    if (transport) {
      j["generalized_c_opt"] = format_extended(
          generalized_c_optimal(fs, transport->first, transport->second, scope_vertices(fs, kind)).value);
    }
  } else {
    j = classification_json(s, classify(s, kind));
    if (transport) {
      j["generalized_c_opt"] = format_extended(
          generalized_c_optimal(s, transport->first, transport->second, scope_vertices(s, kind)).value);
    }
  }
  return j;
}

std::string json_to_text(const json& j) {
  std::ostringstream os;
  flatten(j, "", os);
  return os.str();
}

OracleComparison compare_with_oracle(const WeightedShift& s, const OracleOptions& options) {
  const oracle::Tolerances& tol = options.tolerances;
  const std::vector<Vertex> scope = oracle::matrix_scope(s, options.scope);
  const oracle::Domain domain =
      scope.size() == s.size() ? oracle::Domain{} : oracle::domain_of(scope);
  const oracle::MatrixOperator m = oracle::from_shift(s, tol, options.dimension_cap);

  const Verdict qn = is_quasinormal(s, scope);
  const auto c = c_optimal(s, scope);
  const auto qc = oracle::check_quasinormal(m, domain, options.seed, options.random_vectors);
  const auto oc = oracle::oracle_c_optimal(m, domain);

  bool nonzero = false;
  for (Vertex u : scope) nonzero = nonzero || !s.arithmetic().is_zero(s.norm_sq(u));

  OracleComparison out;
  json& j = out.report;
  j["family"] = s.annotations().family;
  j["scope"] = options.scope == ScopeKind::interior ? "interior" : "full";
  j["domain_size"] = scope.size();
  j["classify"] = {{"quasinormal", qn.holds}, {"c_opt", format_extended(c.value)}};
  j["oracle"] = {{"quasinormal", qc.verdict()},
                 {"projections_commute", qc.projections_commute},
                 {"measures_equal", qc.measures_equal},
                 {"absolutely_continuous", qc.absolutely_continuous},
                 {"c_opt", extended_json(oc.value)},
                 {"polar_residual", qc.polar_residual},
                 {"projection_residual", qc.projection_residual},
                 {"vectors_tested", qc.vectors_tested},
                 {"atoms", m.atoms().size()},
                 {"fragile", m.fragile()}};

  json agreement;
  agreement["c_opt"] = c_match(c.value, oc.value, tol.verdict);
  agreement["quasinormal"] = qn.holds == qc.verdict();
  agreement["measure_conditions"] = qc.consistent();
  const bool c_is_one = oc.value.is_finite() && std::abs(oc.value.value() - 1.0) <= tol.verdict;
  agreement["quasinormal_iff_c_one"] = !nonzero || qc.verdict() == c_is_one;

  if (oc.value.is_finite()) {
    if (auto t = oracle::build_T(m, domain)) {
      j["intertwiner"] = {{"intertwining_residual", t->intertwining_residual},
                          {"commutation_residual", t->commutation_residual},
                          {"norm", t->norm},
                          {"sqrt_c", t->sqrt_c},
                          {"range_residual", t->range_residual},
                          {"adjoint_residual", t->adjoint_residual}};
      agreement["intertwiner"] = t->passes(tol);
    }
  }

  if (options.transport) {
    const auto& [phi, psi] = *options.transport;
    const auto gc_class = generalized_c_optimal(s, phi, psi, scope);
    const auto gc = oracle::check_generalized(m, phi, psi, domain, options.seed, options.random_vectors);
    j["generalized"] = {{"phi", phi.name()},
                        {"psi", psi.name()},
                        {"classify_c", format_extended(gc_class.value)},
                        {"oracle_c", extended_json(gc.c)},
                        {"intertwines", gc.intertwines},
                        {"functional", gc.functional},
                        {"inclusion", gc.inclusion},
                        {"measures_equal", gc.measures_equal},
                        {"absolutely_continuous", gc.absolutely_continuous},
                        {"intertwining_residual", gc.intertwining_residual},
                        {"functional_residual", gc.functional_residual},
                        {"inclusion_residual", gc.inclusion_residual}};
    agreement["generalized_c"] = c_match(gc_class.value, gc.c, tol.verdict);
    agreement["generalized_operators"] = gc.operators_agree();
    agreement["generalized_measures"] = gc.measures_agree(tol.verdict);
  }

  for (const auto& [k, v] : agreement.items()) out.agree = out.agree && v.get<bool>();
  j["agreement"] = agreement;
  j["agree"] = out.agree;

  if (!out.agree) {
    if (!agreement["quasinormal"].get<bool>() && qn.vertex) {
      out.witness = basis_vector(s, *qn.vertex);
    } else if (!agreement["c_opt"].get<bool>() && c.argmax) {
      out.witness = basis_vector(s, *c.argmax);
    } else if (qc.witness) {
      out.witness = dump_vector(*qc.witness, m.labels());
    } else if (oc.witness) {
      out.witness = dump_vector(*oc.witness, m.labels());
    }
    j["witness"] = out.witness;
  }
  return out;
}

OracleComparison compare_random_trees(std::uint64_t seed, std::size_t count, const OracleOptions& options) {
  OracleComparison out;
  std::size_t comparisons = 0, disagreements = 0;
  json first = nullptr;
  const auto trees = corpus::tree_corpus(seed, count);
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (ScopeKind kind : {ScopeKind::full, ScopeKind::interior}) {
      OracleOptions o = options;
      o.scope = kind;
      o.seed = options.seed + i;
      OracleComparison c = compare_with_oracle(trees[i], o);
      ++comparisons;
      if (!c.agree) {
        ++disagreements;
        if (first.is_null()) {
          first = c.report;
          first["index"] = i;
          out.witness = c.witness;
        }
      }
    }
  }
  out.agree = disagreements == 0;
  out.report = {{"trees", count},
                {"seed", seed},
                {"comparisons", comparisons},
                {"disagreements", disagreements},
                {"agree", out.agree}};
  if (!first.is_null()) out.report["first_disagreement"] = first;
  return out;
}

json izonp_json(const oracle::IzonpCheck& c) {
  return {{"precondition", c.precondition}, {"axis_isometric", c.axis_isometric},
          {"axis_not_preserved", c.axis_not_preserved}, {"not_contraction", c.not_contraction},
          {"norm", c.norm}, {"holds", c.holds()}};
}

}  // namespace treeshift
