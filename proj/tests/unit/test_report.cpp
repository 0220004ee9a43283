#include <doctest.h>

#include "treeshift/families.hpp"
#include "treeshift/report.hpp"
#include "treeshift/spec_format.hpp"

using namespace treeshift;

TEST_CASE("classification json") {
  auto s = parse_tree_spec("root w\nedge w a 1\nedge w b 2\n");
  auto j = classification_json(s, classify(s, ScopeKind::full));
  CHECK(j["c_opt"] == "inf");
  CHECK(j["abc3"] == false);
  CHECK(j["quasinormal"] == false);
  CHECK(j["weakly_quasinormal"] == false);
  CHECK(j["hyponormal"] == false);
  CHECK(j["witnesses"]["quasinormal"]["vertex"] == "w");
  CHECK(j["witnesses"]["c_opt"] == "w");
  CHECK(j["norm_bound"]["max_norm_sq"] == "5");
  CHECK(j["vertices"] == 3);

  auto fj = classification_json(to_float(s), classify(to_float(s), ScopeKind::full));
  CHECK(fj["c_opt"] == "inf");

  auto text = json_to_text(j);
  CHECK(text.find("c_opt: inf\n") != std::string::npos);
  CHECK(text.find("witnesses.quasinormal.vertex: w\n") != std::string::npos);
}

TEST_CASE("interior verdicts on truncated families") {
  auto s = families::gen_eunb(4);
  auto j = classification_json(s, classify(s));
  CHECK(j["quasinormal"] == true);
  CHECK(j["c_opt"] == "1");
  CHECK(j["norm_bound"]["unbounded_family"] == true);
  CHECK(j["boundary_vertices"].size() > 0);
}

TEST_CASE("oracle comparison") {
  auto fig1 = families::gen_fig1(families::comb_for_constant(4), 5);
  auto r = compare_with_oracle(fig1);
  CHECK(r.agree);
  CHECK(r.report["agreement"]["c_opt"] == true);
  CHECK(r.report.contains("intertwiner"));

  auto three = parse_tree_spec("root w\nedge w a 1\nedge w b 2\n");
  OracleOptions full;
  full.scope = ScopeKind::full;
  auto t = compare_with_oracle(three, full);
  CHECK(t.agree);
  CHECK(t.report["oracle"]["c_opt"] == "inf");
  CHECK_FALSE(t.report.contains("intertwiner"));

  OracleOptions transported;
  transported.transport = std::make_pair(AtomFunction::identity(), AtomFunction::psi(2));
  auto q = compare_with_oracle(families::gen_q_path(2, 8), transported);
  CHECK(q.agree);
  CHECK(q.report["generalized"]["classify_c"] == "1");
}

TEST_CASE("random tree comparison") {
  auto r = compare_random_trees(5, 12);
  CHECK(r.report["comparisons"] == 24);
  CHECK(r.report["disagreements"] == 0);
  CHECK(r.agree);
}

TEST_CASE("izonp json") {
  auto j = izonp_json(oracle::izonp_counterexample_check(1.0, 1.0));
  CHECK(j["holds"] == true);
  CHECK(j["precondition"] == true);
}
