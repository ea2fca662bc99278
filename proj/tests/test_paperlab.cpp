#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "oracles.hpp"
#include "zk/error.hpp"
#include "zk/grp.hpp"
#include "zk/paperlab.hpp"

using namespace zk;

namespace {

std::int64_t computed(const Experiment& e, const std::string& check) {
  const Check* c = e.find(check);
  EXPECT_NE(c, nullptr) << check;
  return c ? c->computed.get<std::int64_t>() : -1;
}

Verdict verdict(const Experiment& e, const std::string& check) { return e.find(check)->verdict; }

// Partitions of n by listing non-increasing sequences.
std::uint64_t partitions_by_listing(int n, int largest) {
  if (n == 0) return 1;
  std::uint64_t c = 0;
  for (int k = std::min(n, largest); k >= 1; --k) c += partitions_by_listing(n - k, k);
  return c;
}

}  // namespace

TEST(Prediction, Expressions) {
  std::map<std::string, std::int64_t> env{{"q", 4}, {"n", 3}};
  EXPECT_EQ(evaluate_prediction("gcd(3,q-1)", env), 3);
  EXPECT_EQ(evaluate_prediction("q^3 * 2 + 1", env), 129);
  EXPECT_EQ(evaluate_prediction("2^3^2", env), 512);
  EXPECT_EQ(evaluate_prediction("q > n ? 7 : report", env), 7);
  EXPECT_EQ(evaluate_prediction("q < n ? 7 : report", env), std::nullopt);
  EXPECT_EQ(evaluate_prediction("report", env), std::nullopt);
  EXPECT_EQ(evaluate_prediction("n % 2 == 1 ? 3 : report", env), 3);
  EXPECT_EQ(evaluate_prediction("-(q - 10) / 2", env), 3);
  EXPECT_THROW(evaluate_prediction("m + 1", env), std::logic_error);
  EXPECT_THROW(evaluate_prediction("q +", env), std::logic_error);
  EXPECT_THROW(evaluate_prediction("q / 0", env), std::logic_error);
}

TEST(Catalog, EveryRuleParses) {
  ASSERT_EQ(catalog().size(), 12u);
  for (const auto& e : catalog()) {
    std::map<std::string, std::int64_t> env{{"q", 5}, {"n", 2}, {"m", 5}, {"p", 5}, {"r", 2}, {"gl", 1},
                                            {"weyl_classes", 2}, {"partitions", 2}, {"dformula", 4}};
    for (const auto& r : e.rules) {
      EXPECT_NO_THROW(evaluate_prediction(r.expr, env)) << e.id << " " << r.check;
      EXPECT_TRUE(r.provenance == "PAPER" || r.provenance == "DERIVED") << e.id;
    }
  }
  EXPECT_EQ(catalog_entry("e3").slug, "sl3-unipotent");
  EXPECT_EQ(catalog_entry("heisenberg").id, "E7");
  EXPECT_THROW(catalog_entry("E13"), UsageError);
}

TEST(Oracles, PartitionCount) {
  for (int n = 0; n <= 15; ++n) EXPECT_EQ(partition_count(n), partitions_by_listing(n, n)) << n;
}

TEST(Oracles, StructuredUnipotentClassesMatchTable) {
  // rational classes of u_beta counted through the group table
  for (std::uint32_t q : {3u, 5u, 7u, 9u}) {
    const Field& f = field_of_order(q);
    auto g = instantiate(parse_family("sl:2"), f);
    std::set<std::size_t> classes;
    for (Elem b = 1; b < q; ++b) classes.insert(g->class_of(g->id_of(regular_unipotent(f, 2, b))));
    EXPECT_EQ(regular_unipotent_class_reps(f, 2).size(), classes.size()) << q;
  }
  const Field& f4 = field_of_order(4);
  auto g = instantiate(parse_family("sl:3"), f4);
  std::set<std::size_t> classes;
  for (Elem b = 1; b < 4; ++b) classes.insert(g->class_of(g->id_of(regular_unipotent(f4, 3, b))));
  EXPECT_EQ(regular_unipotent_class_reps(f4, 3).size(), classes.size());
}

TEST(Experiments, GlTwoCensus) {
  auto e = run_experiment("E1", {{"q", 3}});
  EXPECT_EQ(computed(e, "geometric"), 3);
  EXPECT_EQ(computed(e, "base"), 4);
  EXPECT_EQ(verdict(e, "base"), Verdict::ReportOnly);
  EXPECT_EQ(e.verdict, Verdict::Pass);
  EXPECT_EQ(computed(run_experiment("E1", {{"q", 2}}), "base"), 3);
}

TEST(Experiments, SlTwoUnipotent) {
  for (int q : {3, 5, 7}) {
    auto e = run_experiment("E2", {{"q", q}});
    EXPECT_EQ(computed(e, "rational_classes"), 2) << q;
    EXPECT_EQ(computed(e, "zclasses"), 1) << q;
    EXPECT_EQ(e.verdict, Verdict::Pass);
  }
  EXPECT_THROW(run_experiment("E2", {{"q", 4}}), DomainError);
}

TEST(Experiments, SlThreeUnipotent) {
  auto e = run_experiment("E3", {{"q", 4}});
  EXPECT_EQ(computed(e, "rational_classes"), 3);
  EXPECT_EQ(computed(e, "zclasses"), 3);
  EXPECT_EQ(e.verdict, Verdict::Pass);
  EXPECT_THROW(run_experiment("E3", {{"q", 3}}), GuardViolation);
  auto e3 = run_experiment("E3", {{"q", 3}, {"allow_bad_char", true}});
  EXPECT_EQ(e3.verdict, Verdict::Pass);
  EXPECT_EQ(e3.params["allow_bad_char"], true);
  EXPECT_FALSE(limits().allow_bad_char);
}

TEST(Experiments, UnipotentForms) {
  auto e = run_experiment("E4");
  EXPECT_EQ(computed(e, "rational_classes"), 4);
  EXPECT_EQ(e.verdict, Verdict::Pass);
  EXPECT_EQ(computed(run_experiment("E4", {{"n", 3}, {"q", 7}}), "rational_classes"), 3);
}

TEST(Experiments, Tori) {
  auto e = run_experiment("E5", {{"n", 2}, {"q", 5}});
  EXPECT_EQ(computed(e, "rss_zclasses"), 2);
  EXPECT_EQ(computed(e, "weyl_classes"), 2);
  EXPECT_EQ(e.verdict, Verdict::Pass);
  // GL_3(F_3) has no regular split elements: report only
  auto small = run_experiment("E5", {{"n", 3}, {"q", 3}});
  EXPECT_EQ(small.verdict, Verdict::ReportOnly);
  EXPECT_EQ(computed(small, "rss_zclasses"), 2);
}

TEST(Experiments, BorelCounterexamples) {
  auto a = run_experiment("E6", {{"which", "gl2/F2"}});
  EXPECT_EQ(computed(a, "base_equivalent"), 1);
  EXPECT_EQ(computed(a, "ext_equivalent"), 0);
  EXPECT_EQ(computed(a, "growth_degree"), 2);
  EXPECT_EQ(a.verdict, Verdict::Pass);
  auto b = run_experiment("E6", {{"which", "sl2/F3"}});
  EXPECT_EQ(b.verdict, Verdict::Pass);
  EXPECT_EQ(verdict(b, "growth_degree"), Verdict::ReportOnly);
  EXPECT_EQ(computed(b, "growth_degree"), 1);
  EXPECT_THROW(run_experiment("E6", {{"which", "gl3/F2"}}), UsageError);
}

TEST(Experiments, HeisenbergAndDihedral) {
  for (int q : {3, 5, 7}) EXPECT_EQ(run_experiment("E7", {{"q", q}}).verdict, Verdict::Pass) << q;
  for (int m : {3, 5, 7}) EXPECT_EQ(computed(run_experiment("E9", {{"m", m}}), "zclasses"), 3) << m;
  auto even = run_experiment("E9", {{"m", 4}});
  EXPECT_EQ(even.verdict, Verdict::ReportOnly);
}

TEST(Experiments, CuriousExample) {
  auto e = run_experiment("E8", {{"n", 3}});
  EXPECT_EQ(computed(e, "torus_order"), 1);
  EXPECT_EQ(computed(e, "equal_centralizers"), 0);
  EXPECT_EQ(e.verdict, Verdict::Pass);
  EXPECT_THROW(run_experiment("E8", {{"n", 2}}), GuardViolation);
  EXPECT_EQ(run_experiment("E8", {{"n", 2}, {"allow_bad_char", true}}).verdict, Verdict::Pass);
  // over F_5 regular split elements have the torus as centralizer
  auto big = run_experiment("E8", {{"n", 2}, {"q", 5}});
  EXPECT_EQ(big.verdict, Verdict::ReportOnly);
  EXPECT_GT(computed(big, "equal_centralizers"), 0);
}

TEST(Experiments, NormalizerStructure) {
  for (int q : {2, 4, 5}) {
    auto e = run_experiment("E10", {{"q", q}});
    const std::int64_t g = std::gcd(3, q - 1);
    EXPECT_EQ(computed(e, "diagonal_part"), (q - 1) * g) << q;
    EXPECT_EQ(computed(e, "normalizer_order"), q * q * q * (q - 1) * g) << q;
    EXPECT_EQ(e.verdict, Verdict::Pass);
  }
}

TEST(Experiments, FiberBound) {
  auto e = run_experiment("E11");
  EXPECT_EQ(computed(e, "fiber"), 2);
  EXPECT_EQ(computed(e, "normalizer_forms"), 2);
  EXPECT_EQ(computed(e, "quotient_classes"), 2);
  EXPECT_EQ(e.verdict, Verdict::Pass);
  auto sl = run_experiment("E11", {{"family", "sl:2"}, {"q", 5}});
  EXPECT_EQ(sl.verdict, Verdict::Pass);
}

TEST(Experiments, HOneTriple) {
  auto e = run_experiment("E12");
  EXPECT_EQ(e.verdict, Verdict::Pass);
  EXPECT_EQ(e.find("twisted_classes")->computed.size(), 12u * 7u);
  auto& up = e.find("unipotent_classes")->computed;
  EXPECT_FALSE(up.empty());
}

TEST(Experiments, ParamsAreValidated) {
  EXPECT_THROW(run_experiment("E1", {{"n", 2}}), UsageError);
  EXPECT_THROW(run_experiment("E1", {{"q", "three"}}), UsageError);
  EXPECT_THROW(run_experiment("E1", json::array()), UsageError);
  EXPECT_THROW(run_experiment("nope"), UsageError);
}

TEST(Experiments, Deterministic) {
  auto a = to_json(run_experiment("E7", {{"q", 4}}));
  auto b = to_json(run_experiment("E7", {{"q", 4}}));
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_FALSE(a.contains("runtime_s"));
  EXPECT_EQ(a["schema"], "zclass-kit/1");
}

TEST(Suite, Smoke) {
  auto s = verify_suite("smoke");
  EXPECT_TRUE(s.passed());
  EXPECT_EQ(s.runs.size(), 5u);
  EXPECT_LT(s.runtime_s(), 5.0);
  const std::string md = to_markdown(s.runs);
  EXPECT_NE(md.find("| E1 gl2-zclasses | q=2, r=2 | geometric | 3 | 3 | pass |"), std::string::npos) << md;
  EXPECT_EQ(md.find("runtime"), std::string::npos);
  EXPECT_NE(runtime_footer(s.runs).find("runtime: total"), std::string::npos);
  EXPECT_THROW(verify_suite("everything"), UsageError);
}

TEST(Suite, PlansCoverCatalog) {
  std::set<std::string> ids;
  for (const auto& [id, p] : suite_plan("paper")) ids.insert(id);
  EXPECT_EQ(ids.size(), catalog().size());
  EXPECT_GT(suite_plan("full").size(), suite_plan("paper").size());
}

TEST(Suite, ErrorsBecomeFailures) {
  ScopedLimits lim(Limits{limits().max_field, 100, false});
  auto s = verify_suite("smoke");
  EXPECT_FALSE(s.passed());
  bool saw_error = false;
  for (const auto& e : s.runs) saw_error |= e.error.has_value();
  EXPECT_TRUE(saw_error);
}
