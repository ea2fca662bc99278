#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "zk/error.hpp"
#include "zk/zclass.hpp"

using namespace zk;

namespace {

std::unique_ptr<GroupTable> make(const std::string& s) { return instantiate(parse_group(s)); }

std::vector<Mat> table_elements(const GroupTable& g) {
  std::vector<Mat> out;
  for (Id i = 0; i < g.order(); ++i) out.push_back(g.element(i));
  return out;
}

Mat diag(const Field& f, std::vector<Elem> d) { return Mat::diagonal(f, d); }

}  // namespace

TEST(ZPartition, CountsMatchBruteForce) {
  for (std::string s : {"gl:2@2^1", "gl:2@3^1", "sl:2@3^1", "sl:2@5^1", "borel-gl:2@3^1", "u3@3^1", "dihedral:5"}) {
    auto g = make(s);
    auto p = z_partition(*g);
    EXPECT_EQ(p.zclass_count(), oracle::z_class_count(table_elements(*g))) << s;
  }
}

TEST(ZPartition, Gl2Census) {
  EXPECT_EQ(z_partition(*make("gl:2@2^1")).zclass_count(), 3u);
  EXPECT_EQ(z_partition(*make("gl:2@5^1")).zclass_count(), 4u);
  auto g3 = make("gl:2@3^1");
  auto p = z_partition(*g3);
  ASSERT_EQ(p.zclass_count(), 4u);
  std::multiset<std::size_t> orders;
  for (const auto& b : p.blocks) orders.insert(b.centralizer->order());
  EXPECT_EQ(orders, (std::multiset<std::size_t>{4, 6, 8, 48}));
}

TEST(ZPartition, InvariantsHold) {
  for (std::string s : {"gl:2@2^1", "gl:2@3^1", "gl:2@2^2", "sl:2@3^1", "sl:2@5^1", "borel-gl:2@2^2", "borel-sl:2@3^1",
                        "u3@3^1", "unipotent:3@2^1", "dihedral:5", "dihedral:6", "gl:3@2^1"}) {
    auto g = make(s);
    auto p = z_partition(*g);
    EXPECT_TRUE(check_zpartition(p).empty()) << s << ": " << check_zpartition(p).front();
    std::size_t classes = 0;
    for (const auto& b : p.blocks) classes += b.classes.size();
    EXPECT_EQ(classes, g->class_count_all()) << s;
  }
}

TEST(ZPartition, AbelianGivesOneBlock) {
  for (std::string s : {"borel-gl:2@2^1", "borel-sl:2@3^1", "unipotent:2@5^1"}) {
    auto g = make(s);
    ASSERT_TRUE(g->is_abelian()) << s;
    EXPECT_EQ(z_partition(*g).zclass_count(), 1u) << s;
  }
}

TEST(ZPartition, FilteredRegularUnipotents) {
  for (auto [q, expect] : std::vector<std::pair<std::uint32_t, std::size_t>>{{2, 1}, {3, 1}, {4, 3}}) {
    FamilySpec fam{FamilyKind::SL, 3};
    fam.allow_bad_char = q == 3;
    auto g = instantiate(fam, field_of_order(q));
    auto p = z_partition(*g, filter_regular_unipotent());
    EXPECT_EQ(p.classes_considered, expect) << q;
    EXPECT_EQ(p.zclass_count(), expect) << q;
    EXPECT_TRUE(p.filtered);
  }
}

TEST(ZPartition, FilterByName) {
  EXPECT_FALSE(filter_by_name("all"));
  EXPECT_TRUE(filter_by_name("rss"));
  EXPECT_THROW(filter_by_name("bogus"), UsageError);
  auto g = make("gl:2@3^1");
  EXPECT_EQ(z_partition(*g, filter_by_name("rss")).zclass_count(), 2u);
}

TEST(ZEquivalent, ReflexiveGivesIdentity) {
  auto g = make("gl:2@3^1");
  for (Id i = 0; i < g->order(); i += 7) EXPECT_EQ(z_equivalent(*g, i, i), g->identity());
}

TEST(ZEquivalent, RegularUnipotentsOfSl2) {
  auto g = make("sl:2@5^1");
  const Field& f = g->field();
  const Id u1 = g->id_of(regular_unipotent(f, 2, 1));
  const Id u2 = g->id_of(regular_unipotent(f, 2, 2));
  EXPECT_NE(g->class_of(u1), g->class_of(u2));
  auto x = z_equivalent(*g, u1, u2);
  ASSERT_TRUE(x);
  EXPECT_EQ(conjugate(centralizer(*g, u1), *x), centralizer(*g, u2));
}

TEST(ZEquivalent, BorelOverF2IsAbelian) {
  auto g = make("borel-gl:2@2^1");
  const Id u = g->id_of(regular_unipotent(g->field(), 2, 1));
  EXPECT_TRUE(z_equivalent(*g, g->identity(), u));
}

TEST(ZEquivalent, EquivalenceRelationMatchesOracle) {
  for (std::string s : {"gl:2@2^1", "sl:2@3^1", "dihedral:5", "gl:2@3^1"}) {
    auto g = make(s);
    const std::size_t n = g->order();
    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
    for (Id a = 0; a < n; ++a)
      for (Id b = 0; b < n; ++b) {
        auto x = z_equivalent(*g, a, b);
        rel[a][b] = x.has_value();
        if (x) ASSERT_EQ(conjugate(centralizer(*g, a), *x), centralizer(*g, b)) << s;
      }
    for (Id a = 0; a < n; ++a) {
      ASSERT_TRUE(rel[a][a]);
      for (Id b = 0; b < n; ++b) {
        ASSERT_EQ(rel[a][b], rel[b][a]) << s;
        if (!rel[a][b]) continue;
        for (Id c = 0; c < n; ++c)
          if (rel[b][c]) ASSERT_TRUE(rel[a][c]) << s;
      }
    }
    std::set<Id> roots;
    for (Id a = 0; a < n; ++a) roots.insert(static_cast<Id>(std::find(rel[a].begin(), rel[a].end(), 1) - rel[a].begin()));
    EXPECT_EQ(roots.size(), oracle::z_class_count(table_elements(*g))) << s;
  }
}

TEST(BaseChange, BorelCounterexamples) {
  {
    const Field& f = field_of_order(2);
    auto rep = base_change_probe(parse_family("borel-gl:2"), f, 2, {{Mat::identity(f, 2), regular_unipotent(f, 2, 1)}});
    ASSERT_EQ(rep.pairs.size(), 1u);
    EXPECT_TRUE(rep.pairs[0].equivalent_base);
    EXPECT_FALSE(rep.pairs[0].equivalent_ext);
    EXPECT_TRUE(rep.pairs[0].changed());
  }
  {
    const Field& f = field_of_order(3);
    auto rep = base_change_probe(parse_family("borel-sl:2"), f, 2, {{Mat::identity(f, 2), regular_unipotent(f, 2, 1)}});
    EXPECT_TRUE(rep.pairs[0].equivalent_base);
    EXPECT_FALSE(rep.pairs[0].equivalent_ext);
  }
}

TEST(BaseChange, ToriFuseOverQuadraticExtension) {
  const Field& f = field_of_order(3);
  Mat split = diag(f, {1, 2});
  Mat aniso = companion(f, {1, 0, 1});  // x^2 + 1, irreducible over F_3
  auto rep = base_change_probe(parse_family("gl:2"), f, 2, {{split, aniso}});
  EXPECT_FALSE(rep.pairs[0].equivalent_base);
  EXPECT_TRUE(rep.pairs[0].equivalent_ext);
}

TEST(Fusion, Sl2RegularUnipotent) {
  const Field& f = field_of_order(5);
  auto fs = fusion_count(parse_family("sl:2"), f, 2, regular_unipotent(f, 2, 1));
  EXPECT_EQ(fs.class_count(), 2u);
  ASSERT_TRUE(fs.zlevel_available);
  EXPECT_EQ(fs.zclass_count(), 1u);
}

TEST(Fusion, CentralElementNeverSplits) {
  const Field& f = field_of_order(5);
  auto fs = fusion_count(parse_family("sl:2"), f, 2, Mat::scalar(f, 2, 4));
  EXPECT_EQ(fs.class_count(), 1u);
  EXPECT_EQ(fs.zclass_count(), 1u);
}

TEST(Fusion, Sl3OverF4NeedsCubicExtension) {
  const Field& f = field_of_order(4);
  const Mat u = regular_unipotent(f, 3, 1);
  // F_4^* lies in the cubes of F_64^* but not of F_16^*.
  EXPECT_EQ(fusion_count(parse_family("sl:3"), f, 2, u).class_count(), 1u);
  auto fs = fusion_count(parse_family("sl:3"), f, 3, u);
  EXPECT_EQ(fs.class_count(), 3u);
  EXPECT_FALSE(fs.zlevel_available);
}

TEST(Fusion, MatchesBruteForceInExtension) {
  const Field& f = field_of_order(3);
  const Field& k = field_of_order(9);
  auto base = make("sl:2@3^1");
  auto bigl = oracle::sl(k, 2);
  for (const auto& info : conjugacy_classes(*base)) {
    const Mat g = base->element(info.rep);
    auto fs = fusion_count(parse_family("sl:2"), f, 2, g);
    std::size_t expect = 0;
    for (const auto& other : conjugacy_classes(*base))
      if (oracle::conjugate_in(bigl, embed(base->element(other.rep), k), embed(g, k))) ++expect;
    EXPECT_EQ(fs.class_count(), expect) << g.to_string();
    EXPECT_GE(fs.zclass_count(), 1u);
  }
}

TEST(Growth, BorelUnipotentHasDegreeTwo) {
  const Field& f = field_of_order(2);
  auto gd = growth_degree(parse_family("borel-gl:2"), f, regular_unipotent(f, 2, 1), {1, 2, 3, 4});
  ASSERT_EQ(gd.orders.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    const std::uint64_t q = 1ull << gd.degrees[i];
    EXPECT_EQ(gd.orders[i], (q - 1) * q);
  }
  ASSERT_TRUE(gd.degree);
  EXPECT_EQ(*gd.degree, 2);
  EXPECT_TRUE(gd.monotone);
}

TEST(Growth, IdentityAndTorusInGl2) {
  const Field& f = field_of_order(3);
  auto id = growth_degree(parse_family("gl:2"), f, Mat::identity(f, 2), {1, 2});
  ASSERT_TRUE(id.degree);
  EXPECT_EQ(*id.degree, 4);
  EXPECT_EQ(id.orders, (std::vector<std::uint64_t>{48, 5760}));
  auto t = growth_degree(parse_family("gl:2"), f, diag(f, {1, 2}), {1, 2, 3});
  ASSERT_TRUE(t.degree);
  EXPECT_EQ(*t.degree, 2);
  EXPECT_EQ(t.orders, (std::vector<std::uint64_t>{4, 64, 676}));
}

TEST(Growth, SkipsOversizedDegrees) {
  const Field& f = field_of_order(3);
  ScopedLimits lim(Limits{limits().max_field, 1000, false});
  auto gd = growth_degree(parse_family("gl:2"), f, Mat::identity(f, 2), {1, 2});
  EXPECT_EQ(gd.skipped, (std::vector<std::uint32_t>{2}));
  EXPECT_FALSE(gd.degree);
}

TEST(Stabilize, Gl2F3ClassRepsGiveThreeBlocks) {
  auto g = make("gl:2@3^1");
  std::vector<Mat> seeds;
  for (const auto& c : conjugacy_classes(*g)) seeds.push_back(g->element(c.rep));
  auto st = geometric_stabilize(parse_family("gl:2"), g->field(), seeds, 2);
  ASSERT_EQ(st.degrees, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(st.partitions[0].size(), 4u);
  ASSERT_TRUE(st.r_star);
  EXPECT_EQ(*st.r_star, 2u);
  EXPECT_EQ(st.stable.size(), 3u);
}

TEST(Stabilize, Sl2UnipotentsAtDegreeOne) {
  const Field& f = field_of_order(5);
  auto st = geometric_stabilize(parse_family("sl:2"), f, {regular_unipotent(f, 2, 1), regular_unipotent(f, 2, 2)}, 2);
  ASSERT_TRUE(st.r_star);
  EXPECT_EQ(*st.r_star, 1u);
  EXPECT_EQ(st.stable.size(), 1u);
}

TEST(Stabilize, AbelianFamily) {
  const Field& f = field_of_order(3);
  auto g = make("unipotent:2@3^1");
  auto st = geometric_stabilize(parse_family("unipotent:2"), f, table_elements(*g), 2);
  ASSERT_TRUE(st.r_star);
  EXPECT_EQ(*st.r_star, 1u);
  EXPECT_EQ(st.stable.size(), 1u);
}

TEST(Stabilize, BorelDoesNotSettleEarly) {
  const Field& f = field_of_order(2);
  auto st = geometric_stabilize(parse_family("borel-gl:2"), f, {Mat::identity(f, 2), regular_unipotent(f, 2, 1)}, 4);
  ASSERT_EQ(st.partitions.size(), 4u);
  EXPECT_EQ(st.partitions[0].size(), 1u);
  EXPECT_EQ(st.partitions[1].size(), 2u);
  ASSERT_TRUE(st.r_star);
  EXPECT_EQ(*st.r_star, 2u);
}
