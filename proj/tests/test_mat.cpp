#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zk/error.hpp"
#include "zk/mat.hpp"

using namespace zk;

namespace {

Poly char_by_eval_check(const Mat& a) {
  Poly cp = charpoly(a);
  const Field& f = a.field();
  for (Elem c = 0; c < f.q(); ++c) {
    Mat m = Mat::scalar(f, a.n(), c) - a;
    EXPECT_EQ(poly::eval(f, cp, c), oracle::det(m)) << a.to_string();
  }
  return cp;
}

}  // namespace

TEST(Mat, ParseAndPrint) {
  const Field& f = make_field(3, 1);
  Mat a = parse_mat(f, "[1,1;0,1]");
  EXPECT_EQ(a.to_string(), "[1,1;0,1]");
  EXPECT_EQ(a(0, 1), 1u);
  EXPECT_THROW(parse_mat(f, "[1,1;0]"), UsageError);
  EXPECT_THROW(parse_mat(f, "1,1;0,1"), UsageError);
  EXPECT_THROW(parse_mat(f, "[1,3;0,1]"), UsageError);
  EXPECT_EQ(parse_mat(make_field(3, 2), "[g^1,0;0,1]")(0, 0), make_field(3, 2).generator());
}

TEST(Mat, DeterminantInverseCharpoly) {
  for (auto [p, m, n] : std::vector<std::tuple<int, int, int>>{{2, 1, 3}, {3, 1, 2}, {2, 2, 2}}) {
    const Field& f = make_field(p, m);
    for (const auto& a : oracle::all_matrices(f, n, [](const Mat&) { return true; })) {
      Elem d = oracle::det(a);
      ASSERT_EQ(det(a), d);
      auto di = det_inv(a);
      ASSERT_EQ(di.det, d);
      ASSERT_EQ(di.inverse.has_value(), d != 0);
      if (d) EXPECT_TRUE(oracle::matmul(a, *di.inverse).is_identity());
      Poly cp = char_by_eval_check(a);
      EXPECT_TRUE(eval(cp, a).is_zero());
      Poly mp = minpoly(a);
      EXPECT_TRUE(eval(mp, a).is_zero());
      EXPECT_TRUE(poly::mod(f, cp, mp).empty());
      // no monic polynomial of smaller degree annihilates a
      const int dm = poly::degree(mp);
      for (int deg = 0; deg < dm; ++deg) {
        std::vector<Elem> c(deg, 0);
        for (;;) {
          Poly g(c.begin(), c.end());
          g.push_back(1);
          EXPECT_FALSE(eval(g, a).is_zero());
          int i = 0;
          while (i < deg && ++c[i] == f.q()) c[i++] = 0;
          if (i == deg) break;
        }
      }
    }
  }
}

TEST(Mat, CharpolyLargerSizes) {
  const Field& f = make_field(5, 1);
  Mat a(f, 4, {1, 2, 0, 4, 3, 0, 1, 1, 0, 4, 2, 2, 1, 1, 3, 0});
  char_by_eval_check(a);
  Mat b(f, 4, {0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0});
  char_by_eval_check(b);
  EXPECT_TRUE(eval(charpoly(b), b).is_zero());
}

TEST(Mat, RationalCanonicalForm) {
  const Field& f = make_field(3, 1);
  auto g = oracle::gl(f, 2);
  for (const auto& a : oracle::all_matrices(f, 2, [](const Mat&) { return true; })) {
    Rcf r = rcf(a);
    EXPECT_EQ(r.transform * a * inverse(r.transform), r.form);
    Poly prod{1};
    for (auto& d : r.invariant_factors) prod = poly::mul(f, prod, d);
    EXPECT_EQ(prod, charpoly(a));
    EXPECT_EQ(r.invariant_factors.back(), minpoly(a));
    for (const auto& x : {g[3], g[17]}) EXPECT_EQ(rcf(x * a * inverse(x)).form, r.form);
  }
  Mat s = Mat::scalar(f, 3, 2);
  EXPECT_EQ(invariant_factors(s).size(), 3u);
}

TEST(Mat, GlConjugacyAgreesWithBruteForce) {
  for (auto [p, m, n] : std::vector<std::tuple<int, int, int>>{{2, 1, 2}, {3, 1, 2}, {2, 1, 3}, {2, 2, 2}}) {
    const Field& f = make_field(p, m);
    auto g = oracle::gl(f, n);
    auto cls = oracle::classes(g);
    std::vector<int> cls_of(g.size());
    for (std::size_t c = 0; c < cls.size(); ++c)
      for (auto i : cls[c]) cls_of[i] = static_cast<int>(c);
    for (std::size_t c = 0; c < cls.size(); ++c) {
      const Mat& rep = g[cls[c].front()];
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto x = gl_conjugate_test(rep, g[i]);
        ASSERT_EQ(x.has_value(), cls_of[i] == static_cast<int>(c));
        if (x) EXPECT_EQ(*x * g[i] * inverse(*x), rep);
      }
    }
  }
}

TEST(Mat, SlConjugacyAgreesWithBruteForce) {
  for (auto [p, m] : std::vector<std::pair<int, int>>{{3, 1}, {2, 2}, {5, 1}}) {
    const Field& f = make_field(p, m);
    auto g = oracle::sl(f, 2);
    auto cls = oracle::classes(g);
    std::vector<int> cls_of(g.size());
    for (std::size_t c = 0; c < cls.size(); ++c)
      for (auto i : cls[c]) cls_of[i] = static_cast<int>(c);
    for (std::size_t c = 0; c < cls.size(); ++c) {
      const Mat& rep = g[cls[c].front()];
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto x = sl_conjugate_test(rep, g[i]);
        ASSERT_EQ(x.has_value(), cls_of[i] == static_cast<int>(c)) << f.name() << " " << rep.to_string() << " "
                                                                 << g[i].to_string();
        if (x) {
          EXPECT_EQ(det(*x), 1u);
          EXPECT_EQ(*x * g[i] * inverse(*x), rep);
        }
      }
    }
  }
}

TEST(Mat, SlConjugacyThreeByThreeUnipotents) {
  // u_1 and u_beta are SL_3(F_4)-conjugate iff beta is a cube.
  const Field& f = make_field(2, 2);
  Mat u1 = regular_unipotent(f, 3, 1);
  for (Elem b = 1; b < 4; ++b) EXPECT_EQ(sl_conjugate_test(u1, regular_unipotent(f, 3, b)).has_value(), b == 1);
  const Field& f7 = make_field(7, 1);
  for (Elem b = 1; b < 7; ++b) {
    bool cube = false;
    for (Elem c = 1; c < 7; ++c) cube = cube || f7.pow(c, 3) == b;
    EXPECT_EQ(sl_conjugate_test(regular_unipotent(f7, 3, 1), regular_unipotent(f7, 3, b)).has_value(), cube);
  }
}

TEST(Mat, TransporterSpaceIsSolutionSet) {
  const Field& f = make_field(3, 1);
  auto all = oracle::all_matrices(f, 2, [](const Mat&) { return true; });
  Mat a = parse_mat(f, "[1,1;0,1]");
  for (const auto& b : {parse_mat(f, "[1,0;1,1]"), parse_mat(f, "[2,0;0,1]"), a}) {
    auto ts = transporter_space(a, b);
    std::size_t count = 0;
    for (const auto& x : all) count += oracle::matmul(x, b) == oracle::matmul(a, x);
    std::size_t expect = 1;
    for (int i = 0; i < ts.dim; ++i) expect *= 3;
    EXPECT_EQ(count, expect);
    for (const auto& x : ts.basis) EXPECT_EQ(x * b, a * x);
  }
}

TEST(Mat, OrderAndJordan) {
  for (auto [p, m, n] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {2, 1, 3}, {3, 1, 2}}) {
    const Field& f = make_field(p, m);
    for (const auto& g : oracle::gl(f, n)) {
      ASSERT_EQ(mat_order(g), oracle::order(g));
      auto [s, u] = jordan_decomposition(g);
      EXPECT_EQ(s * u, g);
      EXPECT_EQ(s * u, u * s);
      EXPECT_TRUE(is_semisimple(s));
      EXPECT_TRUE(is_unipotent(u));
      EXPECT_EQ(is_semisimple(g), u.is_identity());
      EXPECT_EQ(is_unipotent(g), s.is_identity());
      EXPECT_EQ(oracle::order(s) % p != 0, true);
    }
  }
}

TEST(Mat, OrderOverLargeField) {
  const Field& f = make_field(2, 20);
  Mat g = Mat::diagonal(f, {f.generator(), 1});
  EXPECT_EQ(mat_order(g), (1u << 20) - 1);
  Mat u = regular_unipotent(f, 2, 1);
  EXPECT_EQ(mat_order(u), 2u);
  EXPECT_EQ(mat_order(g * u), (1u << 20) - 1);
  EXPECT_EQ(mat_order(scale(u, f.generator())), 2u * ((1u << 20) - 1));
}

TEST(Mat, Constructors) {
  const Field& f = make_field(5, 1);
  Mat u = regular_unipotent(f, 3, 2);
  EXPECT_EQ(u.to_string(), "[1,2,0;0,1,1;0,0,1]");
  EXPECT_TRUE(is_unipotent(u));
  EXPECT_TRUE(is_regular(u));
  EXPECT_THROW(regular_unipotent(f, 3, 0), DomainError);
  EXPECT_EQ(heisenberg_element(f, 3).to_string(), "[1,3,0;0,1,1;0,0,1]");
}

TEST(Mat, WeilEmbedIsNormCompatibleHomomorphism) {
  for (auto [p, m, r] : std::vector<std::tuple<int, int, int>>{{2, 4, 2}, {3, 3, 1}, {2, 6, 2}, {3, 2, 1}, {5, 2, 1}}) {
    const Field& big = make_field(p, m);
    const Field& base = make_field(p, r);
    for (Elem x = 1; x < big.q(); x += (big.q() > 64 ? 7 : 1)) {
      Mat w = weil_embed(big, r, x);
      EXPECT_EQ(&w.field(), &base);
      EXPECT_EQ(embed(base, big, det(w)), norm(big, r, x));
      Elem y = big.generator();
      EXPECT_EQ(weil_embed(big, r, big.mul(x, y)), w * weil_embed(big, r, y));
      EXPECT_EQ(mat_order(w), mult_order(big, x));
    }
    EXPECT_TRUE(weil_embed(big, r, 1).is_identity());
  }
}
