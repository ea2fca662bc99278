#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

#include "zk/error.hpp"
#include "zk/mat.hpp"

namespace zk {

namespace {

constexpr std::uint64_t kSeed = 0x7a6b2d6b6974ULL;

using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
  while (b) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Mat pow128(const Mat& x, u128 e) {
  Mat r = Mat::identity(x.field(), x.n());
  Mat b = x;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

}  // namespace

Poly charpoly(const Mat& a) {
  const Field& f = a.field();
  const int n = a.n();
  if (n == 1) return {f.neg(a(0, 0)), 1};
  if (n == 2) return {det(a), f.neg(f.add(a(0, 0), a(1, 1))), 1};
  // Similarity to upper Hessenberg form, then the standard recurrence.
  Mat h = a;
  for (int j = 0; j + 2 < n; ++j) {
    int piv = -1;
    for (int i = j + 1; i < n; ++i)
      if (h(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != j + 1) {
      for (int c = 0; c < n; ++c) std::swap(h(piv, c), h(j + 1, c));
      for (int r = 0; r < n; ++r) std::swap(h(r, piv), h(r, j + 1));
    }
    Elem il = f.inv(h(j + 1, j));
    for (int k = j + 2; k < n; ++k) {
      Elem u = f.mul(h(k, j), il);
      if (u == 0) continue;
      for (int c = 0; c < n; ++c) h(k, c) = f.sub(h(k, c), f.mul(u, h(j + 1, c)));
      for (int r = 0; r < n; ++r) h(r, j + 1) = f.add(h(r, j + 1), f.mul(u, h(r, k)));
    }
  }
  std::vector<Poly> p(n + 1);
  p[0] = {1};
  for (int m = 1; m <= n; ++m) {
    p[m] = poly::mul(f, poly::linear(f, h(m - 1, m - 1)), p[m - 1]);
    Elem prod = 1;
    for (int i = 1; i < m; ++i) {
      prod = f.mul(prod, h(m - i, m - i - 1));
      Elem c = f.mul(h(m - 1 - i, m - 1), prod);
      if (c != 0) p[m] = poly::sub(f, p[m], poly::scale(f, p[m - 1 - i], c));
    }
  }
  return p[n];
}

Mat eval(const Poly& p, const Mat& a) {
  Mat acc(a.field(), a.n());
  for (std::size_t i = p.size(); i-- > 0;) {
    acc = acc * a;
    for (int d = 0; d < a.n(); ++d) acc(d, d) = a.field().add(acc(d, d), p[i]);
  }
  return acc;
}

Poly minpoly(const Mat& a) {
  const Field& f = a.field();
  const int n = a.n();
  Poly result{1};
  // lcm of the local minimal polynomials of the standard basis vectors.
  for (int e = 0; e < n; ++e) {
    std::vector<std::vector<Elem>> krylov;
    std::vector<Elem> v(n, 0);
    v[e] = 1;
    for (int k = 0; k <= n; ++k) {
      krylov.push_back(v);
      const int cols = k + 1;
      std::vector<Elem> m(static_cast<std::size_t>(n) * cols);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < cols; ++c) m[r * cols + c] = krylov[c][r];
      auto ns = linalg::nullspace(f, m, n, cols);
      if (!ns.empty()) {
        Poly local(ns[0].begin(), ns[0].end());
        result = poly::lcm(f, result, poly::monic(f, local));
        break;
      }
      std::vector<Elem> w(n, 0);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) w[r] = f.add(w[r], f.mul(a(r, c), v[c]));
      v = std::move(w);
    }
  }
  return result;
}

Mat companion(const Field& f, const Poly& p) {
  const int k = poly::degree(p);
  if (k < 1 || p.back() != 1) throw DomainError("companion needs a monic polynomial of degree >= 1");
  Mat c(f, k);
  for (int i = 0; i + 1 < k; ++i) c(i + 1, i) = 1;
  for (int i = 0; i < k; ++i) c(i, k - 1) = f.neg(p[i]);
  return c;
}

std::vector<Poly> invariant_factors(const Mat& a) {
  const Field& f = a.field();
  const int n = a.n();
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m[i][j] = {f.neg(a(i, j))};
      if (i == j) m[i][j].push_back(1);
      poly::trim(m[i][j]);
    }
  std::vector<Poly> diag;
  for (int t = 0; t < n; ++t) {
    for (;;) {
      int bi = -1, bj = -1, bd = 1 << 30;
      for (int i = t; i < n; ++i)
        for (int j = t; j < n; ++j)
          if (!m[i][j].empty() && poly::degree(m[i][j]) < bd) {
            bd = poly::degree(m[i][j]);
            bi = i;
            bj = j;
          }
      if (bi < 0) break;
      std::swap(m[t], m[bi]);
      for (int i = 0; i < n; ++i) std::swap(m[i][t], m[i][bj]);
      bool clean = true;
      for (int i = t + 1; i < n; ++i) {
        if (m[i][t].empty()) continue;
        Poly qt = poly::divmod(f, m[i][t], m[t][t]).first;
        for (int j = t; j < n; ++j) m[i][j] = poly::sub(f, m[i][j], poly::mul(f, qt, m[t][j]));
        if (!m[i][t].empty()) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        if (m[t][j].empty()) continue;
        Poly qt = poly::divmod(f, m[t][j], m[t][t]).first;
        for (int i = t; i < n; ++i) m[i][j] = poly::sub(f, m[i][j], poly::mul(f, qt, m[i][t]));
        if (!m[t][j].empty()) clean = false;
      }
      if (!clean) continue;
      int bad = -1;
      for (int i = t + 1; i < n && bad < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (!poly::mod(f, m[i][j], m[t][t]).empty()) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      for (int j = t; j < n; ++j) m[t][j] = poly::add(f, m[t][j], m[bad][j]);
    }
    diag.push_back(poly::monic(f, m[t][t]));
  }
  std::vector<Poly> out;
  for (auto& d : diag)
    if (poly::degree(d) >= 1) out.push_back(d);
  return out;
}

TransporterSpace transporter_space(const Mat& a, const Mat& b) {
  const Field& f = a.field();
  const int n = a.n();
  const int nn = n * n;
  std::vector<Elem> m(static_cast<std::size_t>(nn) * nn, 0);
  // Row (i,j) of X B - A X = 0.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Elem* row = &m[static_cast<std::size_t>(i * n + j) * nn];
      for (int k = 0; k < n; ++k) {
        row[i * n + k] = f.add(row[i * n + k], b(k, j));
        row[k * n + j] = f.sub(row[k * n + j], a(i, k));
      }
    }
  TransporterSpace ts;
  for (auto& v : linalg::nullspace(f, std::move(m), nn, nn)) ts.basis.emplace_back(f, n, std::move(v));
  ts.dim = static_cast<int>(ts.basis.size());
  return ts;
}

namespace {

Mat combination(const Field& f, int n, const std::vector<Mat>& basis, const std::vector<Elem>& coef) {
  Mat x(f, n);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    if (coef[b] == 0) continue;
    auto be = basis[b].entries();
    auto xe = x.entries();
    for (std::size_t i = 0; i < xe.size(); ++i) xe[i] = f.add(xe[i], f.mul(coef[b], be[i]));
  }
  return x;
}

bool next_coef(std::vector<Elem>& c, std::uint32_t q) {
  for (auto& x : c) {
    if (++x < q) return true;
    x = 0;
  }
  return false;
}

}  // namespace

std::optional<Mat> find_invertible(const Field& f, int n, const std::vector<Mat>& basis) {
  if (basis.empty()) return std::nullopt;
  const std::size_t d = basis.size();
  auto total = checked_pow(f.q(), static_cast<std::uint32_t>(d), std::uint64_t{1} << 16);
  if (total) {
    std::optional<Mat> best;
    std::vector<Elem> c(d, 0);
    do {
      Mat x = combination(f, n, basis, c);
      if ((!best || x < *best) && det(x) != 0) best = std::move(x);
    } while (next_coef(c, f.q()));
    return best;
  }
  std::mt19937_64 rng(kSeed);
  std::vector<Elem> c(d);
  for (int attempt = 0; attempt < 4096; ++attempt) {
    for (auto& x : c) x = static_cast<Elem>(rng() % f.q());
    Mat x = combination(f, n, basis, c);
    if (det(x) != 0) return x;
  }
  if (checked_pow(f.q(), static_cast<std::uint32_t>(d), std::uint64_t{1} << 24)) {
    std::fill(c.begin(), c.end(), 0);
    do {
      Mat x = combination(f, n, basis, c);
      if (det(x) != 0) return x;
    } while (next_coef(c, f.q()));
    return std::nullopt;
  }
  throw std::logic_error("find_invertible: random search failed on a large space");
}

Rcf rcf(const Mat& a) {
  const Field& f = a.field();
  Rcf out;
  out.invariant_factors = invariant_factors(a);
  out.form = Mat(f, a.n());
  int off = 0;
  for (auto& d : out.invariant_factors) {
    Mat c = companion(f, d);
    for (int i = 0; i < c.n(); ++i)
      for (int j = 0; j < c.n(); ++j) out.form(off + i, off + j) = c(i, j);
    off += c.n();
  }
  auto x = find_invertible(f, a.n(), transporter_space(out.form, a).basis);
  if (!x) throw std::logic_error("rcf: no invertible transform into the rational canonical form");
  out.transform = std::move(*x);
  return out;
}

std::optional<Mat> gl_conjugate_test(const Mat& a, const Mat& b) {
  if (a.n() != b.n() || &a.field() != &b.field()) throw DomainError("gl_conjugate_test: incompatible matrices");
  if (a == b) return Mat::identity(a.field(), a.n());
  if (invariant_factors(a) != invariant_factors(b)) return std::nullopt;
  auto x = find_invertible(a.field(), a.n(), transporter_space(a, b).basis);
  if (!x) throw std::logic_error("gl_conjugate_test: equal invariants but no invertible transporter");
  return x;
}

UnitDeterminants centralizer_unit_determinants(const Mat& b) {
  const Field& f = b.field();
  const int n = b.n();
  const std::uint64_t order = f.q() - 1;
  UnitDeterminants out;
  out.index = order;
  auto take = [&](const Mat& u) {
    Elem d = det(u);
    if (d == 0) return;
    std::uint64_t l = f.log(d);
    std::uint64_t g = std::gcd(out.index, l);
    if (g == out.index) return;
    out.index = g;
    out.units.push_back(u);
    out.logs.push_back(l);
  };
  if (order == 1) {
    out.index = 1;
    return out;
  }
  take(Mat::scalar(f, n, f.generator()));
  auto basis = transporter_space(b, b).basis;
  const std::size_t d = basis.size();
  if (checked_pow(f.q(), static_cast<std::uint32_t>(d), 4096)) {
    std::vector<Elem> c(d, 0);
    do {
      take(combination(f, n, basis, c));
    } while (out.index > 1 && next_coef(c, f.q()));
  } else {
    std::mt19937_64 rng(kSeed);
    std::vector<Elem> c(d);
    int found = 0;
    for (int attempt = 0; attempt < 4096 && found < 64 && out.index > 1; ++attempt) {
      for (auto& x : c) x = static_cast<Elem>(rng() % f.q());
      Mat u = combination(f, n, basis, c);
      if (det(u) == 0) continue;
      ++found;
      take(u);
    }
  }
  return out;
}

std::optional<Mat> sl_conjugate_test(const Mat& a, const Mat& b) {
  const Field& f = a.field();
  if (det(a) != 1 || det(b) != 1) throw DomainError("sl_conjugate_test: inputs must have determinant 1");
  auto x0 = gl_conjugate_test(a, b);
  if (!x0) return std::nullopt;
  Elem t = det(*x0);
  if (t == 1) return x0;
  const std::int64_t order = f.q() - 1;
  // Need z in C(B)^* with det z = t^{-1}.
  std::int64_t target = (order - f.log(t)) % order;
  auto ud = centralizer_unit_determinants(b);
  if (target % static_cast<std::int64_t>(ud.index) != 0) return std::nullopt;
  // Coefficients k_i with sum k_i * log_i == index (mod order), built by
  // extended gcd along the recorded units.
  std::vector<std::int64_t> combo;
  std::int64_t g = order;
  for (std::size_t i = 0; i < ud.logs.size(); ++i) {
    std::int64_t l = static_cast<std::int64_t>(ud.logs[i]);
    std::int64_t r0 = g, r1 = l, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
      std::int64_t qt = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - qt * r1);
      std::tie(s0, s1) = std::make_pair(s1, s0 - qt * s1);
      std::tie(t0, t1) = std::make_pair(t1, t0 - qt * t1);
    }
    for (auto& k : combo) k = (k * s0) % order;
    combo.push_back(t0 % order);
    g = r0;
  }
  std::int64_t mult = target / g;
  Mat z = Mat::identity(f, a.n());
  for (std::size_t i = 0; i < combo.size(); ++i) {
    std::int64_t k = ((combo[i] % order) * (mult % order)) % order;
    if (k < 0) k += order;
    z = z * pow(ud.units[i], static_cast<std::uint64_t>(k));
  }
  Mat x = *x0 * z;
  if (det(x) != 1 || x * b != a * x) throw std::logic_error("sl_conjugate_test: determinant correction failed");
  return x;
}

std::uint64_t mat_order(const Mat& g) {
  const Field& f = g.field();
  const int n = g.n();
  if (det(g) == 0) throw DomainError("order of a singular matrix");
  if (g.is_identity()) return 1;
  u128 m = 1;
  std::vector<std::uint64_t> primes{f.p()};
  for (int i = 1; i <= n; ++i) {
    auto qi = checked_pow(f.q(), static_cast<std::uint32_t>(i), ~std::uint64_t{0} >> 1);
    if (!qi) throw BoundExceeded("element order computation needs q^n < 2^63");
    std::uint64_t v = *qi - 1;
    m = m / gcd128(m, v) * v;
    for (auto l : prime_factors(v)) primes.push_back(l);
  }
  std::uint64_t pe = 1;
  while (pe < static_cast<std::uint64_t>(n)) pe *= f.p();
  m *= pe;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  if (!pow128(g, m).is_identity()) throw std::logic_error("mat_order: exponent bound failed");
  for (auto l : primes)
    while (m % l == 0 && pow128(g, m / l).is_identity()) m /= l;
  return static_cast<std::uint64_t>(m);
}

JordanPair jordan_decomposition(const Mat& g) {
  const std::uint64_t ord = mat_order(g);
  const std::uint64_t p = g.field().p();
  std::uint64_t pa = 1, t = ord;
  while (t % p == 0) {
    t /= p;
    pa *= p;
  }
  std::uint64_t e = 0;
  if (t > 1) {
    // e == 0 mod p^a, e == 1 mod t.
    std::int64_t r0 = static_cast<std::int64_t>(t), r1 = static_cast<std::int64_t>(pa % t), s0 = 0, s1 = 1;
    while (r1 != 0) {
      std::int64_t qt = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - qt * r1);
      std::tie(s0, s1) = std::make_pair(s1, s0 - qt * s1);
    }
    std::uint64_t inv = static_cast<std::uint64_t>((s0 % static_cast<std::int64_t>(t) + static_cast<std::int64_t>(t)) %
                                                   static_cast<std::int64_t>(t));
    e = static_cast<std::uint64_t>(static_cast<u128>(pa) * inv % ord);
  }
  Mat s = pow(g, e);
  Mat u = g * inverse(s);
  return {std::move(s), std::move(u)};
}

bool is_semisimple(const Mat& g) { return poly::is_squarefree(g.field(), minpoly(g)); }

bool is_unipotent(const Mat& g) {
  Poly mp = minpoly(g);
  return mp == poly::pow(g.field(), poly::linear(g.field(), 1), static_cast<unsigned>(poly::degree(mp)));
}

bool is_regular(const Mat& g) { return poly::degree(minpoly(g)) == g.n(); }

bool is_regular_semisimple(const Mat& g) { return poly::is_squarefree(g.field(), charpoly(g)); }

}  // namespace zk
