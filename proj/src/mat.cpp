#include "zk/mat.hpp"

#include <algorithm>

#include "zk/error.hpp"

namespace zk {

Mat::Mat(const Field& f, int n, std::vector<Elem> entries) : f_(&f), n_(n), a_(std::move(entries)) {
  if (n <= 0) throw DomainError("matrix size must be positive");
  if (a_.size() != static_cast<std::size_t>(n) * n)
    throw DomainError("matrix needs " + std::to_string(n * n) + " entries, got " + std::to_string(a_.size()));
  for (Elem x : a_)
    if (x >= f.q()) throw DomainError("matrix entry " + std::to_string(x) + " outside F_" + f.name());
}

Mat Mat::scalar(const Field& f, int n, Elem c) {
  Mat m(f, n);
  for (int i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

Mat Mat::diagonal(const Field& f, const std::vector<Elem>& d) {
  Mat m(f, static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

bool Mat::is_identity() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if ((*this)(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

bool Mat::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](Elem x) { return x == 0; });
}

std::string Mat::to_string() const {
  std::string s = "[";
  for (int i = 0; i < n_; ++i) {
    if (i) s += ";";
    for (int j = 0; j < n_; ++j) {
      if (j) s += ",";
      s += f_->to_string((*this)(i, j));
    }
  }
  return s + "]";
}

void mat_mul_into(const Field& f, int n, const Elem* a, const Elem* b, Elem* out) {
  if (f.is_prime()) {
    const std::uint64_t p = f.p();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::uint64_t acc = 0;
        for (int k = 0; k < n; ++k) acc += std::uint64_t{a[i * n + k]} * b[k * n + j];
        out[i * n + j] = static_cast<Elem>(acc % p);
      }
    return;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Elem acc = 0;
      for (int k = 0; k < n; ++k) acc = f.add(acc, f.mul(a[i * n + k], b[k * n + j]));
      out[i * n + j] = acc;
    }
}

bool mat_commute(const Field& f, int n, const Elem* a, const Elem* b, Elem* scratch) {
  const int nn = n * n;
  mat_mul_into(f, n, a, b, scratch);
  mat_mul_into(f, n, b, a, scratch + nn);
  return std::equal(scratch, scratch + nn, scratch + nn);
}

namespace {

void check_same(const Mat& x, const Mat& y, const char* what) {
  if (x.empty() || y.empty() || &x.field() != &y.field() || x.n() != y.n())
    throw DomainError(std::string(what) + ": incompatible matrices");
}

}  // namespace

Mat operator*(const Mat& x, const Mat& y) {
  check_same(x, y, "multiply");
  Mat r(x.field(), x.n());
  mat_mul_into(x.field(), x.n(), x.entries().data(), y.entries().data(), r.entries().data());
  return r;
}

Mat operator+(const Mat& x, const Mat& y) {
  check_same(x, y, "add");
  Mat r(x.field(), x.n());
  for (std::size_t i = 0; i < r.entries().size(); ++i) r.entries()[i] = x.field().add(x.entries()[i], y.entries()[i]);
  return r;
}

Mat operator-(const Mat& x, const Mat& y) {
  check_same(x, y, "subtract");
  Mat r(x.field(), x.n());
  for (std::size_t i = 0; i < r.entries().size(); ++i) r.entries()[i] = x.field().sub(x.entries()[i], y.entries()[i]);
  return r;
}

Mat scale(const Mat& x, Elem c) {
  Mat r = x;
  for (auto& e : r.entries()) e = x.field().mul(e, c);
  return r;
}

Mat pow(const Mat& x, std::uint64_t e) {
  Mat r = Mat::identity(x.field(), x.n());
  Mat b = x;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Mat embed(const Mat& x, const Field& dst) {
  Mat r(dst, x.n());
  for (std::size_t i = 0; i < r.entries().size(); ++i) r.entries()[i] = embed(x.field(), dst, x.entries()[i]);
  return r;
}

Mat frobenius(const Mat& x, std::uint32_t r) {
  Mat y = x;
  for (auto& e : y.entries()) e = frobenius(x.field(), r, e);
  return y;
}

std::optional<Mat> restrict_to(const Mat& x, const Field& small) {
  Mat r(small, x.n());
  for (std::size_t i = 0; i < r.entries().size(); ++i) {
    auto v = restrict_to(x.field(), small, x.entries()[i]);
    if (!v) return std::nullopt;
    r.entries()[i] = *v;
  }
  return r;
}

Mat parse_mat(const Field& f, const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != ' ' && c != '\t') t += c;
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw UsageError("matrix literal must look like [a,b;c,d]: " + s);
  t = t.substr(1, t.size() - 2);
  std::vector<std::vector<Elem>> rows(1);
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) throw UsageError("empty matrix entry in " + s);
    try {
      rows.back().push_back(f.parse(tok));
    } catch (const Error& e) {
      throw UsageError("bad matrix entry '" + tok + "': " + e.what());
    }
    tok.clear();
  };
  for (char c : t) {
    if (c == ',') {
      flush();
    } else if (c == ';') {
      flush();
      rows.emplace_back();
    } else {
      tok += c;
    }
  }
  flush();
  const int n = static_cast<int>(rows.size());
  std::vector<Elem> e;
  for (auto& r : rows) {
    if (static_cast<int>(r.size()) != n) throw UsageError("matrix literal is not square: " + s);
    e.insert(e.end(), r.begin(), r.end());
  }
  return Mat(f, n, std::move(e));
}

namespace linalg {

std::vector<int> rref(const Field& f, std::vector<Elem>& m, int rows, int cols) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[static_cast<std::size_t>(i) * cols + c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j)
        std::swap(m[static_cast<std::size_t>(piv) * cols + j], m[static_cast<std::size_t>(r) * cols + j]);
    Elem* row = &m[static_cast<std::size_t>(r) * cols];
    Elem il = f.inv(row[c]);
    for (int j = c; j < cols; ++j) row[j] = f.mul(row[j], il);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      Elem* oi = &m[static_cast<std::size_t>(i) * cols];
      Elem k = oi[c];
      if (k == 0) continue;
      for (int j = c; j < cols; ++j) oi[j] = f.sub(oi[j], f.mul(k, row[j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<std::vector<Elem>> nullspace(const Field& f, std::vector<Elem> m, int rows, int cols) {
  auto piv = rref(f, m, rows, cols);
  std::vector<int> pivot_row(cols, -1);
  for (std::size_t i = 0; i < piv.size(); ++i) pivot_row[piv[i]] = static_cast<int>(i);
  std::vector<std::vector<Elem>> basis;
  for (int free = 0; free < cols; ++free) {
    if (pivot_row[free] >= 0) continue;
    std::vector<Elem> v(cols, 0);
    v[free] = 1;
    for (int c = 0; c < cols; ++c) {
      if (pivot_row[c] < 0) continue;
      v[c] = f.neg(m[static_cast<std::size_t>(pivot_row[c]) * cols + free]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace linalg

DetInv det_inv(const Mat& a) {
  const Field& f = a.field();
  const int n = a.n();
  // Gauss-Jordan on [A | I].
  const int cols = 2 * n;
  std::vector<Elem> m(static_cast<std::size_t>(n) * cols, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i * cols + j] = a(i, j);
    m[i * cols + n + i] = 1;
  }
  Elem d = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (m[i * cols + c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return {0, std::nullopt};
    if (piv != c) {
      for (int j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[c * cols + j]);
      d = f.neg(d);
    }
    Elem pv = m[c * cols + c];
    d = f.mul(d, pv);
    Elem il = f.inv(pv);
    for (int j = 0; j < cols; ++j) m[c * cols + j] = f.mul(m[c * cols + j], il);
    for (int i = 0; i < n; ++i) {
      if (i == c) continue;
      Elem k = m[i * cols + c];
      if (k == 0) continue;
      for (int j = 0; j < cols; ++j) m[i * cols + j] = f.sub(m[i * cols + j], f.mul(k, m[c * cols + j]));
    }
  }
  Mat inv(f, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = m[i * cols + n + j];
  return {d, std::move(inv)};
}

Elem det(const Mat& a) {
  const Field& f = a.field();
  const int n = a.n();
  if (n == 1) return a(0, 0);
  if (n == 2) return f.sub(f.mul(a(0, 0), a(1, 1)), f.mul(a(0, 1), a(1, 0)));
  if (n == 3) {
    Elem t1 = f.mul(a(0, 0), f.sub(f.mul(a(1, 1), a(2, 2)), f.mul(a(1, 2), a(2, 1))));
    Elem t2 = f.mul(a(0, 1), f.sub(f.mul(a(1, 0), a(2, 2)), f.mul(a(1, 2), a(2, 0))));
    Elem t3 = f.mul(a(0, 2), f.sub(f.mul(a(1, 0), a(2, 1)), f.mul(a(1, 1), a(2, 0))));
    return f.add(f.sub(t1, t2), t3);
  }
  return det_inv(a).det;
}

Mat inverse(const Mat& a) {
  auto r = det_inv(a);
  if (!r.inverse) throw DomainError("matrix is singular: " + a.to_string());
  return std::move(*r.inverse);
}

int rank(const Mat& a) {
  std::vector<Elem> m(a.entries().begin(), a.entries().end());
  return static_cast<int>(linalg::rref(a.field(), m, a.n(), a.n()).size());
}

}  // namespace zk
