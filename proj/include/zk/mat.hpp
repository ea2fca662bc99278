#pragma once

// Square matrices over a Field, canonical forms, conjugacy tests and the
// explicit element constructors (regular unipotents u_beta, Heisenberg h(t),
// the regular representation of an extension field).

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zk/ff.hpp"
#include "zk/poly.hpp"

namespace zk {

class Mat {
 public:
  Mat() = default;
  Mat(const Field& f, int n) : f_(&f), n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}
  /// Row-major entries; size must be n*n.
  Mat(const Field& f, int n, std::vector<Elem> entries);

  static Mat identity(const Field& f, int n) { return scalar(f, n, 1); }
  static Mat scalar(const Field& f, int n, Elem c);
  static Mat diagonal(const Field& f, const std::vector<Elem>& d);

  const Field& field() const { return *f_; }
  int n() const { return n_; }
  bool empty() const { return f_ == nullptr; }

  Elem operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  Elem& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  std::span<const Elem> entries() const { return a_; }
  std::span<Elem> entries() { return a_; }

  bool is_identity() const;
  bool is_zero() const;

  /// "[a,b;c,d]" with canonical element strings.
  std::string to_string() const;

  friend bool operator==(const Mat& x, const Mat& y) { return x.n_ == y.n_ && x.a_ == y.a_; }
  /// Canonical encoding order: row-major entries, numerically.
  friend std::strong_ordering operator<=>(const Mat& x, const Mat& y) {
    if (auto c = x.n_ <=> y.n_; c != 0) return c;
    return x.a_ <=> y.a_;
  }

 private:
  const Field* f_ = nullptr;
  int n_ = 0;
  std::vector<Elem> a_;
};

// Raw kernels on row-major n*n arrays; used by the group tables.
void mat_mul_into(const Field& f, int n, const Elem* a, const Elem* b, Elem* out);
bool mat_commute(const Field& f, int n, const Elem* a, const Elem* b, Elem* scratch);

Mat operator*(const Mat& x, const Mat& y);
Mat operator+(const Mat& x, const Mat& y);
Mat operator-(const Mat& x, const Mat& y);
Mat scale(const Mat& x, Elem c);
/// x^e for e >= 0.
Mat pow(const Mat& x, std::uint64_t e);

/// Entry-wise field embedding into a larger field.
Mat embed(const Mat& x, const Field& dst);
/// Entry-wise x -> x^(p^r).
Mat frobenius(const Mat& x, std::uint32_t r);
/// Entry-wise restriction to a subfield; nullopt if some entry lies outside.
std::optional<Mat> restrict_to(const Mat& x, const Field& small);

/// Parses "[a,b;c,d]".
Mat parse_mat(const Field& f, const std::string& s);

struct DetInv {
  Elem det = 0;
  std::optional<Mat> inverse;
};

DetInv det_inv(const Mat& a);
Elem det(const Mat& a);
/// Throws DomainError when singular.
Mat inverse(const Mat& a);
int rank(const Mat& a);

// ---- linear algebra over F_q on rectangular row-major arrays ----
namespace linalg {

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<int> rref(const Field& f, std::vector<Elem>& m, int rows, int cols);
/// Basis of {v : M v = 0}, one vector per free column, in column order.
std::vector<std::vector<Elem>> nullspace(const Field& f, std::vector<Elem> m, int rows, int cols);

}  // namespace linalg

// ---- polynomial invariants ----
Poly charpoly(const Mat& a);
Poly minpoly(const Mat& a);
Mat eval(const Poly& p, const Mat& a);
Mat companion(const Field& f, const Poly& monic_poly);
/// Non-unit invariant factors d_1 | d_2 | ... (Smith form of xI - A).
std::vector<Poly> invariant_factors(const Mat& a);

struct Rcf {
  Mat form;       // block-diagonal companion matrices of the invariant factors
  Mat transform;  // transform * A * transform^{-1} == form
  std::vector<Poly> invariant_factors;
};

Rcf rcf(const Mat& a);

/// {X : X B = A X}; for A == B this is the centralizer algebra of A.
struct TransporterSpace {
  std::vector<Mat> basis;
  int dim = 0;
};

TransporterSpace transporter_space(const Mat& a, const Mat& b);

/// Some invertible element of the span of `basis`, deterministic. When the
/// span is small (q^dim <= 65536) it is the least one in encoding order.
std::optional<Mat> find_invertible(const Field& f, int n, const std::vector<Mat>& basis);

/// X invertible with X B X^{-1} == A, or nullopt when A, B are not
/// GL-conjugate.
std::optional<Mat> gl_conjugate_test(const Mat& a, const Mat& b);

/// Subgroup {det u : u a unit of the centralizer algebra of b} of F_q^*,
/// described by the least exponent g | q-1 with D = <gen^g>, together with
/// units realizing a generating set.
struct UnitDeterminants {
  std::uint64_t index = 1;  // g; D has order (q-1)/g
  std::vector<Mat> units;
  std::vector<std::uint64_t> logs;
};

UnitDeterminants centralizer_unit_determinants(const Mat& b);

/// X with det X == 1 and X B X^{-1} == A. Both inputs must have det 1.
std::optional<Mat> sl_conjugate_test(const Mat& a, const Mat& b);

struct JordanPair {
  Mat semisimple;
  Mat unipotent;
};

JordanPair jordan_decomposition(const Mat& g);
bool is_semisimple(const Mat& g);
bool is_unipotent(const Mat& g);
bool is_regular(const Mat& g);
bool is_regular_semisimple(const Mat& g);

/// Multiplicative order of an invertible matrix.
std::uint64_t mat_order(const Mat& g);

/// 1 on the diagonal, first super-diagonal (beta, 1, ..., 1).
Mat regular_unipotent(const Field& f, int n, Elem beta);
/// [[1,t,0],[0,1,1],[0,0,1]]
Mat heisenberg_element(const Field& f, Elem t);
/// Matrix over F_{p^r} of multiplication by x on the big field, in the
/// power basis 1, theta, ..., theta^{n-1} of the big field's modulus root.
Mat weil_embed(const Field& big, std::uint32_t base_degree, Elem x);

}  // namespace zk
