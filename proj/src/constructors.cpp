#include "zk/error.hpp"
#include "zk/mat.hpp"

namespace zk {

Mat regular_unipotent(const Field& f, int n, Elem beta) {
  if (n < 2) throw DomainError("regular_unipotent needs n >= 2");
  if (beta == 0 || beta >= f.q()) throw DomainError("u_beta needs a nonzero beta in F_" + f.name());
  Mat u = Mat::identity(f, n);
  u(0, 1) = beta;
  for (int i = 1; i + 1 < n; ++i) u(i, i + 1) = 1;
  return u;
}

Mat heisenberg_element(const Field& f, Elem t) {
  if (t == 0 || t >= f.q()) throw DomainError("h(t) needs a nonzero t in F_" + f.name());
  Mat h = Mat::identity(f, 3);
  h(0, 1) = t;
  h(1, 2) = 1;
  return h;
}

Mat weil_embed(const Field& big, std::uint32_t base_degree, Elem x) {
  if (base_degree == 0 || big.m() % base_degree != 0)
    throw DomainError("weil_embed: degree " + std::to_string(base_degree) + " does not divide " + std::to_string(big.m()));
  if (x == 0 || x >= big.q()) throw DomainError("weil_embed needs a nonzero element");
  const Field& base = make_field(big.p(), base_degree);
  const Field& fp = make_field(big.p(), 1);
  const int r = static_cast<int>(base_degree);
  const int n = static_cast<int>(big.m() / base_degree);
  const int m = static_cast<int>(big.m());
  const Elem theta = big.m() == 1 ? 0 : big.p();

  std::vector<Elem> theta_pow(n);
  theta_pow[0] = 1;
  for (int j = 1; j < n; ++j) theta_pow[j] = big.mul(theta_pow[j - 1], theta);

  // F_p-basis of big: embed(t_base^k) * theta^j, column index j*r + k.
  std::vector<Elem> basis_mat(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < r; ++k) {
      std::vector<std::uint32_t> c(r, 0);
      c[k] = 1;
      Elem b = big.mul(embed(base, big, base.from_coeffs(c)), theta_pow[j]);
      auto d = big.coeffs(b);
      for (int i = 0; i < m; ++i) basis_mat[i * m + j * r + k] = d[i];
    }
  Mat to_basis = inverse(Mat(fp, m, std::move(basis_mat)));

  Mat out(base, n);
  for (int j = 0; j < n; ++j) {
    auto d = big.coeffs(big.mul(x, theta_pow[j]));
    for (int jj = 0; jj < n; ++jj) {
      std::vector<std::uint32_t> c(r, 0);
      for (int k = 0; k < r; ++k) {
        std::uint64_t acc = 0;
        for (int i = 0; i < m; ++i) acc += std::uint64_t{to_basis(jj * r + k, i)} * d[i];
        c[k] = static_cast<std::uint32_t>(acc % big.p());
      }
      out(jj, j) = base.from_coeffs(c);
    }
  }
  return out;
}

}  // namespace zk
