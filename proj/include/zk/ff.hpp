#pragma once

// Finite fields F_{p^m}, small enough (q <= 2^20 by default) that every
// element fits a table index. Elements are canonical integers
//   v = c_0 + c_1 p + ... + c_{m-1} p^{m-1}
// encoding the residue c_0 + c_1 t + ... + c_{m-1} t^{m-1} modulo the field's
// modulus. Numeric order on v is the canonical element order (coefficients
// compared from t^{m-1} down).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zk {

using Elem = std::uint32_t;

class Field {
 public:
  std::uint32_t p() const { return p_; }
  std::uint32_t m() const { return m_; }
  std::uint32_t q() const { return q_; }
  bool is_prime() const { return m_ == 1; }

  /// Monic modulus over F_p, coefficients constant term first (size m+1).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  /// "p^m", the name used in group strings and reports.
  std::string name() const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (m_ == 1) return static_cast<Elem>((std::uint64_t{a} * b) % p_);
    return exp_[log_[a] + log_[b]];
  }
  /// Throws DomainError on zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  /// Discrete log to the base mult_generator(); a must be nonzero.
  std::uint32_t log(Elem a) const { return log_[a]; }
  /// mult_generator()^k, k taken modulo q-1.
  Elem exp(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }

  /// Least element (canonical order) of multiplicative order q-1.
  Elem generator() const { return generator_; }
  /// Primitive element compatible with the subfield tower; used by embed().
  Elem compat_generator() const { return compat_; }
  std::uint32_t compat_log() const { return compat_log_; }
  std::uint32_t compat_log_inv() const { return compat_log_inv_; }

  /// Image of an integer in the prime subfield.
  Elem from_int(long long v) const;
  std::vector<std::uint32_t> coeffs(Elem a) const;
  Elem from_coeffs(const std::vector<std::uint32_t>& c) const;

  std::string to_string(Elem a) const { return std::to_string(a); }
  /// Accepts a canonical decimal encoding ("0".."q-1") or "g^k".
  Elem parse(const std::string& s) const;

  Field(std::uint32_t p, std::uint32_t m);
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

 private:
  Elem add_digits(Elem a, Elem b) const;
  void choose_compat_generator();

  std::uint32_t p_, m_, q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<Elem> exp_;            // size 2(q-1), so exp_[la+lb] needs no reduction
  std::vector<std::uint32_t> log_;   // log_[0] unused
  std::vector<std::uint32_t> zech_;  // log(1 + g^k), or q-1 when 1 + g^k == 0
  Elem neg_one_log_ = 0;
  Elem generator_ = 1;
  Elem compat_ = 1;
  std::uint32_t compat_log_ = 0, compat_log_inv_ = 0;
};

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
/// p^m, or nullopt when it exceeds `cap`.
std::optional<std::uint64_t> checked_pow(std::uint64_t p, std::uint32_t m, std::uint64_t cap);

/// Interned field F_{p^m}; the reference stays valid for the process
/// lifetime. Throws UsageError for non-prime p or m == 0 and BoundExceeded
/// when p^m exceeds limits().max_field.
const Field& make_field(std::uint32_t p, std::uint32_t m);

/// Field with q elements, q a prime power.
const Field& field_of_order(std::uint64_t q);

/// Parses "p^m" or a plain prime power.
const Field& parse_field(const std::string& s);

/// Fixed injective homomorphism F_{p^a} -> F_{p^b} (a | b). Compatible along
/// towers.
Elem embed(const Field& src, const Field& dst, Elem x);

/// Inverse of embed on its image; nullopt when x is not in the subfield.
std::optional<Elem> restrict_to(const Field& big, const Field& small, Elem x);

/// x^(p^r); r must divide m.
Elem frobenius(const Field& f, std::uint32_t r, Elem x);

/// Product of the Gal(F_q / F_{p^r}) conjugates of x, as an element of f.
Elem norm(const Field& f, std::uint32_t r, Elem x);

Elem mult_generator(const Field& f);

/// Representatives of F_q^* / (F_q^*)^n, found by partitioning all units
/// into cosets of the n-th powers.
struct PowerClassGroup {
  const Field* field = nullptr;
  std::uint32_t n = 1;
  std::vector<Elem> reps;
  std::size_t size = 0;
};

PowerClassGroup power_class_count(const Field& f, std::uint32_t n);

/// Multiplicative order of a nonzero element.
std::uint64_t mult_order(const Field& f, Elem a);

}  // namespace zk
