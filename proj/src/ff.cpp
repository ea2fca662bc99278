#include "zk/ff.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "zk/error.hpp"

namespace zk {

Limits& limits() {
  static Limits l;
  return l;
}

namespace {

std::uint64_t parse_env_u64(const char* name) {
  const char* v = std::getenv(name);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v, v + std::char_traits<char>::length(v), out);
  if (ec != std::errc{} || *ptr != '\0' || out == 0)
    throw UsageError(std::string("invalid value for ") + name + ": '" + v + "'");
  return out;
}

}  // namespace

void load_limits_from_env() {
  if (std::getenv("ZK_MAX_GROUP")) limits().max_group = parse_env_u64("ZK_MAX_GROUP");
  if (std::getenv("ZK_MAX_FIELD")) limits().max_field = parse_env_u64("ZK_MAX_FIELD");
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t n) {
  std::uint64_t r = 1 % n;
  a %= n;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, n);
    a = mulmod_u64(a, a, n);
    e >>= 1;
  }
  return r;
}

// Pollard rho (Brent variant), n odd composite.
std::uint64_t rho(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mulmod_u64(x, x, n) + c) % n; };
    std::uint64_t x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (std::uint64_t d : {2, 3, 5, 7, 11, 13}) {
    if (n % d == 0) {
      out.push_back(d);
      factor_into(n / d, out);
      return;
    }
  }
  std::uint64_t d = rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % d == 0) return n == d;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t p, std::uint32_t m, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (v > cap / p) return std::nullopt;
    v *= p;
  }
  if (v > cap) return std::nullopt;
  return v;
}

namespace {

using Digits = std::vector<std::uint32_t>;  // polynomial over F_p, constant first

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n) {
  if (n == 1) return 0;
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(n), nr = static_cast<std::int64_t>(a % n);
  while (nr != 0) {
    std::int64_t qt = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - qt * nt);
    std::tie(r, nr) = std::make_pair(nr, r - qt * nr);
  }
  if (r != 1) throw std::logic_error("inverse_mod: not invertible");
  if (t < 0) t += static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(t);
}

void trim(Digits& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_p(std::uint32_t a, std::uint32_t p) {
  return static_cast<std::uint32_t>(inverse_mod(a, p));
}

// a mod f, f monic.
Digits poly_mod(Digits a, const Digits& f, std::uint32_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  while (a.size() > df) {
    std::uint32_t lead = a.back();
    std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      std::uint64_t sub = std::uint64_t{lead} * f[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Digits poly_mul(const Digits& a, const Digits& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Digits c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<std::uint32_t>((c[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  trim(c);
  return c;
}

Digits poly_gcd(Digits a, Digits b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // make b monic for poly_mod
    std::uint32_t il = inv_p(b.back(), p);
    for (auto& c : b) c = static_cast<std::uint32_t>(std::uint64_t{c} * il % p);
    Digits r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Digits poly_powmod(Digits base, std::uint64_t e, const Digits& f, std::uint32_t p) {
  Digits result{1};
  base = poly_mod(base, f, p);
  while (e > 0) {
    if (e & 1) result = poly_mod(poly_mul(result, base, p), f, p);
    base = poly_mod(poly_mul(base, base, p), f, p);
    e >>= 1;
  }
  return result;
}

bool irreducible_over_prime(const Digits& f, std::uint32_t p) {
  const std::size_t m = f.size() - 1;
  if (m == 1) return true;
  Digits h{0, 1};  // x
  for (std::size_t i = 1; i <= m / 2; ++i) {
    h = poly_powmod(h, p, f, p);
    Digits d = h;
    d.resize(std::max<std::size_t>(d.size(), 2), 0);
    d[1] = (d[1] + p - 1) % p;  // h - x
    trim(d);
    Digits g = poly_gcd(f, d, p);
    if (g.size() > 1) return false;
  }
  return true;
}

Digits to_digits(std::uint32_t v, std::uint32_t p, std::uint32_t m) {
  Digits d(m, 0);
  for (std::uint32_t i = 0; i < m; ++i) {
    d[i] = v % p;
    v /= p;
  }
  return d;
}

std::uint32_t from_digits(const Digits& d, std::uint32_t p) {
  std::uint32_t v = 0;
  for (std::size_t i = d.size(); i-- > 0;) v = v * p + d[i];
  return v;
}

}  // namespace

Field::Field(std::uint32_t p, std::uint32_t m) : p_(p), m_(m) {
  q_ = static_cast<std::uint32_t>(*checked_pow(p, m, std::uint64_t{1} << 32));

  // Lex-least monic irreducible: lower coefficients enumerated as the base-p
  // digits of v, most significant digit = coefficient of x^{m-1}.
  for (std::uint32_t v = 0; v < q_; ++v) {
    Digits f = to_digits(v, p, m);
    f.push_back(1);
    if (irreducible_over_prime(f, p)) {
      modulus_ = f;
      break;
    }
  }
  if (modulus_.empty()) throw std::logic_error("no irreducible polynomial found");

  auto slow_mul = [&](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
    if (p == 2) {
      std::uint64_t acc = 0;
      for (std::uint32_t i = 0; i < m; ++i)
        if ((b >> i) & 1u) acc ^= std::uint64_t{a} << i;
      std::uint64_t modmask = 0;
      for (std::uint32_t i = 0; i <= m; ++i)
        if (modulus_[i]) modmask |= std::uint64_t{1} << i;
      for (int bit = 2 * static_cast<int>(m); bit >= static_cast<int>(m); --bit)
        if ((acc >> bit) & 1u) acc ^= modmask << (bit - static_cast<int>(m));
      return static_cast<std::uint32_t>(acc);
    }
    Digits r = poly_mod(poly_mul(to_digits(a, p, m), to_digits(b, p, m), p), modulus_, p);
    r.resize(m, 0);
    return from_digits(r, p);
  };
  auto slow_pow = [&](std::uint32_t a, std::uint64_t e) {
    std::uint32_t r = 1;
    while (e > 0) {
      if (e & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
      e >>= 1;
    }
    return r;
  };

  const std::uint64_t order = q_ - 1;
  const auto factors = prime_factors(order);
  generator_ = 0;
  for (std::uint32_t v = 1; v < q_; ++v) {
    bool ok = true;
    for (auto l : factors)
      if (slow_pow(v, order / l) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      generator_ = v;
      break;
    }
  }
  if (generator_ == 0) throw std::logic_error("no multiplicative generator found");

  exp_.assign(2 * order, 0);
  log_.assign(q_, 0);
  Elem cur = 1;
  for (std::uint64_t k = 0; k < order; ++k) {
    exp_[k] = cur;
    exp_[k + order] = cur;
    log_[cur] = static_cast<std::uint32_t>(k);
    cur = slow_mul(cur, generator_);
  }
  if (cur != 1) throw std::logic_error("generator cycle did not close");
  neg_one_log_ = (p == 2) ? 0 : static_cast<Elem>(order / 2);

  if (m > 1 && p != 2) {
    zech_.assign(order, 0);
    for (std::uint64_t k = 0; k < order; ++k) {
      Elem s = add_digits(1, exp_[k]);
      zech_[k] = (s == 0) ? static_cast<std::uint32_t>(order) : log_[s];
    }
  }
  choose_compat_generator();
}

Elem Field::add_digits(Elem a, Elem b) const {
  Elem r = 0, scale = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    Elem d = (a % p_ + b % p_) % p_;
    r += d * scale;
    scale *= p_;
    a /= p_;
    b /= p_;
  }
  return r;
}

Elem Field::add(Elem a, Elem b) const {
  if (m_ == 1) {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  if (p_ == 2) return a ^ b;
  if (a == 0) return b;
  if (b == 0) return a;
  const std::uint32_t order = q_ - 1;
  std::uint32_t la = log_[a], lb = log_[b];
  std::uint32_t k = lb >= la ? lb - la : lb + order - la;
  std::uint32_t z = zech_[k];
  if (z == order) return 0;
  return exp_[la + z];
}

Elem Field::neg(Elem a) const {
  if (a == 0 || p_ == 2) return a;
  if (m_ == 1) return p_ - a;
  return exp_[log_[a] + neg_one_log_];
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw DomainError("inverse of zero in F_" + name());
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return exp_[mulmod(log_[a], e % (q_ - 1), q_ - 1)];
}

Elem Field::from_int(long long v) const {
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<Elem>(r);
}

std::vector<std::uint32_t> Field::coeffs(Elem a) const { return to_digits(a, p_, m_); }

Elem Field::from_coeffs(const std::vector<std::uint32_t>& c) const {
  if (c.size() > m_) throw DomainError("too many coefficients for F_" + name());
  Digits d(c.begin(), c.end());
  for (auto& x : d) x %= p_;
  return from_digits(d, p_);
}

std::string Field::name() const { return std::to_string(p_) + "^" + std::to_string(m_); }

Elem Field::parse(const std::string& s) const {
  auto parse_u64 = [&](std::string_view t) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
      throw UsageError("bad field element '" + s + "' for F_" + name());
    return v;
  };
  if (s.size() > 2 && s[0] == 'g' && s[1] == '^') return exp(parse_u64(std::string_view(s).substr(2)));
  if (!s.empty() && s[0] == '-') {
    std::uint64_t v = parse_u64(std::string_view(s).substr(1));
    if (v >= q_) throw UsageError("element '" + s + "' out of range for F_" + name());
    return neg(static_cast<Elem>(v));
  }
  std::uint64_t v = parse_u64(s);
  if (v >= q_) throw UsageError("element '" + s + "' out of range for F_" + name());
  return static_cast<Elem>(v);
}

void Field::choose_compat_generator() {
  const std::uint64_t order = q_ - 1;
  if (m_ == 1) {
    compat_ = generator_;
  } else {
    struct Constraint {
      std::uint64_t e;
      std::vector<Elem> poly;  // minimal polynomial over F_p, constant first
    };
    std::vector<Constraint> cons;
    for (auto l : prime_factors(m_)) {
      const Field& sub = make_field(p_, m_ / static_cast<std::uint32_t>(l));
      // minimal polynomial of sub's compatible generator: prod (x - g^{p^i})
      std::vector<Elem> poly{1};
      Elem root = sub.compat_generator();
      for (std::uint32_t i = 0; i < sub.m(); ++i) {
        std::vector<Elem> next(poly.size() + 1, 0);
        for (std::size_t k = 0; k < poly.size(); ++k) {
          next[k + 1] = sub.add(next[k + 1], poly[k]);
          next[k] = sub.sub(next[k], sub.mul(root, poly[k]));
        }
        poly = std::move(next);
        root = sub.pow(root, p_);
      }
      for (Elem c : poly)
        if (c >= p_) throw std::logic_error("compatible minimal polynomial not over F_p");
      cons.push_back({order / (sub.q() - 1), poly});
    }
    compat_ = 0;
    for (Elem v = 1; v < q_ && compat_ == 0; ++v) {
      if (std::gcd<std::uint64_t, std::uint64_t>(log_[v], order) != 1) continue;
      bool ok = true;
      for (const auto& c : cons) {
        Elem x = pow(v, c.e);
        Elem acc = 0;
        for (std::size_t k = c.poly.size(); k-- > 0;) acc = add(mul(acc, x), c.poly[k]);
        if (acc != 0) {
          ok = false;
          break;
        }
      }
      if (ok) compat_ = v;
    }
    if (compat_ == 0) throw std::logic_error("no compatible generator for F_" + name());
  }
  compat_log_ = log_[compat_];
  compat_log_inv_ = static_cast<std::uint32_t>(inverse_mod(compat_log_, order));
}

const Field& make_field(std::uint32_t p, std::uint32_t m) {
  if (!is_prime(p)) throw UsageError("field characteristic " + std::to_string(p) + " is not prime");
  if (m == 0) throw UsageError("field degree must be >= 1");
  auto q = checked_pow(p, m, limits().max_field);
  if (!q)
    throw BoundExceeded("field " + std::to_string(p) + "^" + std::to_string(m) +
                        " exceeds field bound " + std::to_string(limits().max_field));
  static std::recursive_mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<Field>> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto& slot = cache[{p, m}];
  if (!slot) slot = std::make_unique<Field>(p, m);
  return *slot;
}

const Field& field_of_order(std::uint64_t q) {
  if (q < 2) throw UsageError("field order must be a prime power >= 2");
  auto f = prime_factors(q);
  if (f.size() != 1) throw UsageError("field order " + std::to_string(q) + " is not a prime power");
  std::uint32_t m = 0;
  for (std::uint64_t v = q; v > 1; v /= f[0]) ++m;
  return make_field(static_cast<std::uint32_t>(f[0]), m);
}

const Field& parse_field(const std::string& s) {
  auto num = [&](std::string_view t) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
      throw UsageError("bad field '" + s + "' (expected p^m or a prime power)");
    return v;
  };
  auto caret = s.find('^');
  if (caret == std::string::npos) return field_of_order(num(s));
  std::uint64_t p = num(std::string_view(s).substr(0, caret));
  std::uint64_t m = num(std::string_view(s).substr(caret + 1));
  if (p > 0xffffffffu || m > 64) throw UsageError("bad field '" + s + "'");
  return make_field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(m));
}

namespace {

void check_subfield(const Field& small, const Field& big, const char* what) {
  if (small.p() != big.p() || big.m() % small.m() != 0)
    throw DomainError(std::string(what) + ": F_" + small.name() + " is not a subfield of F_" + big.name());
}

}  // namespace

Elem embed(const Field& src, const Field& dst, Elem x) {
  check_subfield(src, dst, "embed");
  if (&src == &dst || x == 0) return x;
  const std::uint64_t os = src.q() - 1, od = dst.q() - 1;
  std::uint64_t k = mulmod(src.log(x), src.compat_log_inv(), os);  // log to the compatible base
  std::uint64_t e = od / os;
  return dst.exp(mulmod(dst.compat_log(), mulmod(k, e, od), od));
}

std::optional<Elem> restrict_to(const Field& big, const Field& small, Elem x) {
  check_subfield(small, big, "restrict_to");
  if (&small == &big || x == 0) return x;
  const std::uint64_t ob = big.q() - 1, os = small.q() - 1;
  std::uint64_t k = mulmod(big.log(x), big.compat_log_inv(), ob);
  std::uint64_t e = ob / os;
  if (k % e != 0) return std::nullopt;
  return small.exp(mulmod(small.compat_log(), k / e, os));
}

Elem frobenius(const Field& f, std::uint32_t r, Elem x) {
  if (r == 0 || f.m() % r != 0)
    throw DomainError("frobenius: degree " + std::to_string(r) + " does not divide " + std::to_string(f.m()));
  std::uint64_t e = *checked_pow(f.p(), r, ~std::uint64_t{0});
  return f.pow(x, e);
}

Elem norm(const Field& f, std::uint32_t r, Elem x) {
  if (r == 0 || f.m() % r != 0)
    throw DomainError("norm: degree " + std::to_string(r) + " does not divide " + std::to_string(f.m()));
  Elem acc = 1, conj = x;
  for (std::uint32_t i = 0; i < f.m() / r; ++i) {
    acc = f.mul(acc, conj);
    conj = frobenius(f, r, conj);
  }
  return acc;
}

Elem mult_generator(const Field& f) { return f.generator(); }

std::uint64_t mult_order(const Field& f, Elem a) {
  if (a == 0) throw DomainError("multiplicative order of zero");
  const std::uint64_t order = f.q() - 1;
  return order / std::gcd<std::uint64_t, std::uint64_t>(f.log(a), order);
}

PowerClassGroup power_class_count(const Field& f, std::uint32_t n) {
  if (n == 0) throw DomainError("power_class_count: exponent must be >= 1");
  std::vector<bool> is_power(f.q(), false);
  std::vector<Elem> powers;
  for (Elem x = 1; x < f.q(); ++x) {
    Elem y = f.pow(x, n);
    if (!is_power[y]) {
      is_power[y] = true;
      powers.push_back(y);
    }
  }
  PowerClassGroup out{&f, n, {}, 0};
  std::vector<bool> seen(f.q(), false);
  for (Elem u = 1; u < f.q(); ++u) {
    if (seen[u]) continue;
    out.reps.push_back(u);
    for (Elem s : powers) seen[f.mul(u, s)] = true;
  }
  out.size = out.reps.size();
  if (out.size != std::gcd<std::uint64_t, std::uint64_t>(n, f.q() - 1))
    throw std::logic_error("power class count disagrees with gcd(n, q-1)");
  return out;
}

}  // namespace zk
