#include "zk/poly.hpp"

#include "zk/error.hpp"

namespace zk::poly {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly monic(const Field& f, Poly a) {
  trim(a);
  if (a.empty()) return a;
  Elem il = f.inv(a.back());
  for (auto& c : a) c = f.mul(c, il);
  return a;
}

Poly add(const Field& f, const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = f.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(c);
  return c;
}

Poly sub(const Field& f, const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = f.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(c);
  return c;
}

Poly mul(const Field& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = f.add(c[i + j], f.mul(a[i], b[j]));
  }
  trim(c);
  return c;
}

Poly scale(const Field& f, const Poly& a, Elem c) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
  trim(r);
  return r;
}

std::pair<Poly, Poly> divmod(const Field& f, const Poly& a, const Poly& b) {
  Poly bb = b;
  trim(bb);
  if (bb.empty()) throw DomainError("polynomial division by zero");
  Poly r = a;
  trim(r);
  if (r.size() < bb.size()) return {Poly{}, r};
  Poly qt(r.size() - bb.size() + 1, 0);
  Elem il = f.inv(bb.back());
  while (r.size() >= bb.size()) {
    std::size_t shift = r.size() - bb.size();
    Elem c = f.mul(r.back(), il);
    qt[shift] = c;
    for (std::size_t i = 0; i < bb.size(); ++i) r[shift + i] = f.sub(r[shift + i], f.mul(c, bb[i]));
    trim(r);
  }
  trim(qt);
  return {qt, r};
}

Poly mod(const Field& f, const Poly& a, const Poly& b) { return divmod(f, a, b).second; }

Poly gcd(const Field& f, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(f, a);
}

Poly lcm(const Field& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  return monic(f, divmod(f, mul(f, a, b), gcd(f, a, b)).first);
}

Poly derivative(const Field& f, const Poly& a) {
  if (a.size() <= 1) return {};
  Poly d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = f.mul(f.from_int(static_cast<long long>(i)), a[i]);
  trim(d);
  return d;
}

Poly pow(const Field& f, const Poly& a, unsigned e) {
  Poly r{1};
  for (unsigned i = 0; i < e; ++i) r = mul(f, r, a);
  return r;
}

Elem eval(const Field& f, const Poly& a, Elem x) {
  Elem acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) acc = f.add(f.mul(acc, x), a[i]);
  return acc;
}

bool is_squarefree(const Field& f, const Poly& a) {
  if (degree(a) <= 0) return true;
  Poly d = derivative(f, a);
  if (d.empty()) return false;  // a p-th power over a perfect field
  return degree(gcd(f, a, d)) == 0;
}

bool splits(const Field& f, Poly a) {
  trim(a);
  if (a.empty()) throw DomainError("splits: zero polynomial");
  for (Elem x = 0; x < f.q() && degree(a) > 0; ++x) {
    while (degree(a) > 0 && eval(f, a, x) == 0) a = divmod(f, a, linear(f, x)).first;
  }
  return degree(a) == 0;
}

Poly linear(const Field& f, Elem c) { return Poly{f.neg(c), 1}; }

Poly embed(const Field& src, const Field& dst, const Poly& a) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = zk::embed(src, dst, a[i]);
  return r;
}

std::string to_string(const Field& f, const Poly& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += f.to_string(a[i]);
  }
  return s + "]";
}

}  // namespace zk::poly
