#pragma once

// Dense univariate polynomials over a Field, coefficients constant term
// first, always trimmed (the zero polynomial is the empty vector).

#include <string>
#include <utility>
#include <vector>

#include "zk/ff.hpp"

namespace zk {

using Poly = std::vector<Elem>;

namespace poly {

void trim(Poly& a);
int degree(const Poly& a);  // -1 for zero
Poly monic(const Field& f, Poly a);
Poly add(const Field& f, const Poly& a, const Poly& b);
Poly sub(const Field& f, const Poly& a, const Poly& b);
Poly mul(const Field& f, const Poly& a, const Poly& b);
Poly scale(const Field& f, const Poly& a, Elem c);
/// Quotient and remainder; b must be nonzero.
std::pair<Poly, Poly> divmod(const Field& f, const Poly& a, const Poly& b);
Poly mod(const Field& f, const Poly& a, const Poly& b);
/// Monic gcd (zero if both are zero).
Poly gcd(const Field& f, Poly a, Poly b);
Poly lcm(const Field& f, const Poly& a, const Poly& b);
Poly derivative(const Field& f, const Poly& a);
Poly pow(const Field& f, const Poly& a, unsigned e);
Elem eval(const Field& f, const Poly& a, Elem x);
bool is_squarefree(const Field& f, const Poly& a);
/// True when a splits into linear factors over f.
bool splits(const Field& f, Poly a);
/// x - c
Poly linear(const Field& f, Elem c);
/// Map coefficients through embed(src, dst, .).
Poly embed(const Field& src, const Field& dst, const Poly& a);

/// Coefficient list, constant term first, e.g. "[1,0,1]".
std::string to_string(const Field& f, const Poly& a);

}  // namespace poly
}  // namespace zk
