// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fcm/field.hpp"

namespace fcm {

// Univariate polynomial over a finite field, canonical (no trailing zeros).
struct FPoly {
  FieldPtr F;
  std::vector<Elt> c;  // low to high
  char var = 'x';

  FPoly() = default;
  FPoly(FieldPtr f, std::vector<Elt> coeffs, char v = 'x');
  static FPoly constant(FieldPtr f, Elt a, char v = 'x');
  static FPoly monomial(FieldPtr f, Elt a, int k, char v = 'x');
  static FPoly x(FieldPtr f, char v = 'x') { return monomial(std::move(f), 1, 1, v); }

  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  Elt lc() const { return c.empty() ? 0 : c.back(); }
  Elt coef(int i) const { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : 0; }
  void normalize();
  Elt eval(Elt x) const;
  FPoly monic() const;
  FPoly deriv() const;
  FPoly lift(const FieldPtr& to) const;
  bool operator==(const FPoly& o) const { return c == o.c; }
  std::string str() const;
};

FPoly operator+(const FPoly& a, const FPoly& b);
FPoly operator-(const FPoly& a, const FPoly& b);
FPoly operator-(const FPoly& a);
FPoly operator*(const FPoly& a, const FPoly& b);
FPoly scale(const FPoly& a, Elt s);
std::pair<FPoly, FPoly> divmod(const FPoly& a, const FPoly& b);
FPoly operator%(const FPoly& a, const FPoly& b);
FPoly operator/(const FPoly& a, const FPoly& b);
FPoly gcd(FPoly a, FPoly b);
FPoly powmod(FPoly a, unsigned long long k, const FPoly& m);
FPoly pow(const FPoly& a, unsigned k);
// coefficients raised to p^k and x -> x^(p^k): the p^k-power of a
FPoly frobenius_power(const FPoly& a, int k);

// Roots in the target field (which must contain the coefficient field).
// complete=true throws TargetTooSmall when some root lies outside target.
std::vector<std::pair<Elt, int>> poly_roots_in_ext(const FPoly& f, const FieldPtr& target,
                                                   bool complete = false);

struct ExtRoot {
  FieldPtr field;  // smallest standard field over the coefficient field holding the root
  Elt root;
  int mult;
};
// All roots in the algebraic closure, each in its minimal extension of the
// coefficient field, ordered by extension degree then discrete log.
std::vector<ExtRoot> all_roots(const FPoly& f);

// Rational function num/den with den monic.
struct RatFunc {
  FPoly num, den;
  RatFunc() = default;
  RatFunc(FPoly n);
  RatFunc(FPoly n, FPoly d);
  static RatFunc constant(const FieldPtr& f, Elt a, char v = 'x');
  bool is_zero() const { return num.is_zero(); }
  bool operator==(const RatFunc& o) const { return num == o.num && den == o.den; }
  std::string str() const;
};

RatFunc operator+(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a);
RatFunc operator*(const RatFunc& a, const RatFunc& b);
RatFunc operator/(const RatFunc& a, const RatFunc& b);
// x -> x^{p^k} on both parts
RatFunc frobenius_power(const RatFunc& a, int k);

}  // namespace fcm
