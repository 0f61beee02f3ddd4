// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fcm/field.hpp"
#include "fcm/fpoly.hpp"
#include "fcm/rat.hpp"

namespace fcm {

// Element of F_{q^m}((u)), u = theta^{-1/e}, known modulo u^N.
// c[i] is the coefficient of u^{v+i}; c.front() != 0 unless the element is
// zero at its precision (then c is empty and v == N, or v == 0 when exact).
struct InfElem {
  static constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max() / 8;

  FieldPtr F;
  int q = 0;
  int a = 0;  // q = p^a
  int e = 1;
  std::int64_t v = 0;
  std::int64_t N = kExact;
  std::vector<Elt> c;

  static InfElem zero(FieldPtr F, int q, int e = 1, std::int64_t N = kExact);
  static InfElem constant(FieldPtr F, int q, Elt x, int e = 1);
  // x * u^k, exact
  static InfElem monomial(FieldPtr F, int q, Elt x, std::int64_t k, int e = 1);
  // x * theta^k, exact
  static InfElem theta_pow(FieldPtr F, int q, std::int64_t k, Elt x = 1, int e = 1);
  // polynomial in theta, exact
  static InfElem from_poly(const FPoly& f, int q, int e = 1);
  // expansion of num/den at infinity, absolute precision N in u-units
  static InfElem from_ratfunc(const RatFunc& r, int q, std::int64_t N, int e = 1);

  bool exact() const { return N >= kExact / 2; }
  bool is_zero() const { return c.empty(); }
  bool exact_zero() const { return c.empty() && exact(); }
  int m() const { return F->n / a; }
  // leading exponent in u-units (== N for a non-exact zero)
  std::int64_t lead() const { return v; }
  Rat val() const { return Rat(v, e); }
  Rat prec() const { return Rat(N, e); }
  std::int64_t rel_prec() const { return N - v; }
  Elt lead_coef() const { return c.empty() ? 0 : c[0]; }
  Elt coef(std::int64_t k) const {
    std::int64_t i = k - v;
    return i >= 0 && i < static_cast<std::int64_t>(c.size()) ? c[i] : 0;
  }
  bool is_monomial() const;
  // largest recorded exponent + 1
  std::int64_t end() const { return v + static_cast<std::int64_t>(c.size()); }

  InfElem truncate(std::int64_t Nnew) const;
  InfElem lift(const FieldPtr& F2, int e2) const;
  // coefficients mapped by x -> x^{p^k}, exponents untouched
  InfElem map_coeffs_frob(long k) const;
  // u -> z*u
  InfElem scale_u(Elt z) const;
  InfElem shift(std::int64_t k) const;  // times u^k
  InfElem scaled(Elt s) const;

  // sparse (exponent, coefficient) pairs
  std::vector<std::pair<std::int64_t, Elt>> terms() const;
  std::string str(int max_terms = 8) const;

  void normalize();
};

// lift both to a common constant field and ramification
void unify(InfElem& a, InfElem& b);

InfElem operator+(const InfElem& a, const InfElem& b);
InfElem operator-(const InfElem& a, const InfElem& b);
InfElem operator-(const InfElem& a);
InfElem operator*(const InfElem& a, const InfElem& b);
InfElem operator/(const InfElem& a, const InfElem& b);
InfElem operator*(const InfElem& a, Elt s);

// 1/b; rel is the relative precision to use when b is exact (0 = throw)
InfElem inverse(const InfElem& b, std::int64_t rel = 0);
// a/b with the exact-divisor case computed to absolute precision Nabs
InfElem divide(const InfElem& a, const InfElem& b, std::int64_t Nabs);
InfElem pow(const InfElem& a, std::uint64_t k);

// a^{q^n}. For n > 0 the output precision is capped at cap (u-units).
// For n < 0 throws NotAPower unless every exponent is divisible.
InfElem frobenius(const InfElem& a, long n, std::int64_t cap = InfElem::kExact);
// q^n-th root that ramifies when necessary (n > 0 means a^{q^{-n}})
InfElem frobenius_root(const InfElem& a, long n);

// Canonical n-th root. rel is the relative precision (result u-units) used
// for exact non-monomial inputs.
InfElem nth_root(const InfElem& a, std::int64_t n, std::int64_t rel = 0);

inline const Rat kInfVal = Rat(std::int64_t(1) << 40);

// valuation of a - b, capped by its precision; kInfVal for an exact zero
Rat diff_val(const InfElem& a, const InfElem& b);
// a - b vanishes up to min(limit, precision of the difference)
bool agree(const InfElem& a, const InfElem& b, Rat limit = kInfVal);
// valuation of a, kInfVal for exact zero, precision for inexact zero
Rat val_or_prec(const InfElem& a);

}  // namespace fcm
