// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcm/fpoly.hpp"
#include "fcm/inf.hpp"

namespace fcm {

struct RelationQuery {
  std::vector<InfElem> values;
  int D = 1;
  int H = 40;
  int M = 20;
};

// sum_i coeffs[i](theta) * X^{exponents[i]} vanishes at the values
struct RelationCertificate {
  std::vector<std::vector<int>> exponents;
  std::vector<FPoly> coeffs;  // over F_q, variable T
  Rat residual;               // valuation of the substituted relation
  Rat precision;              // absolute precision of the check
  int D = 0, H = 0, M = 0;
  std::string scope = "within bounds";
  std::string str() const;
};

struct LinearRelations {
  std::vector<std::vector<FPoly>> basis;  // F_q-basis of the detected kernel
  std::vector<Rat> residuals;
  Rat precision;
  int H = 0, M = 0;
  int rows = 0, unknowns = 0;
};

// F_q[theta]-linear relations with coefficient degree <= H.
// exact_rows sets the window (u-units) when every value is exact.
LinearRelations find_linear_relations(const std::vector<InfElem>& values, int H, int M = 20,
                                      std::int64_t exact_rows = 0);

std::optional<RelationCertificate> find_algebraic_relation(const InfElem& x, int D, int H, int M = 20);

// relations among all monomials of total degree <= D in the values
std::vector<RelationCertificate> find_polynomial_relations(const std::vector<InfElem>& values, int D, int H,
                                                           int M = 20);

struct LegendreResult {
  Rat pitilde_exponent;
  InfElem ratio;
  std::optional<RelationCertificate> cert;
  bool pass() const { return cert.has_value(); }
};
// R = prod(fiber) / pitilde^wt for each fiber
std::vector<LegendreResult> certify_legendre(const std::vector<std::vector<InfElem>>& fibers,
                                             const InfElem& pitilde, int wt, int D, int H, int M = 20);

// evaluates a certificate at values, returning the valuation of the sum
Rat substitute(const RelationCertificate& c, const std::vector<InfElem>& values);

}  // namespace fcm
