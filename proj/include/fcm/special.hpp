// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fcm/inf.hpp"
#include "fcm/tate.hpp"

namespace fcm {

// F_q as the standard field of order q
FieldPtr base_field(int q);
InfElem theta(int q, int e = 1);

// canonical (-theta)^{1/(q-1)}
InfElem neg_theta_root(int q);

// Omega = (-theta)^{-q/(q-1)} prod_{i>=1} (1 - t/theta^{q^i}), T coefficients,
// each to absolute precision N (valuation units). Geometric decay
// val(a_n) >= q^{n+1}/(q-1).
TateSeries omega_series(int q, int T, std::int64_t N);

// Psi = (Omega^n) as a 1x1 matrix at precision N. Omega is computed at
// precision q*N so that the inverse twist companion also reaches N.
TateMatrix omega_psi(int q, int T, std::int64_t N, int n = 1);

// 1/Omega(theta) to precision N
InfElem carlitz_period(int q, std::int64_t N);
// (-theta)^{q/(q-1)} prod_{i>=1} (1 - theta^{1-q^i})^{-1} to precision N
InfElem pitilde_product(int q, std::int64_t N);

// Carlitz D_i and L_i as exact polynomials in theta
InfElem carlitz_D(int q, int i);
InfElem carlitz_L(int q, int i);

struct GammaResult {
  InfElem value;
  int degree_reached = 0;  // blocks of degree < degree_reached multiplied in
  Rat tail_bound;          // every omitted block is 1 modulo this valuation
};

// Gamma(x) = x^{-1} prod_{a monic} (1 + x/a)^{-1} to precision N
GammaResult geometric_gamma(const InfElem& x, std::int64_t N);
// same product with the monic polynomials enumerated one by one (test oracle)
InfElem geometric_gamma_enumerated(const InfElem& x, std::int64_t N, int max_degree);

}  // namespace fcm
