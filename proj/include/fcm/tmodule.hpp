// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "fcm/ring.hpp"
#include "fcm/shtuka.hpp"
#include "fcm/tate.hpp"

namespace fcm {

using KEMat = std::vector<std::vector<KElem>>;
using KFMat = std::vector<std::vector<KFrac>>;
using InfVec = std::vector<InfElem>;
// twisted polynomial sum_k C_k tau^k with d x d coefficients
using TwPoly = std::vector<KEMat>;

struct TModule {
  std::string name;
  int q = 0, d = 1, r = 1;
  KRingPtr A;
  InfElem wv;       // image of the ring generator w
  TwPoly rho_t;
  TwPoly rho_y;     // optional CM generator, empty when absent
};

TwPoly tw_mul(const TwPoly& f, const TwPoly& g);
KEMat kemat_identity(const KRingPtr& A, int d);

TModule carlitz_module(int q);
// Carlitz tensor power: rho_t = theta + N + E tau
TModule carlitz_tensor_module(int q, int n);
// rho_y = w + tau, rho_t = -(rho_y)^{q-1}; pairs with the motive of xi1
TModule kummer_module(const MotiveSetup& S);

// d_rho_t - theta nilpotent, rho_y commutes with rho_t; throws ConsistencyFailure
void check_tmodule(const TModule& rho);

std::vector<KFMat> exp_coeffs(const TModule& rho, int imax);
std::vector<KFMat> log_coeffs(const TModule& rho, int imax);
// sum_{i+j=k} E_i L_j^{(i)} = 0 for 1 <= k <= min sizes
bool exp_log_identity(const std::vector<KFMat>& E, const std::vector<KFMat>& L);
// exp(d z) = rho_t(exp(z)) in every degree the coefficients determine
bool exp_functional_eq(const TModule& rho, const std::vector<KFMat>& E);

// numeric coefficients good for arguments of valuation >= vmin, result to
// absolute precision N (valuation units)
struct CoeffSeries {
  std::vector<InfMatrix> c;
  Rat vmin;
  std::int64_t N = 0;
};
// proto fixes the constant field and ramification of the arguments
CoeffSeries exp_series(const TModule& rho, Rat vmin, std::int64_t N, const InfElem& proto);
CoeffSeries log_series(const TModule& rho, Rat vmin, std::int64_t N, const InfElem& proto);
InfVec apply_series(const CoeffSeries& S, const InfVec& z);
InfVec exp_eval(const TModule& rho, const InfVec& z, std::int64_t N);
InfVec log_eval(const TModule& rho, const InfVec& z, std::int64_t N);

// roots of rho_t(X) = x for d = 1
std::vector<InfElem> preimages(const TModule& rho, const InfElem& x, Rat target);
// t^n-torsion chains x_1, ..., x_n over an F_q-basis of rho[t]
std::vector<std::vector<InfElem>> torsion_points(const TModule& rho, int n, Rat target);

struct Lattice {
  std::vector<InfVec> basis;
  std::vector<int> depth;      // chain length used for each period
  std::vector<Rat> exp_residual;
  std::int64_t N = 0;
};
Lattice period_lattice(const TModule& rho, std::int64_t N);

// G_lambda = sum exp(lambda / theta^{n+1}) t^n, coordinate coord
TateSeries agf(const TModule& rho, const InfVec& lambda, int T, std::int64_t N, int coord = 0);
// [tau^k, lambda] = G_lambda^{(k)}(theta), k >= 1
InfElem de_rham_pairing(const TModule& rho, int k, const InfVec& lambda, std::int64_t N);
// r x r matrix [tau^i, lambda_j], i = 1..r
InfMatrix quasi_period_matrix(const TModule& rho, const Lattice& L, std::int64_t N);

// companion of Psi_rho and the basis change to the CM motive
struct PsiResult {
  TateMatrix Phi;
  TateMatrix Psi;
  DiffEqReport report;
  InfMatrix psi_inv_theta;  // Psi^{-1}(theta) in the motive basis
  KMat B;
  std::string method;
};
// basis change B with B^{(-1)} Phi_rho = Phi_M B; throws ConsistencyFailure
KMat motive_basis_change(const TModule& rho, const DualMotive& M);
KMat phi_rho(const TModule& rho);
PsiResult build_psi(const TModule& rho, const Lattice& L, const DualMotive& M, int T, std::int64_t N,
                    Rat threshold);

}  // namespace fcm
