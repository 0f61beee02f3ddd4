// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fcm/cmtypes.hpp"
#include "fcm/ring.hpp"

namespace fcm {

// O_K tensor A[t] as a free A[t]-module: basis y^i (monogenic) or the
// component idempotents (constant field extension).
struct CoordRing {
  ModelKind kind = ModelKind::Rational;
  int r = 1;
  KRingPtr A;
  std::vector<KPoly> m;  // monic relation in y over A[t]
};

using KVec = std::vector<KPoly>;

KVec cr_one(const CoordRing& R);
KVec cr_y(const CoordRing& R);
KVec cr_scalar(const CoordRing& R, const KPoly& f);
KVec cr_mul(const CoordRing& R, const KVec& x, const KVec& y);
// row i holds the coordinates of g * b_i
KMat mult_matrix(const CoordRing& R, const KVec& g);

// Everything needed to write shtuka functions exactly for one model.
struct MotiveSetup {
  CMFieldModel K;
  std::vector<CMPoint> pts;
  CoordRing R;
  InfElem w;             // image of the ring generator w
  std::vector<KElem> nu;  // nu_xi(y) as ring elements (monogenic)
};

MotiveSetup setup_motive(const CMFieldModel& K, std::int64_t prec = 60);

struct ShtukaPair {
  std::string W = "0";
  KVec h;
  int ell = 1;  // twist order of the shtuka equation
  std::vector<std::pair<std::string, int>> divisor;  // zeros and poles of h
};

ShtukaPair solve_shtuka(const MotiveSetup& S, const CMDivisor& Xi);

struct DualMotive {
  std::string model;
  CoordRing R;
  InfElem w;
  int rank = 1;
  std::vector<std::string> basis;
  KMat Phi;
  CMDivisor xi;
  ShtukaPair pair;
  std::vector<CMPoint> pts;
  std::vector<KElem> nu;
};

// validate=false skips the determinant and rank checks (planted defects)
DualMotive build_motive(const MotiveSetup& S, const ShtukaPair& pair, const CMDivisor& Xi, bool validate = true);

struct DetReport {
  bool ok = false;
  int n = 0;     // exponent of (t - theta)
  KElem c;       // det / (t - theta)^n when that is constant
  std::string str() const;
};
DetReport check_det(const DualMotive& M);

bool sigma_ideal_check(const DualMotive& M, const CMDivisor& Xi);
DualMotive tensor_motives(const DualMotive& M1, const DualMotive& M2);
std::vector<int> hodge_pink_weights(const DualMotive& M);
// multiset {-m_xi} over J_K, sorted
std::vector<int> expected_weights(const DualMotive& M);

// one row functional per point, in point order
std::vector<std::vector<InfElem>> eigendifferentials(const DualMotive& M);

struct PeriodSymbol {
  std::string label;
  InfElem value;
};
// omega_xi applied to the first Betti vector (row 0 of Psi^{-1}(theta))
std::vector<PeriodSymbol> period_symbols(const DualMotive& M, const InfMatrix& psi_inv_theta);

// formal symbol pi^{1/[K:F_q(t)]} * P(xi1, Phi)^{1/[K:K+]}
struct ExtendedSymbol {
  std::string xi1, xi2;
  Rat pitilde_exponent;
  Rat root_exponent;
};
ExtendedSymbol extended_symbol(const MotiveSetup& S, const std::string& xi1, const std::string& xi2);

DualMotive carlitz_tensor_motive(int q, int n);

}  // namespace fcm
