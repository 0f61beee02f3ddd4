// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fcm/fpoly.hpp"
#include "fcm/inf.hpp"
#include "fcm/tate.hpp"

namespace fcm {

// A = F[theta][w] / (w^E - u(theta)), F a finite field containing F_q.
struct KRing {
  FieldPtr F;
  int q = 0;
  int a = 0;  // q = p^a
  int E = 1;
  FPoly u;    // in theta
  std::string wname = "w";
};
using KRingPtr = std::shared_ptr<const KRing>;

KRingPtr make_kring(FieldPtr F, int q, int E, FPoly u);
// plain F[theta]
KRingPtr make_kring(FieldPtr F, int q);

struct KElem {
  KRingPtr R;
  std::vector<FPoly> c;  // coefficient of w^j, size E

  static KElem zero(const KRingPtr& R);
  static KElem constant(const KRingPtr& R, Elt x);
  static KElem theta(const KRingPtr& R);
  static KElem w(const KRingPtr& R);
  static KElem from_poly(const KRingPtr& R, const FPoly& f);

  bool is_zero() const;
  bool operator==(const KElem& o) const;
  bool operator!=(const KElem& o) const { return !(*this == o); }
  // constant in F (theta-degree 0, no w part)
  bool is_constant() const;
  int theta_deg() const;
  std::string str() const;
};

KElem operator+(const KElem& x, const KElem& y);
KElem operator-(const KElem& x, const KElem& y);
KElem operator-(const KElem& x);
KElem operator*(const KElem& x, const KElem& y);
KElem operator*(const KElem& x, Elt s);
KElem pow(const KElem& x, unsigned k);
// x^{q^k}, k >= 0
KElem twist(const KElem& x, int k);
// image in F_{q^m}((theta^{-1/e})) with w -> wv
InfElem to_inf(const KElem& x, const InfElem& wv);
// x * conj(x) * ... ; the F[theta] norm and the cofactor with x * cof = norm
FPoly norm(const KElem& x, KElem* cofactor = nullptr);
// x / y when the quotient lies in A
bool exact_div(const KElem& x, const KElem& y, KElem& out);

// Fractions num / den with den in F[theta].
struct KFrac {
  KElem num;
  FPoly den;

  static KFrac of(const KElem& x);
  static KFrac zero(const KRingPtr& R) { return of(KElem::zero(R)); }
  static KFrac one(const KRingPtr& R) { return of(KElem::constant(R, 1)); }
  bool is_zero() const { return num.is_zero(); }
  void reduce();
  std::string str() const;
};

KFrac operator+(const KFrac& x, const KFrac& y);
KFrac operator-(const KFrac& x, const KFrac& y);
KFrac operator-(const KFrac& x);
KFrac operator*(const KFrac& x, const KFrac& y);
KFrac inverse(const KFrac& x);
KFrac operator/(const KFrac& x, const KFrac& y);
bool operator==(const KFrac& x, const KFrac& y);
KFrac twist(const KFrac& x, int k);
// to absolute precision N (u-units of the result)
InfElem to_inf(const KFrac& x, const InfElem& wv, std::int64_t N);

// Polynomials in t over A, low to high.
struct KPoly {
  KRingPtr R;
  std::vector<KElem> c;

  static KPoly zero(const KRingPtr& R) { return {R, {}}; }
  static KPoly constant(const KElem& x);
  static KPoly t(const KRingPtr& R);
  // t - theta
  static KPoly t_minus_theta(const KRingPtr& R);

  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  KElem coef(int i) const { return i >= 0 && i <= deg() ? c[i] : KElem::zero(R); }
  void normalize();
  bool operator==(const KPoly& o) const;
  std::string str() const;
};

KPoly operator+(const KPoly& f, const KPoly& g);
KPoly operator-(const KPoly& f, const KPoly& g);
KPoly operator-(const KPoly& f);
KPoly operator*(const KPoly& f, const KPoly& g);
KPoly operator*(const KElem& s, const KPoly& f);
KPoly pow(const KPoly& f, unsigned k);
KPoly twist(const KPoly& f, int k);
// f(theta + s) as a polynomial in s
KPoly taylor_at_theta(const KPoly& f);
// multiplicity of (t - theta) as a factor; -1 for f = 0
int ord_theta(const KPoly& f);
// f / (t - theta)^k, which must be exact
KPoly div_t_minus_theta(const KPoly& f, int k = 1);
TateSeries to_tate(const KPoly& f, const InfElem& wv);

using KMat = std::vector<std::vector<KPoly>>;

KMat kmat_identity(const KRingPtr& R, int n);
KMat operator*(const KMat& A, const KMat& B);
KMat twist(const KMat& A, int k);
KPoly det(const KMat& A);
TateMatrix to_tate(const KMat& A, const InfElem& wv);
std::string str(const KMat& A);

// rank of a list of row vectors over Frac(A)
int rank_over_frac(std::vector<std::vector<KElem>> rows);

}  // namespace fcm
