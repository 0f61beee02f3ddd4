// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcm/fpoly.hpp"
#include "fcm/inf.hpp"

namespace fcm {

enum class ModelKind { Rational, Monogenic, ConstExt };

// CM field presented as
//   Rational:  K = F_q(t)
//   Monogenic: O_K = F_q[t][y] / m(t, y), m monic in y
//   ConstExt:  K = F_{q^ell}(t)
struct CMFieldModel {
  std::string name;
  ModelKind kind = ModelKind::Rational;
  int q = 0;
  FieldPtr Fq;
  // m(t, y) = sum_j m[j](t) y^j
  std::vector<FPoly> m;
  // genus-zero parametrization by s = y: t = tc * y^tE
  bool has_param = false;
  Elt tc = 1;
  int tE = 1;
  // generator of K+ as a polynomial in y; empty means K+ = F_q(t)
  FPoly kplus;
  // automorphisms y -> poly(y)
  std::vector<FPoly> automorphisms;
  // coefficient Frobenius of F_q((1/t)) acts on J_K as part of the supplied action
  bool constant_frobenius = false;
  int ell = 1;

  int degree() const;  // [K : F_q(t)]
};

struct CMPoint {
  std::string label;
  std::optional<InfElem> nu_y;
  int fiber = 0;
  int component = 0;
};

using CMDivisor = std::map<std::string, int>;

CMFieldModel rational_model(int q);
// y^{q-1} = -t
CMFieldModel kummer_t_model(int q);
CMFieldModel const_ext_model(int q, int ell);
// general monogenic model; automorphisms and K+ optional
CMFieldModel monogenic_model(std::string name, int q, std::vector<FPoly> m);

struct Place {
  InfElem root;   // a root of m in F_q((1/t))-bar, variable t
  int size = 1;   // orbit size = e * f
  int e = 1, f = 1;
};

struct ValidationReport {
  bool pass = false;
  int kplus_degree = 1;
  std::vector<Place> places;  // places of K above infinity
  std::vector<int> kplus_places;  // index of the K+ place under each K place
  std::string message;
};

ValidationReport validate_cm_field(const CMFieldModel& K, std::int64_t prec = 40);

// points of J_K, labeled by sorted leading coefficient
std::vector<CMPoint> jk_points(const CMFieldModel& K, std::int64_t prec = 60);

struct WeightInfo {
  bool in_ik0 = false;
  int weight = 0;
  bool generalized_cm_type = false;
  bool cm_type = false;
};
WeightInfo cm_weight(const CMDivisor& D, const std::vector<CMPoint>& pts);

std::vector<CMDivisor> decompose_cm_type(const CMDivisor& Xi, const std::vector<CMPoint>& pts);

// supported pairs: F_q(t) in K
CMDivisor inflate_from_base(const CMDivisor& D, const CMFieldModel& K, const std::vector<CMPoint>& pts);
// push forward to F_q(t); the point there is "xi_theta"
CMDivisor restrict_to_base(const CMDivisor& D, const std::vector<CMPoint>& pts);
// push forward to K+; points labeled "xi+<fiber>"
CMDivisor restrict_to_kplus(const CMDivisor& D, const std::vector<CMPoint>& pts);

// I_Xi: divisor on the geometric points above infinity
CMDivisor reduction_at_infinity(const CMFieldModel& K, const CMDivisor& Xi, const std::vector<CMPoint>& pts);

// permutations of the point indices generating the Galois action
std::vector<std::vector<int>> galois_generators(const CMFieldModel& K, const std::vector<CMPoint>& pts);

struct RankInfo {
  int lattice_rank = 0;
  Rat formula;
  bool agree = false;
};
int galois_rank(const CMFieldModel& K, const CMDivisor& Xi, const std::vector<CMPoint>& pts);
RankInfo rank_ik0(const CMFieldModel& K, const std::vector<CMPoint>& pts);

struct Xi0Certificate {
  CMDivisor xi0;
  int rank = 0;
  int rank_ik0 = 0;
  bool generalized_cm_type = false;
  bool nondegenerate = false;
};
Xi0Certificate nondegenerate_xi0(const CMFieldModel& K, const std::string& label, const std::vector<CMPoint>& pts);

// integer rank via fraction-free elimination
int integer_rank(std::vector<std::vector<long long>> rows);

}  // namespace fcm
