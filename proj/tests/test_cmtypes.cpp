// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "fcm/cmtypes.hpp"
#include "fcm/errors.hpp"
#include "fcm/special.hpp"

using namespace fcm;

namespace {

CMFieldModel nonsplit_cubic() {
  FieldPtr F = base_field(2);
  return monogenic_model("nonsplit-cubic", 2,
                         {FPoly(F, {0, 0, 1, 1}, 't'), FPoly(F, {}, 't'), FPoly(F, {}, 't'), FPoly(F, {1}, 't')});
}

CMFieldModel quartic_d2() {
  FieldPtr F = base_field(3);
  CMFieldModel K = monogenic_model(
      "quartic-d2", 3,
      {FPoly(F, {2, 0, 2}, 't'), FPoly(F, {}, 't'), FPoly(F, {}, 't'), FPoly(F, {}, 't'), FPoly(F, {1}, 't')});
  K.kplus = FPoly(F, {0, 0, 1}, 'y');
  // y -> i*y with i a 4th root of unity in F_9
  FieldPtr F9 = std_field(3, 2);
  K.automorphisms = {FPoly(F9, {0, F9->exp_gen(2)}, 'y')};
  K.constant_frobenius = true;
  return K;
}

}  // namespace

TEST_CASE("validation") {
  CHECK(validate_cm_field(rational_model(3)).pass);
  CHECK(validate_cm_field(const_ext_model(3, 2)).pass);
  auto k3 = validate_cm_field(kummer_t_model(3));
  CHECK(k3.pass);
  CHECK(k3.places.size() == 1);
  CHECK(k3.places[0].e == 2);
  auto k5 = validate_cm_field(kummer_t_model(5));
  CHECK(k5.pass);
  CHECK(k5.places[0].e == 4);
  auto bad = validate_cm_field(nonsplit_cubic());
  CHECK_FALSE(bad.pass);
  CHECK(bad.places.size() == 2);
  auto d2 = validate_cm_field(quartic_d2());
  CHECK(d2.pass);
  CHECK(d2.kplus_degree == 2);
}

TEST_CASE("points and weights") {
  auto K = kummer_t_model(3);
  auto pts = jk_points(K);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].label == "xi1");
  CHECK(pts[0].nu_y->val() == Rat(-1, 2));
  auto w = cm_weight({{"xi1", 1}}, pts);
  CHECK(w.cm_type);
  CHECK(w.weight == 1);
  w = cm_weight({{"xi1", 2}, {"xi2", 1}}, pts);
  CHECK(w.generalized_cm_type);
  CHECK(w.weight == 3);
  CHECK_FALSE(cm_weight({{"xi1", 1}, {"xi2", -1}}, pts).generalized_cm_type);
  CHECK_THROWS_AS(cm_weight({{"nope", 1}}, pts), InvalidArgument);
  auto parts = decompose_cm_type({{"xi1", 2}, {"xi2", 1}}, pts);
  CHECK(parts.size() == 3);
}

TEST_CASE("weights on a d=2 model") {
  auto K = quartic_d2();
  auto pts = jk_points(K);
  REQUIRE(pts.size() == 4);
  std::map<int, int> fs;
  for (auto& P : pts) fs[P.fiber]++;
  CHECK(fs.size() == 2);
  // one point per fiber is a CM type; two points in one fiber is not
  std::string a, b;
  for (auto& P : pts) {
    if (P.fiber == 0 && a.empty()) a = P.label;
    if (P.fiber == 1 && b.empty()) b = P.label;
  }
  CHECK(cm_weight({{a, 1}, {b, 1}}, pts).cm_type);
  CHECK_FALSE(cm_weight({{a, 1}}, pts).in_ik0);
  auto r = rank_ik0(K, pts);
  CHECK(r.agree);
  CHECK(r.lattice_rank == 3);
}

TEST_CASE("rank formula") {
  struct Case {
    CMFieldModel K;
    int rank;
  };
  std::vector<Case> cs = {{rational_model(3), 1}, {kummer_t_model(3), 2}, {kummer_t_model(5), 4}, {const_ext_model(3, 2), 2}};
  for (auto& c : cs) {
    auto pts = jk_points(c.K);
    auto r = rank_ik0(c.K, pts);
    CHECK(r.lattice_rank == c.rank);
    CHECK(r.agree);
  }
  // kummer-t with f = t: 1 + (q-2)/(q-1) * (q-1)
  for (int q : {3, 5}) CHECK(rank_ik0(kummer_t_model(q), jk_points(kummer_t_model(q))).lattice_rank == q - 1);
}

TEST_CASE("xi0 nondegenerate") {
  auto K = kummer_t_model(5);
  auto pts = jk_points(K);
  auto c = nondegenerate_xi0(K, "xi1", pts);
  CHECK(c.xi0.at("xi1") == 4);
  CHECK(c.generalized_cm_type);
  CHECK(c.nondegenerate);
  CHECK(c.rank == 4);
  auto Kd = quartic_d2();
  auto pd = jk_points(Kd);
  auto cd = nondegenerate_xi0(Kd, pd[0].label, pd);
  CHECK(cd.generalized_cm_type);
  CHECK(cd.rank == cd.rank_ik0);
  auto G = galois_generators(K, pts);
  REQUIRE(G.size() == 1);
  std::vector<int> orbit = {0};
  while (G[0][orbit.back()] != 0) orbit.push_back(G[0][orbit.back()]);
  CHECK(orbit.size() == 4);
  CHECK_THROWS_AS(galois_generators(nonsplit_cubic(), jk_points(nonsplit_cubic())), GaloisDataInsufficient);
}

TEST_CASE("base change of divisors") {
  auto K = kummer_t_model(3);
  auto pts = jk_points(K);
  CMDivisor up = inflate_from_base({{"xi_theta", 2}}, K, pts);
  CHECK(up == CMDivisor{{"xi1", 2}, {"xi2", 2}});
  CHECK(restrict_to_base(up, pts) == CMDivisor{{"xi_theta", 4}});
  CHECK(restrict_to_kplus({{"xi1", 1}}, pts) == CMDivisor{{"xi+0", 1}});
  CHECK(reduction_at_infinity(K, {{"xi1", 1}}, pts) == CMDivisor{{"inf[s=oo]", 1}});
  CHECK(reduction_at_infinity(K, {{"xi1", 1}, {"xi2", 1}}, pts) == CMDivisor{{"inf[s=oo]", 2}});
  auto C = const_ext_model(3, 2);
  CHECK(reduction_at_infinity(C, {{"xi1", 1}}, jk_points(C)) == CMDivisor{{"inf1", 1}});
}

TEST_CASE("integer rank") {
  CHECK(integer_rank({{1, 2}, {2, 4}}) == 1);
  CHECK(integer_rank({{1, 0, 1}, {0, 1, 1}, {1, 1, 2}}) == 2);
  CHECK(integer_rank({{2, 0}, {0, 3}}) == 2);
}
