// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "fcm/errors.hpp"
#include "fcm/shtuka.hpp"

using namespace fcm;

namespace {

DualMotive kummer(int q, const CMDivisor& Xi) {
  MotiveSetup S = setup_motive(kummer_t_model(q));
  return build_motive(S, solve_shtuka(S, Xi), Xi);
}

}  // namespace

TEST_CASE("kummer q=3 shtuka") {
  MotiveSetup S = setup_motive(kummer_t_model(3));
  REQUIRE(S.nu.size() == 2);
  CHECK(S.nu[0] == KElem::w(S.R.A));
  CHECK(S.nu[1] == -KElem::w(S.R.A));
  CMDivisor Xi{{"xi1", 1}};
  auto P = solve_shtuka(S, Xi);
  auto M = build_motive(S, P, Xi);
  KPoly t = KPoly::t(S.R.A);
  KPoly w = KPoly::constant(KElem::w(S.R.A));
  KPoly one = KPoly::constant(KElem::constant(S.R.A, 1));
  // y^2 = -t: Phi for h = y - w
  CHECK(M.Phi[0][0] == -w);
  CHECK(M.Phi[0][1] == one);
  CHECK(M.Phi[1][0] == -t);
  CHECK(M.Phi[1][1] == -w);
  auto d = check_det(M);
  CHECK(d.ok);
  CHECK(d.n == 1);
  CHECK(sigma_ideal_check(M, Xi));
  CHECK(hodge_pink_weights(M) == std::vector<int>{-1, 0});
  CHECK(expected_weights(M) == std::vector<int>{-1, 0});
}

TEST_CASE("planted defect fails the sigma check") {
  MotiveSetup S = setup_motive(kummer_t_model(3));
  CMDivisor Xi{{"xi1", 1}};
  auto P = solve_shtuka(S, Xi);
  KVec f = cr_y(S.R);
  f[0] = f[0] + KPoly::constant(S.nu[0]);
  P.h = cr_mul(S.R, P.h, f);
  auto M = build_motive(S, P, Xi, false);
  CHECK_FALSE(sigma_ideal_check(M, Xi));
  CHECK_THROWS_AS(build_motive(S, P, Xi), BasisExpansionFailure);
}

TEST_CASE("tensor products") {
  auto M1 = kummer(3, {{"xi1", 1}});
  auto M2 = kummer(3, {{"xi2", 1}});
  auto T = tensor_motives(M1, M2);
  CMDivisor Xi{{"xi1", 1}, {"xi2", 1}};
  CHECK(check_det(T).n == 2);
  CHECK(sigma_ideal_check(T, Xi));
  CHECK(hodge_pink_weights(T) == std::vector<int>{-1, -1});
  auto M5 = kummer(5, {{"xi1", 1}});
  CHECK_THROWS_AS(tensor_motives(M1, M5), ModelMismatch);
  auto C2 = carlitz_tensor_motive(3, 2);
  auto C1 = carlitz_tensor_motive(3, 1);
  auto C3 = tensor_motives(C1, C2);
  CHECK(C3.Phi[0][0] == carlitz_tensor_motive(3, 3).Phi[0][0]);
}

TEST_CASE("invariants over fixtures") {
  std::vector<std::pair<CMFieldModel, CMDivisor>> cases = {
      {rational_model(3), {{"xi_theta", 1}}},
      {rational_model(2), {{"xi_theta", 3}}},
      {kummer_t_model(3), {{"xi1", 1}}},
      {kummer_t_model(3), {{"xi1", 2}, {"xi2", 1}}},
      {kummer_t_model(5), {{"xi1", 1}}},
      {kummer_t_model(5), {{"xi1", 4}}},
      {kummer_t_model(5), {{"xi2", 1}, {"xi3", 2}, {"xi4", 1}}},
      {const_ext_model(3, 2), {{"xi0", 1}}},
      {const_ext_model(3, 2), {{"xi0", 1}, {"xi1", 2}}},
      {const_ext_model(2, 3), {{"xi2", 1}}},
  };
  for (auto& [K, Xi] : cases) {
    CAPTURE(K.name);
    MotiveSetup S = setup_motive(K);
    auto M = build_motive(S, solve_shtuka(S, Xi), Xi);
    int deg = 0;
    for (auto& [l, m] : Xi) deg += m;
    auto d = check_det(M);
    CHECK(d.ok);
    CHECK(d.n == deg);
    CHECK(sigma_ideal_check(M, Xi));
    CHECK(hodge_pink_weights(M) == expected_weights(M));
  }
}

TEST_CASE("shtuka divisor bookkeeping") {
  MotiveSetup S = setup_motive(kummer_t_model(3));
  auto P = solve_shtuka(S, {{"xi1", 1}, {"xi2", 1}});
  int deg = 0;
  for (auto& [l, m] : P.divisor) deg += m;
  CHECK(deg == 0);
  CHECK_THROWS_AS(solve_shtuka(S, {{"xi1", 1}, {"xi2", -1}}), InvalidArgument);
}

TEST_CASE("eigendifferentials") {
  auto M = kummer(3, {{"xi1", 1}});
  auto om = eigendifferentials(M);
  REQUIRE(om.size() == 2);
  CHECK(om[0][1].val() == Rat(-1, 2));
  CHECK(agree(om[0][1] + om[1][1], InfElem::zero(om[0][1].F, 3, 2)));
  auto C = const_ext_model(3, 2);
  MotiveSetup S = setup_motive(C);
  auto Mc = build_motive(S, solve_shtuka(S, {{"xi1", 1}}), {{"xi1", 1}});
  auto oc = eigendifferentials(Mc);
  CHECK(oc[1][1].lead_coef() == 1);
  CHECK(oc[1][0].is_zero());
}
