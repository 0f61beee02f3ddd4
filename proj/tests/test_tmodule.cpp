// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "fcm/errors.hpp"
#include "fcm/relhunt.hpp"
#include "fcm/special.hpp"
#include "fcm/tmodule.hpp"

using namespace fcm;

TEST_CASE("carlitz exp and log coefficients") {
  for (int q : {2, 3}) {
    CAPTURE(q);
    auto rho = carlitz_module(q);
    check_tmodule(rho);
    auto E = exp_coeffs(rho, 6);
    auto L = log_coeffs(rho, 6);
    REQUIRE(E.size() == 7);
    CHECK(exp_log_identity(E, L));
    CHECK(exp_functional_eq(rho, E));
    for (int i = 0; i <= 4; ++i) {
      CAPTURE(i);
      InfElem Ei = to_inf(E[i][0][0], rho.wv, 200);
      CHECK(agree(Ei * carlitz_D(q, i), InfElem::constant(Ei.F, q, 1), Rat(100)));
      InfElem Li = to_inf(L[i][0][0], rho.wv, 200);
      CHECK(agree(Li * carlitz_L(q, i), InfElem::constant(Li.F, q, 1), Rat(100)));
    }
  }
}

TEST_CASE("kummer module recursion") {
  MotiveSetup S = setup_motive(kummer_t_model(3));
  auto rho = kummer_module(S);
  check_tmodule(rho);
  auto A = rho.A;
  KElem th = KElem::theta(A), w = KElem::w(A);
  // rho_t = theta + w(theta - 1) tau - tau^2
  REQUIRE(rho.rho_t.size() == 3);
  CHECK(rho.rho_t[0][0][0] == th);
  CHECK(rho.rho_t[1][0][0] == w * (th - KElem::constant(A, 1)));
  CHECK(rho.rho_t[2][0][0] == -KElem::constant(A, 1));
  auto E = exp_coeffs(rho, 4);
  KFrac e1 = KFrac::of(w * (th - KElem::constant(A, 1))) / KFrac::of(pow(th, 3) - th);
  CHECK(E[1][0][0] == e1);
  CHECK(exp_functional_eq(rho, E));
  CHECK(exp_log_identity(E, log_coeffs(rho, 4)));
}

TEST_CASE("tensor power module") {
  for (int n : {2, 3}) {
    auto rho = carlitz_tensor_module(3, n);
    CHECK(rho.d == n);
    check_tmodule(rho);
    auto E = exp_coeffs(rho, 3);
    CHECK(exp_functional_eq(rho, E));
    CHECK(exp_log_identity(E, log_coeffs(rho, 3)));
  }
}

TEST_CASE("carlitz kernel and log") {
  for (int q : {2, 3}) {
    const std::int64_t N = 150;
    auto rho = carlitz_module(q);
    InfElem pi = carlitz_period(q, N);
    CHECK(val_or_prec(exp_eval(rho, {pi}, N)[0]) >= Rat(N - 15));
    // small argument round trip
    InfElem x = InfElem::theta_pow(pi.F, q, -2) + InfElem::theta_pow(pi.F, q, -5, 1);
    InfElem y = log_eval(rho, exp_eval(rho, {x}, N), N)[0];
    CHECK(agree(x, y, Rat(N - 15)));
  }
}

TEST_CASE("carlitz period lattice") {
  const std::int64_t N = 120;
  for (int q : {2, 3}) {
    auto rho = carlitz_module(q);
    auto L = period_lattice(rho, N);
    REQUIRE(L.basis.size() == 1);
    InfElem pi = carlitz_period(q, N);
    CHECK(L.basis[0][0].val() == Rat(-q, q - 1));
    InfElem r = L.basis[0][0] / pi;
    CHECK(r.val() == Rat(0));
    CHECK(agree(r, InfElem::constant(r.F, q, r.lead_coef(), r.e), Rat(N - 20)));
  }
}

TEST_CASE("anderson generating function telescopes") {
  const std::int64_t N = 120;
  auto rho = carlitz_module(3);
  InfElem pi = carlitz_period(3, N);
  auto G = agf(rho, {pi}, 16, N);
  auto G1 = twist(G, 1, N);
  InfElem th = theta(3);
  for (int n = 1; n < 12; ++n) {
    CAPTURE(n);
    CHECK(agree(G1.a[n], G.a[n - 1] - th * G.a[n], Rat(N - 40)));
  }
  auto Z = agf(rho, {InfElem::zero(pi.F, 3, pi.e)}, 8, N);
  for (auto& c : Z.a) CHECK(c.is_zero());
}

TEST_CASE("de rham pairing") {
  const std::int64_t N = 150;
  auto rho = carlitz_module(3);
  InfElem pi = carlitz_period(3, N);
  InfElem qp = de_rham_pairing(rho, 1, {pi}, N);
  CHECK(val_or_prec(qp + pi) >= Rat(N - 15));
  // linear in the lattice slot over F_q[theta]
  InfElem th = theta(3);
  InfElem qp2 = de_rham_pairing(rho, 1, {th * pi}, N);
  CHECK(agree(qp2, th * qp, Rat(N - 20)));
  CHECK(de_rham_pairing(rho, 1, {InfElem::zero(pi.F, 3, pi.e)}, N).is_zero());
}

TEST_CASE("kummer torsion, lattice and quasi-periods") {
  const std::int64_t N = 100;
  MotiveSetup S = setup_motive(kummer_t_model(3));
  auto rho = kummer_module(S);
  InfElem z = InfElem::zero(rho.wv.F, 3, rho.wv.e);
  CHECK(preimages(rho, z, Rat(30)).size() == 9);
  auto L = period_lattice(rho, N);
  REQUIRE(L.basis.size() == 2);
  for (auto& lam : L.basis) CHECK(val_or_prec(exp_eval(rho, lam, N)[0]) >= Rat(N - 15));
  CHECK(L.basis[0][0].val() != L.basis[1][0].val());
  // the CM action preserves the lattice: w l1 = l2, w l2 = -theta l1
  InfElem wv = rho.wv;
  InfElem l1 = L.basis[0][0], l2 = L.basis[1][0];
  CHECK(agree(wv * l1, l2, Rat(N - 20)));
  CHECK(agree(wv * l2, -(theta(3) * l1), Rat(N - 20)));
  auto R = find_linear_relations({wv * l2, l1, l2}, 1, 10);
  REQUIRE(R.basis.size() == 1);
  CHECK(R.basis[0][1] == FPoly(R.basis[0][1].F, {0, 1}, 'T'));
  auto QP = quasi_period_matrix(rho, L, N);
  CHECK(val_or_prec(mat_det(QP)) < Rat(N / 2));

  CMDivisor Xi{{"xi1", 1}};
  auto M = build_motive(S, solve_shtuka(S, Xi), Xi);
  auto B = motive_basis_change(rho, M);
  CHECK_FALSE(det(B) == KPoly::zero(rho.A));
  auto P = build_psi(rho, L, M, 48, N, Rat(N - 20));
  CHECK(P.report.pass);
  CHECK(P.method == "agf");
}

TEST_CASE("tensor power psi") {
  auto rho = carlitz_tensor_module(3, 2);
  auto M = carlitz_tensor_motive(3, 2);
  auto P = build_psi(rho, Lattice{}, M, 64, 150, Rat(130));
  CHECK(P.report.pass);
  InfElem pi = carlitz_period(3, 160);
  CHECK(agree(P.psi_inv_theta[0][0], pi * pi, Rat(120)));
  CHECK_THROWS_AS(period_lattice(rho, 100), Unsupported);
}
