// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "fcm/errors.hpp"
#include "fcm/relhunt.hpp"
#include "fcm/special.hpp"
#include "fcm/tmodule.hpp"

using namespace fcm;

TEST_CASE("gamma poles") {
  FieldPtr F2 = base_field(2), F3 = base_field(3);
  CHECK_THROWS_AS(geometric_gamma(InfElem::constant(F2, 2, 1), 40), PoleArgument);
  CHECK_THROWS_AS(geometric_gamma(InfElem::zero(F3, 3, 1), 40), PoleArgument);
  InfElem a = -(theta(3) + InfElem::constant(F3, 3, 1));
  CHECK_THROWS_AS(geometric_gamma(a, 40), PoleArgument);
  // theta + 1 is not in -A_+ for q = 3
  CHECK_NOTHROW(geometric_gamma(theta(3) + InfElem::constant(F3, 3, 1), 40));
}

TEST_CASE("gamma near zero") {
  InfElem x = InfElem::theta_pow(base_field(3), 3, -8);
  auto g = geometric_gamma(x, 60);
  CHECK(val_or_prec(g.value * x - InfElem::constant(x.F, 3, 1)) >= Rat(8));
  for (int k : {2, 4, 6}) {
    InfElem y = InfElem::theta_pow(base_field(2), 2, -k);
    auto h = geometric_gamma(y, 40);
    CHECK(val_or_prec(h.value * y - InfElem::constant(y.F, 2, 1)) > Rat(0));
  }
}

TEST_CASE("gamma blocks match enumeration") {
  for (int q : {2, 3}) {
    InfElem x = InfElem::theta_pow(base_field(q), q, -1);
    auto g = geometric_gamma(x, 40);
    CHECK(g.tail_bound > Rat(40));
    InfElem h = geometric_gamma_enumerated(x, 40, g.degree_reached);
    CHECK(diff_val(g.value, h) >= Rat(40));
  }
}

TEST_CASE("gamma reflection certificate") {
  // prod over eps of Gamma(eps x) * e_C(pi x) / pi = -x^(2-q), here -theta
  const int q = 3;
  const std::int64_t N = 100;
  InfElem pi = carlitz_period(q, N);
  InfElem x = InfElem::theta_pow(base_field(q), q, -1);
  InfElem g = geometric_gamma(x, N).value * geometric_gamma(-x, N).value;
  InfElem xl = x.lift(pi.F, pi.e);
  InfElem ex = exp_eval(carlitz_module(q), {pi * xl}, N)[0];
  InfElem R = g.lift(pi.F, pi.e) * ex / pi;
  CHECK(val_or_prec(R + theta(q).lift(pi.F, pi.e)) >= Rat(N - 10));
  auto c = find_algebraic_relation(R, 4, 40);
  REQUIRE(c);
  REQUIRE(c->coeffs.size() == 2);
  CHECK(c->coeffs[1] == FPoly(c->coeffs[1].F, {1}, 'T'));
  CHECK(c->coeffs[0] == FPoly(c->coeffs[0].F, {0, 1}, 'T'));
}
