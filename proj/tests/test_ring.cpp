// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "fcm/errors.hpp"
#include "fcm/ring.hpp"
#include "fcm/special.hpp"

using namespace fcm;

namespace {

// A = F_3[theta][w] / (w^2 + theta)
KRingPtr kummer_ring() {
  FieldPtr F = base_field(3);
  return make_kring(F, 3, 2, FPoly(F, {0, 2}, 'T'));
}

KElem rand_elem(const KRingPtr& R, std::mt19937& g) {
  KElem x = KElem::zero(R);
  for (int j = 0; j < R->E; ++j) {
    std::vector<Elt> c;
    for (int i = 0; i < 3; ++i) c.push_back(g() % 3);
    x = x + KElem::from_poly(R, FPoly(R->F, c, 'T')) * (j ? KElem::w(R) : KElem::constant(R, 1));
  }
  return x;
}

}  // namespace

TEST_CASE("w relation and twist") {
  auto R = kummer_ring();
  KElem w = KElem::w(R), th = KElem::theta(R);
  CHECK(w * w == -th);
  // w^(q) = w * w^2 = -theta w
  CHECK(twist(w, 1) == -(th * w));
  CHECK(twist(th, 2) == pow(th, 9));
  std::mt19937 g(7);
  for (int it = 0; it < 20; ++it) {
    KElem x = rand_elem(R, g), y = rand_elem(R, g);
    CHECK(twist(x * y, 1) == twist(x, 1) * twist(y, 1));
    CHECK(twist(x + y, 1) == twist(x, 1) + twist(y, 1));
    CHECK(twist(x, 1) == pow(x, 3));
  }
}

TEST_CASE("norm and exact division") {
  auto R = kummer_ring();
  std::mt19937 g(11);
  for (int it = 0; it < 20; ++it) {
    KElem x = rand_elem(R, g), y = rand_elem(R, g);
    if (x.is_zero() || y.is_zero()) continue;
    KElem cof = KElem::zero(R);
    FPoly n = norm(x, &cof);
    CHECK(x * cof == KElem::from_poly(R, n));
    KElem z = KElem::zero(R);
    REQUIRE(exact_div(x * y, y, z));
    CHECK(z == x);
    KFrac f = KFrac::of(x) / KFrac::of(y);
    CHECK(f * KFrac::of(y) == KFrac::of(x));
    CHECK(twist(f, 1) * twist(KFrac::of(y), 1) == twist(KFrac::of(x), 1));
  }
  KElem z = KElem::zero(R);
  CHECK_FALSE(exact_div(KElem::constant(R, 1), KElem::theta(R), z));
}

TEST_CASE("embedding into Laurent series") {
  auto R = kummer_ring();
  FieldPtr F9 = std_field(3, 2);
  // w = i * theta^{1/2}
  InfElem wv = InfElem::monomial(F9, 3, F9->exp_gen(2), -1, 2);
  CHECK(agree(to_inf(KElem::w(R) * KElem::w(R), wv), -InfElem::theta_pow(F9, 3, 1, 1, 2)));
  std::mt19937 g(3);
  for (int it = 0; it < 10; ++it) {
    KElem x = rand_elem(R, g), y = rand_elem(R, g);
    CHECK(agree(to_inf(x * y, wv), to_inf(x, wv) * to_inf(y, wv)));
    if (y.is_zero()) continue;
    InfElem d = to_inf(KFrac::of(x) / KFrac::of(y), wv, 40);
    CHECK(agree(d * to_inf(y, wv), to_inf(x, wv), Rat(30)));
  }
}

TEST_CASE("polynomials in t") {
  auto R = kummer_ring();
  KPoly f = KPoly::t_minus_theta(R);
  KPoly g = pow(f, 3) * KPoly::t(R);
  CHECK(ord_theta(g) == 3);
  CHECK(div_t_minus_theta(g, 3) == KPoly::t(R));
  CHECK_THROWS_AS(div_t_minus_theta(g, 4), ConsistencyFailure);
  KPoly h = taylor_at_theta(g);
  CHECK(h.coef(0).is_zero());
  CHECK(h.coef(3) == KElem::theta(R));
  KMat M = {{f, KPoly::constant(KElem::constant(R, 1))}, {KPoly::zero(R), f}};
  CHECK(det(M) == pow(f, 2));
  CHECK(det(M * M) == pow(f, 4));
  CHECK(rank_over_frac({{KElem::w(R), KElem::theta(R)}, {-KElem::theta(R), KElem::w(R) * KElem::theta(R)}}) == 1);
}
