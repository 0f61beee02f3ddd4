// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "fcm/errors.hpp"
#include "fcm/newton.hpp"

using namespace fcm;

namespace {

InfElem th(const FieldPtr& F, int q, std::int64_t k = 1, Elt c = 1) { return InfElem::theta_pow(F, q, k, c); }

InfElem random_elem(std::mt19937_64& rng, const FieldPtr& F, int q, int e, std::int64_t N) {
  InfElem r = InfElem::zero(F, q, e, N);
  std::int64_t v = static_cast<std::int64_t>(rng() % 11) - 5;
  r.v = v;
  r.c.assign(static_cast<std::size_t>(N - v), 0);
  for (auto& x : r.c) x = static_cast<Elt>(rng() % F->Q);
  r.c[0] = 1 + static_cast<Elt>(rng() % (F->Q - 1));
  r.normalize();
  return r;
}

}  // namespace

TEST_CASE("product of (theta+1)(theta-1)") {
  auto F = std_field(3, 1);
  InfElem a = th(F, 3) + InfElem::constant(F, 3, 1);
  InfElem b = th(F, 3) - InfElem::constant(F, 3, 1);
  InfElem r = (a * b).truncate(50);
  InfElem want = (th(F, 3, 2) - InfElem::constant(F, 3, 1)).truncate(50);
  CHECK(agree(r, want));
  CHECK(r.val() == Rat(-2));
}

TEST_CASE("geometric series") {
  auto F = std_field(3, 1);
  InfElem one = InfElem::constant(F, 3, 1);
  InfElem d = one - th(F, 3, -1);
  InfElem r = divide(one, d, 5);
  CHECK(r.N == 5);
  CHECK(r.c.size() == 5);
  for (Elt x : r.c) CHECK(x == 1);
}

TEST_CASE("square of g*theta^(1/2)") {
  auto F9 = std_field(3, 2);
  Elt g = F9->pow(F9->gen(), 2);
  REQUIRE(F9->mul(g, g) == F9->neg(1));
  InfElem x = InfElem::monomial(F9, 3, g, -1, 2);
  InfElem sq = x * x;
  CHECK(agree(sq, -th(std_field(3, 1), 3)));
  CHECK(sq.val() == Rat(-1));
}

TEST_CASE("frobenius examples") {
  auto F3 = std_field(3, 1);
  CHECK(agree(frobenius(th(F3, 3), 1), th(F3, 3, 3)));
  CHECK(agree(frobenius(InfElem::constant(F3, 3, 2), 5), InfElem::constant(F3, 3, 2)));
  auto F9 = std_field(3, 2);
  Elt g = F9->pow(F9->gen(), 2);
  InfElem x = InfElem::monomial(F9, 3, g, -1, 2);
  InfElem fx = frobenius(x, 1);
  CHECK(agree(fx, InfElem::monomial(F9, 3, F9->neg(g), -3, 2)));
  CHECK(agree(frobenius(fx, -1), x));
  CHECK_THROWS_AS(frobenius(th(F3, 3), -1), NotAPower);
  CHECK(agree(frobenius_root(th(F3, 3), 1) * frobenius_root(th(F3, 3), 1) * frobenius_root(th(F3, 3), 1), th(F3, 3)));
}

TEST_CASE("nth root examples") {
  auto F3 = std_field(3, 1);
  CHECK(agree(nth_root(th(F3, 3, 2), 2), th(F3, 3)));
  auto F2 = std_field(2, 1);
  CHECK(agree(nth_root(-th(F2, 2), 1), th(F2, 2)));
  InfElem r = nth_root(-th(F3, 3), 2);
  CHECK(r.e == 2);
  CHECK(r.F->n == 2);
  CHECK(r.F->mul(r.lead_coef(), r.lead_coef()) == r.F->neg(1));
  CHECK(agree(r * r, -th(F3, 3)));
  // canonical: least discrete log among the two square roots
  CHECK(r.F->dlog(r.lead_coef()) < r.F->dlog(r.F->neg(r.lead_coef())));
}

TEST_CASE("nth root of a series") {
  auto F5 = std_field(5, 1);
  InfElem a = (th(F5, 5, 2) + th(F5, 5, 1) + InfElem::constant(F5, 5, 3)).truncate(60);
  for (int n : {2, 3, 4, 5, 10}) {
    InfElem r = nth_root(a, n);
    InfElem back = pow(r, n);
    CHECK(agree(back, a));
    CHECK(back.N >= a.N - 2 * r.e);
  }
}

TEST_CASE("valuation properties on random elements") {
  std::mt19937_64 rng(7);
  auto F = std_field(3, 2);
  for (int it = 0; it < 40; ++it) {
    InfElem a = random_elem(rng, F, 3, 2, 30), b = random_elem(rng, F, 3, 2, 30);
    CHECK((a * b).val() == a.val() + b.val());
    InfElem s = a + b;
    Rat lo = a.val() < b.val() ? a.val() : b.val();
    if (!s.is_zero()) CHECK(s.val() >= lo);
    if (a.val() != b.val()) CHECK(s.val() == lo);
    InfElem fa = frobenius(a + b, 1), fb = frobenius(a, 1) + frobenius(b, 1);
    CHECK(agree(fa, fb));
    CHECK(fa.N == fb.N);
    InfElem ia = inverse(a);
    CHECK(agree(ia * a, InfElem::constant(F, 3, 1, 2)));
  }
}

TEST_CASE("newton_roots examples") {
  auto F3 = std_field(3, 1);
  InfPoly f{th(F3, 3).truncate(80), InfElem::constant(F3, 3, 0), InfElem::constant(F3, 3, 1)};
  auto rs = newton_roots(f);
  REQUIRE(rs.size() == 2);
  for (auto& r : rs) {
    CHECK(r.mult == 1);
    CHECK(r.root.val() == Rat(-1, 2));
    CHECK(agree(r.root * r.root, -th(F3, 3)));
  }
  CHECK(agree(rs[0].root + rs[1].root, InfElem::constant(F3, 3, 0)));

  InfPoly g{-th(F3, 3, 2), InfElem::constant(F3, 3, 0), InfElem::constant(F3, 3, 1)};
  auto rg = newton_roots(g, Rat(40));
  REQUIRE(rg.size() == 2);
  bool plus = false, minus = false;
  for (auto& r : rg) {
    plus |= agree(r.root, th(F3, 3));
    minus |= agree(r.root, -th(F3, 3));
  }
  CHECK(plus);
  CHECK(minus);
}

TEST_CASE("newton_roots reconstructs the polynomial") {
  auto F5 = std_field(5, 1);
  // y^3 + theta y + (theta^2 + 1)
  InfPoly f{(th(F5, 5, 2) + InfElem::constant(F5, 5, 1)).truncate(60), th(F5, 5).truncate(60),
            InfElem::constant(F5, 5, 0), InfElem::constant(F5, 5, 1)};
  auto rs = newton_roots(f);
  int tot = 0;
  for (auto& r : rs) {
    tot += r.mult;
    CHECK(eval(f, r.root).is_zero());
  }
  CHECK(tot == 3);
  // prod (y - r) against f coefficientwise
  InfPoly prod{InfElem::constant(F5, 5, 1)};
  for (auto& r : rs) {
    InfPoly nx(prod.size() + 1, InfElem::constant(F5, 5, 0));
    for (std::size_t i = 0; i < prod.size(); ++i) {
      nx[i + 1] = nx[i + 1] + prod[i];
      nx[i] = nx[i] - prod[i] * r.root;
    }
    prod = nx;
  }
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(diff_val(prod[i], f[i]) >= Rat(60 - 10));
}

TEST_CASE("exact repeated root in characteristic 2") {
  auto F2 = std_field(2, 1);
  InfPoly f{th(F2, 2, 2), InfElem::constant(F2, 2, 0), InfElem::constant(F2, 2, 1)};
  auto rs = newton_roots(f);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].mult == 2);
  CHECK(agree(rs[0].root, th(F2, 2)));
}

TEST_CASE("division by apparent zero") {
  auto F3 = std_field(3, 1);
  InfElem z = InfElem::zero(F3, 3, 1, 10);
  CHECK_THROWS_AS(InfElem::constant(F3, 3, 1) / z, DivisionByApparentZero);
}
