// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "fcm/errors.hpp"
#include "fcm/field.hpp"
#include "fcm/fpoly.hpp"

using namespace fcm;

TEST_CASE("prime field basics") {
  auto F = std_field(5, 1);
  CHECK(F->Q == 5);
  CHECK(F->gen() == 2);
  CHECK(F->mul(3, 4) == 2);
  CHECK(F->inv(2) == 3);
  CHECK(F->neg(1) == 4);
  for (Elt a = 1; a < 5; ++a) CHECK(F->exp_gen(F->dlog(a)) == a);
}

TEST_CASE("F_9 generator and frobenius") {
  auto F = std_field(3, 2);
  Elt g = F->gen();
  // g^4 = -1 so g^2 squares to -1 and g^3 = -g^{-1}... check via pow
  CHECK(F->pow(g, 8) == 1);
  CHECK(F->pow(g, 4) == F->neg(1));
  Elt i = F->pow(g, 2);
  CHECK(F->mul(i, i) == F->neg(1));
  // i^3 = -i
  CHECK(F->frob(i, 1) == F->neg(i));
  CHECK(F->frob(F->frob(i, 1), -1) == i);
}

TEST_CASE("field axioms on small fields") {
  for (auto [p, n] : {std::pair{2, 3}, {3, 2}, {5, 2}, {2, 4}, {7, 1}, {3, 3}}) {
    auto F = std_field(p, n);
    for (Elt a = 0; a < F->Q; a += 1 + F->Q / 17)
      for (Elt b = 0; b < F->Q; b += 1 + F->Q / 13) {
        CHECK(F->sub(F->add(a, b), b) == a);
        if (b) CHECK(F->mul(F->div(a, b), b) == a);
        Elt c = F->add(a, 1);
        CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
      }
  }
}

TEST_CASE("poly-kind field matches table arithmetic via embedding") {
  auto F = std_field(2, 13);
  CHECK(F->kind == Field::Kind::Poly);
  Elt x = 5345, y = 777;
  CHECK(F->mul(F->div(x, y), y) == x);
  CHECK(F->pow(x, F->Q - 1) == 1);
  CHECK(F->exp_gen(F->dlog(x)) == x);
}

TEST_CASE("standard embeddings are compatible") {
  auto F3 = std_field(3, 1), F9 = std_field(3, 2), F81 = std_field(3, 4);
  for (Elt a = 0; a < 9; ++a) {
    Elt direct = embed(F9, F81, a);
    Elt two = embed(F9, F81, a);
    CHECK(direct == two);
    Elt back = 0;
    CHECK(restrict_to(F81, F9, direct, back));
    CHECK(back == a);
  }
  for (Elt a = 0; a < 3; ++a) CHECK(embed(F3, F81, a) == embed(F9, F81, embed(F3, F9, a)));
  // embedding is a ring map
  for (Elt a = 1; a < 9; ++a)
    for (Elt b = 1; b < 9; ++b)
      CHECK(embed(F9, F81, F9->mul(a, b)) == F81->mul(embed(F9, F81, a), embed(F9, F81, b)));
}

TEST_CASE("roots of y^2 + 1 over F_3 lie in F_9") {
  auto F3 = std_field(3, 1);
  FPoly f(F3, {1, 0, 1}, 'y');
  auto r = all_roots(f);
  REQUIRE(r.size() == 2);
  CHECK(r[0].field->n == 2);
  auto F9 = r[0].field;
  CHECK(F9->mul(r[0].root, r[0].root) == F9->neg(1));
  CHECK(F9->add(r[0].root, r[1].root) == 0);
  CHECK(F9->dlog(r[0].root) < F9->dlog(r[1].root));
}

TEST_CASE("polynomial gcd and roots with multiplicity") {
  auto F = std_field(5, 1);
  FPoly a(F, {4, 1});  // x - 1
  FPoly b(F, {3, 1});  // x - 2
  FPoly f = a * a * b;
  auto r = poly_roots_in_ext(f, F, true);
  REQUIRE(r.size() == 2);
  CHECK(r[0].first == 1);
  CHECK(r[0].second == 2);
  CHECK(r[1].second == 1);
  CHECK(gcd(f, a * b * b) == (a * b).monic());
  FPoly irr(F, {2, 0, 1});  // x^2 + 2 has no root in F_5
  CHECK_THROWS_AS(poly_roots_in_ext(irr, F, true), TargetTooSmall);
}

TEST_CASE("rational functions normalize") {
  auto F = std_field(3, 1);
  FPoly t = FPoly::x(F, 't');
  RatFunc r(t * t - FPoly::constant(F, 1, 't'), t - FPoly::constant(F, 1, 't'));
  CHECK(r.den.deg() == 0);
  CHECK(r.num == t + FPoly::constant(F, 1, 't'));
  RatFunc s = r / RatFunc(t);
  CHECK((s * RatFunc(t)) == r);
  CHECK(frobenius_power(RatFunc(t), 1) == RatFunc(t * t * t));
}
