// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "fcm/errors.hpp"
#include "fcm/relhunt.hpp"
#include "fcm/special.hpp"

using namespace fcm;

namespace {

InfElem random_value(const FieldPtr& F, int q, int e, std::int64_t lead, std::int64_t N, std::mt19937& g) {
  InfElem x = InfElem::zero(F, q, e, N);
  x.v = lead;
  x.c.resize(static_cast<std::size_t>(N - lead));
  for (auto& c : x.c) c = g() % F->Q;
  x.c[0] = 1 + g() % (F->Q - 1);
  x.normalize();
  return x;
}

FPoly random_poly(const FieldPtr& Fq, int H, std::mt19937& g) {
  std::vector<Elt> c(H + 1);
  for (auto& x : c) x = g() % Fq->Q;
  return FPoly(Fq, c, 'T');
}

InfElem at(const FPoly& f, const InfElem& like) {
  if (f.is_zero()) return InfElem::zero(like.F, like.q, like.e);
  return InfElem::from_poly(f.lift(like.F), like.q, like.e);
}

// rank over F_q of relation vectors, coefficients flattened to degree <= H
int fq_rank(const FieldPtr& K, const std::vector<std::vector<FPoly>>& rels, int H) {
  std::vector<std::vector<Elt>> m;
  for (auto& r : rels) {
    std::vector<Elt> row;
    for (auto& f : r)
      for (int i = 0; i <= H; ++i) row.push_back(f.coef(i));
    m.push_back(row);
  }
  int rank = 0;
  const int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
  for (int c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    int p = rank;
    while (p < static_cast<int>(m.size()) && !m[p][c]) ++p;
    if (p == static_cast<int>(m.size())) continue;
    std::swap(m[p], m[rank]);
    Elt iv = K->inv(m[rank][c]);
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      if (i == rank || !m[i][c]) continue;
      Elt f = K->mul(m[i][c], iv);
      for (int j = 0; j < cols; ++j) m[i][j] = K->sub(m[i][j], K->mul(f, m[rank][j]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("linear relations: planted scaling and duplicates") {
  InfElem pi = carlitz_period(3, 200);
  InfElem th = theta(3);
  auto R = find_linear_relations({pi, th * pi}, 5);
  REQUIRE(R.basis.size() == 5);
  // first basis vector: theta*v1 - v2 after normalization
  CHECK(R.basis[0][0] == FPoly(R.basis[0][0].F, {0, 1}, 'T'));
  CHECK(R.basis[0][1] == FPoly(R.basis[0][1].F, {2}, 'T'));
  for (auto& r : R.residuals) CHECK(r >= R.precision);

  InfElem w = carlitz_period(3, 200) * th + InfElem::constant(th.F, 3, 1);
  auto D = find_linear_relations({pi, pi, w}, 0);
  REQUIRE(D.basis.size() == 1);
  CHECK(D.basis[0][0] == FPoly(D.basis[0][0].F, {1}, 'T'));
  CHECK(D.basis[0][1] == FPoly(D.basis[0][1].F, {2}, 'T'));
  CHECK(D.basis[0][2].is_zero());
}

TEST_CASE("linear relations: ramified element") {
  FieldPtr F9 = std_field(3, 2);
  InfElem one = InfElem::constant(F9, 3, 1, 2);
  InfElem g = InfElem::monomial(F9, 3, F9->exp_gen(2), -1, 2);
  CHECK(find_linear_relations({one, g}, 20).basis.empty());
}

TEST_CASE("insufficient precision") {
  InfElem pi = carlitz_period(3, 30);
  CHECK_THROWS_AS(find_linear_relations({pi, pi * pi, pi * pi * pi}, 40), InsufficientPrecision);
  CHECK_THROWS_AS(find_algebraic_relation(pi, 4, 40), InsufficientPrecision);
}

TEST_CASE("algebraic relations") {
  FieldPtr F9 = std_field(3, 2);
  InfElem g = InfElem::monomial(F9, 3, F9->exp_gen(2), -1, 2);
  auto c = find_algebraic_relation(g, 4, 40);
  REQUIRE(c);
  // X^2 + theta
  REQUIRE(c->coeffs.size() == 3);
  CHECK(c->coeffs[2] == FPoly(c->coeffs[2].F, {1}, 'T'));
  CHECK(c->coeffs[1].is_zero());
  CHECK(c->coeffs[0] == FPoly(c->coeffs[0].F, {0, 1}, 'T'));
  CHECK(c->scope == "within bounds");

  FieldPtr F3 = base_field(3);
  InfElem r = InfElem::from_ratfunc(RatFunc(FPoly(F3, {1, 1}, 'T'), FPoly(F3, {0, 1}, 'T')), 3, 300);
  auto c2 = find_algebraic_relation(r, 4, 40);
  REQUIRE(c2);
  REQUIRE(c2->coeffs.size() == 2);
  // theta X - (theta + 1)
  CHECK(c2->coeffs[1] == FPoly(F3, {0, 1}, 'T'));
  CHECK(c2->coeffs[0] == FPoly(F3, {2, 2}, 'T'));
  CHECK(substitute(*c2, {r}) >= c2->precision);

  InfElem pi = carlitz_period(3, 400);
  CHECK_FALSE(find_algebraic_relation(pi, 4, 40));
}

TEST_CASE("planted relations are recovered") {
  std::mt19937 gen(2024);
  int recovered = 0, spurious = 0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    int q = t % 2 ? 2 : 3;
    int e = t % 3 == 2 ? 2 : 1;
    FieldPtr F = e == 2 ? std_field(q, 2) : base_field(q);
    FieldPtr Fq = base_field(q);
    const int H = 6, k = 3;
    const std::int64_t N = 120 * e;
    std::vector<InfElem> v;
    for (int i = 0; i < k; ++i) v.push_back(random_value(F, q, e, -static_cast<std::int64_t>(gen() % 5), N, gen));
    std::vector<FPoly> c;
    InfElem s = InfElem::zero(F, q, e);
    for (int i = 0; i < k; ++i) {
      c.push_back(random_poly(Fq, H, gen));
      s = s + at(c.back(), v[i]) * v[i];
    }
    REQUIRE_FALSE(s.is_zero());
    auto none = find_linear_relations(v, H);
    spurious += static_cast<int>(none.basis.size());
    v.push_back(s);
    auto R = find_linear_relations(v, H);
    for (auto& r : R.residuals) CHECK(r >= R.precision);
    auto planted = c;
    planted.push_back(FPoly(Fq, {Fq->neg(1)}, 'T'));
    auto with = R.basis;
    with.push_back(planted);
    int rk = fq_rank(Fq, R.basis, H);
    recovered += rk > 0 && rk == fq_rank(Fq, with, H);
  }
  CHECK(spurious == 0);
  CHECK(recovered == trials);
}

TEST_CASE("monotone in precision") {
  FieldPtr F3 = base_field(3);
  InfElem r = InfElem::from_ratfunc(RatFunc(FPoly(F3, {1, 0, 1}, 'T'), FPoly(F3, {2, 1}, 'T')), 3, 150);
  auto a = find_algebraic_relation(r, 2, 10);
  REQUIRE(a);
  InfElem r2 = InfElem::from_ratfunc(RatFunc(FPoly(F3, {1, 0, 1}, 'T'), FPoly(F3, {2, 1}, 'T')), 3, 300);
  auto c = find_algebraic_relation(r2, 2, 10);
  REQUIRE(c);
  CHECK(a->coeffs == c->coeffs);
  CHECK(substitute(*a, {r2}) >= c->precision);
}

TEST_CASE("legendre on carlitz tensor square") {
  InfElem pi = carlitz_period(3, 200);
  auto res = certify_legendre({{pi * pi}}, pi, 2, 4, 40);
  REQUIRE(res.size() == 1);
  REQUIRE(res[0].pass());
  CHECK(res[0].cert->coeffs.size() == 2);
  auto ctl = certify_legendre({{pi}}, pi * pi, 1, 4, 40);
  CHECK_FALSE(ctl[0].pass());
}
