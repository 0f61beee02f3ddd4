// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "fcm/errors.hpp"
#include "fcm/json_io.hpp"
#include "fcm/pipeline.hpp"
#include "fcm/special.hpp"

using namespace fcm;

namespace {

bool same(const InfElem& a, const InfElem& b) {
  return a.F == b.F && a.q == b.q && a.e == b.e && a.v == b.v && a.N == b.N && a.c == b.c;
}

std::string fixture(const std::string& f) { return std::string(FCM_FIXTURE_DIR) + "/" + f; }

}  // namespace

TEST_CASE("InfElem round trip is bit exact") {
  std::mt19937 g(5);
  for (auto [p, n, e] : std::vector<std::tuple<int, int, int>>{{3, 1, 1}, {3, 2, 2}, {2, 3, 1}, {5, 1, 4}}) {
    FieldPtr F = std_field(p, n);
    for (int it = 0; it < 10; ++it) {
      InfElem x = InfElem::zero(F, p, e, 60);
      x.v = -static_cast<std::int64_t>(g() % 7);
      x.c.resize(static_cast<std::size_t>(60 - x.v));
      for (auto& c : x.c) c = g() % F->Q;
      x.c[0] = 1;
      x.normalize();
      json j = to_json(x);
      InfElem y = inf_from_json(j);
      CHECK(same(x, y));
      CHECK(to_json(y).dump() == j.dump());
      CHECK(inf_from_json(json::parse(j.dump())).c == x.c);
    }
    InfElem z = InfElem::zero(F, p, e, 40);
    CHECK(same(z, inf_from_json(to_json(z))));
    InfElem ex = InfElem::theta_pow(F, p, 3, 1, e);
    CHECK(same(ex, inf_from_json(to_json(ex))));
  }
  InfElem pi = carlitz_period(3, 100);
  json j = to_json(pi);
  // (-theta)^{1/2} puts pi over F_9 with e = 2
  CHECK(j.at("e") == 2);
  CHECK(j.at("prec_N") == 200);
  CHECK(j.at("m") == 2);
  CHECK(same(pi, inf_from_json(j)));
}

TEST_CASE("tate series round trip") {
  TateSeries om = omega_series(3, 12, 80);
  TateSeries b = tate_from_json(to_json(om));
  REQUIRE(b.T() == om.T());
  for (int i = 0; i < om.T(); ++i) CHECK(same(om.a[i], b.a[i]));
  CHECK(b.decay.kind == om.decay.kind);
  CHECK(b.decay.A == om.decay.A);
  CHECK(b.decay.base == om.decay.base);
}

TEST_CASE("model fixtures load") {
  for (auto f : {"carlitz.json", "kummer-t-3.json", "kummer-t-5.json", "const-ext-2.json", "quartic-d2.json",
                 "nonsplit-cubic.json"}) {
    CAPTURE(f);
    json j = read_json_file(fixture(f));
    CMFieldModel K = model_from_json(j);
    CHECK(to_json(K).dump() == j.dump());
  }
  CMFieldModel K = model_from_json(read_json_file(fixture("kummer-t-3.json")));
  auto ri = rank_ik0(K, jk_points(K));
  CHECK(ri.lattice_rank == 2);
  CHECK(ri.agree);
  CHECK_FALSE(validate_cm_field(model_from_json(read_json_file(fixture("nonsplit-cubic.json")))).pass);
  CHECK_THROWS_AS(model_from_json(json::parse(R"({"kind": "monogenic", "q": 3})")), ModelInvalid);
  CHECK_THROWS_AS(model_from_json(json::parse(R"({"kind": "elliptic", "q": 3})")), ModelInvalid);
}

TEST_CASE("motive fixtures match a fresh build") {
  json j = read_json_file(fixture("motive-kummer-t-3.json"));
  MotiveSetup S = setup_motive(kummer_t_model(3));
  CMDivisor Xi = divisor_from_json(j.at("results").at("motive").at("xi"));
  CHECK(Xi == CMDivisor{{"xi1", 1}});
  auto M = build_motive(S, solve_shtuka(S, Xi), Xi);
  CHECK(to_json(M).at("Phi") == j.at("results").at("motive").at("Phi"));
  CHECK(j.at("results").at("motive").contains("tmodule"));
}

TEST_CASE("examples and certificates") {
  CHECK(parse_example("kummer-t:5").q == 5);
  CHECK(parse_example("carlitz-tensor:2", 2).n == 2);
  CHECK_THROWS_AS(parse_example("kummer-t:x"), InvalidArgument);
  CHECK_THROWS_AS(parse_example("hyperelliptic"), InvalidArgument);
  FieldPtr F9 = std_field(3, 2);
  auto c = find_algebraic_relation(InfElem::monomial(F9, 3, F9->exp_gen(2), -1, 2), 4, 40);
  REQUIRE(c);
  json cj = to_json(*c);
  CHECK(cj.at("scope") == "within bounds");
  CHECK(cj.at("bounds").at("D") == 4);
  CHECK(cj.at("bounds").at("H") == 40);
  CHECK(cj.contains("residual"));
}

TEST_CASE("pipeline is deterministic") {
  auto a = run_periods(parse_example("kummer-t:3"), 80, 32);
  auto b = run_periods(parse_example("kummer-t:3"), 80, 32);
  REQUIRE(a.symbols.size() == 2);
  for (int i = 0; i < 2; ++i) CHECK(to_json(a.symbols[i].value).dump() == to_json(b.symbols[i].value).dump());
  CHECK(a.fibers.size() == 1);
  CHECK(a.wt == 1);
}

TEST_CASE("values fixture carries the Legendre relation") {
  json j = read_json_file(fixture("values-kummer-t-3.json"));
  std::vector<InfElem> v;
  for (auto& x : j.at("values")) v.push_back(inf_from_json(x));
  REQUIRE(v.size() == 3);
  auto rels = find_polynomial_relations(v, 2, 0);
  REQUIRE(rels.size() == 1);
  CHECK(rels[0].str() == "(1)*X3 + (1)*X1*X2");
  CHECK(substitute(rels[0], v) >= rels[0].precision);
}
