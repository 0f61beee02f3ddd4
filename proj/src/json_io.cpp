// SPDX-License-Identifier: Apache-2.0
#include "fcm/json_io.hpp"

#include <fstream>

#include "fcm/errors.hpp"

namespace fcm {

json rat_json(const Rat& r) {
  if (r >= kInfVal) return "inf";
  return r.str();
}

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
  std::string s = j.get<std::string>();
  if (s == "inf") return kInfVal;
  auto k = s.find('/');
  if (k == std::string::npos) return Rat(std::stoll(s));
  return Rat(std::stoll(s.substr(0, k)), std::stoll(s.substr(k + 1)));
}

json field_json(const FieldPtr& F) { return {{"p", F->p}, {"n", F->n}, {"modulus", F->modulus}}; }

FieldPtr field_from_json(const json& j) {
  int p = j.at("p"), n = j.at("n");
  if (!is_prime(p) || n < 1) throw InvalidArgument("bad field descriptor");
  FieldPtr S = std_field(p, n);
  if (!j.contains("modulus")) return S;
  auto mod = j.at("modulus").get<std::vector<int>>();
  if (mod == S->modulus) return S;
  return field_with_modulus(p, mod);
}

json elem_json(const Field& F, Elt x) {
  if (F.n == 1) return x;
  auto d = F.digits(x);
  d.resize(static_cast<std::size_t>(F.n), 0);
  return d;
}

Elt elem_from_json(const Field& F, const json& j) {
  if (j.is_number_integer()) {
    long v = j.get<long>();
    if (v < 0 || v >= static_cast<long>(F.Q)) throw InvalidArgument("element out of range");
    return F.from_int(v);
  }
  auto d = j.get<std::vector<int>>();
  for (int x : d)
    if (x < 0 || x >= F.p) throw InvalidArgument("digit out of range");
  return F.from_digits(d);
}

json to_json(const InfElem& x) {
  json c = json::array();
  for (auto& [k, a] : x.terms()) c.push_back({k, elem_json(*x.F, a)});
  json j = {{"q", x.q},
            {"m", x.m()},
            {"modulus", field_json(x.F)},
            {"e", x.e},
            {"leading_exponent", x.v},
            {"coeffs", c}};
  j["prec_N"] = x.exact() ? json(nullptr) : json(x.N);
  return j;
}

InfElem inf_from_json(const json& j) {
  FieldPtr F = field_from_json(j.at("modulus"));
  int q = j.at("q"), e = j.at("e");
  InfElem x = InfElem::zero(F, q, e);
  if (!j.at("prec_N").is_null()) x = InfElem::zero(F, q, e, j.at("prec_N").get<std::int64_t>());
  std::int64_t v = j.at("leading_exponent");
  auto& cs = j.at("coeffs");
  if (cs.empty()) {
    if (!x.exact()) x.v = x.N;
    return x;
  }
  std::int64_t last = cs.back().at(0).get<std::int64_t>();
  x.v = v;
  x.c.assign(static_cast<std::size_t>(last - v + 1), 0);
  for (auto& t : cs) {
    std::int64_t k = t.at(0);
    if (k < v || k > last) throw InvalidArgument("coefficient exponent out of order");
    x.c[static_cast<std::size_t>(k - v)] = elem_from_json(*F, t.at(1));
  }
  x.normalize();
  return x;
}

json to_json(const FPoly& f) {
  json c = json::array();
  for (Elt a : f.c) c.push_back(elem_json(*f.F, a));
  return {{"var", std::string(1, f.var)}, {"field", field_json(f.F)}, {"coeffs", c}};
}

FPoly fpoly_from_json(const json& j) {
  FieldPtr F = field_from_json(j.at("field"));
  std::vector<Elt> c;
  for (auto& a : j.at("coeffs")) c.push_back(elem_from_json(*F, a));
  std::string v = j.value("var", std::string("x"));
  return FPoly(F, c, v.empty() ? 'x' : v[0]);
}

json to_json(const TateSeries& f) {
  json c = json::array();
  for (auto& a : f.a) c.push_back(to_json(a));
  json d = {{"kind", f.decay.kind_name()},
            {"A", rat_json(f.decay.A)},
            {"B", rat_json(f.decay.B)},
            {"base", f.decay.base},
            {"stride", f.decay.stride}};
  return {{"T", f.T()}, {"decay", d}, {"coeffs", c}};
}

TateSeries tate_from_json(const json& j) {
  TateSeries f;
  for (auto& a : j.at("coeffs")) f.a.push_back(inf_from_json(a));
  auto& d = j.at("decay");
  std::string k = d.at("kind");
  Rat A = rat_from_json(d.at("A")), B = rat_from_json(d.at("B"));
  if (k == "linear")
    f.decay = Decay::linear(A, B);
  else if (k == "geometric")
    f.decay = Decay::geometric(A, d.at("base"), B, d.at("stride"));
  else if (k == "finite")
    f.decay = Decay::finite();
  else
    f.decay = Decay::none();
  return f;
}

namespace {

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Rational:
      return "rational";
    case ModelKind::Monogenic:
      return "monogenic";
    default:
      return "const-ext";
  }
}

}  // namespace

json to_json(const CMFieldModel& K) {
  json j = {{"name", K.name}, {"kind", kind_name(K.kind)}, {"q", K.q}, {"field", field_json(K.Fq)}};
  if (K.kind == ModelKind::ConstExt) {
    j["ell"] = K.ell;
    return j;
  }
  json m = json::array();
  for (auto& f : K.m) {
    json c = json::array();
    for (Elt a : f.c) c.push_back(elem_json(*K.Fq, a));
    m.push_back(c);
  }
  j["m"] = m;
  if (K.has_param) j["param"] = {{"tc", elem_json(*K.Fq, K.tc)}, {"tE", K.tE}};
  if (!K.kplus.is_zero()) j["kplus"] = to_json(K.kplus);
  json au = json::array();
  for (auto& a : K.automorphisms) au.push_back(to_json(a));
  j["automorphisms"] = au;
  j["constant_frobenius"] = K.constant_frobenius;
  return j;
}

CMFieldModel model_from_json(const json& j) {
  try {
    std::string kind = j.at("kind");
    int q = j.at("q");
    CMFieldModel K;
    if (kind == "const-ext") {
      K = const_ext_model(q, j.at("ell"));
    } else if (kind == "rational") {
      K = rational_model(q);
    } else if (kind == "monogenic") {
      FieldPtr F = rational_model(q).Fq;
      std::vector<FPoly> m;
      for (auto& c : j.at("m")) {
        std::vector<Elt> cs;
        for (auto& a : c) cs.push_back(elem_from_json(*F, a));
        m.push_back(FPoly(F, cs, 't'));
      }
      K = monogenic_model(j.value("name", std::string("model")), q, m);
      if (j.contains("param")) {
        K.has_param = true;
        K.tc = elem_from_json(*F, j["param"].at("tc"));
        K.tE = j["param"].at("tE");
      }
      if (j.contains("kplus")) K.kplus = fpoly_from_json(j["kplus"]);
      if (j.contains("automorphisms"))
        for (auto& a : j["automorphisms"]) K.automorphisms.push_back(fpoly_from_json(a));
      K.constant_frobenius = j.value("constant_frobenius", false);
    } else {
      throw ModelInvalid("unknown model kind " + kind);
    }
    if (j.contains("name")) K.name = j["name"];
    return K;
  } catch (const json::exception& e) {
    throw ModelInvalid(std::string("model file: ") + e.what());
  }
}

json to_json(const CMDivisor& D) {
  json j = json::object();
  for (auto& [l, m] : D) j[l] = m;
  return j;
}

CMDivisor divisor_from_json(const json& j) {
  CMDivisor D;
  for (auto& [k, v] : j.items()) D[k] = v.get<int>();
  return D;
}

json ring_json(const KRingPtr& A) {
  return {{"field", field_json(A->F)}, {"q", A->q}, {"E", A->E}, {"u", to_json(A->u)}, {"w", A->wname}};
}

json to_json(const KElem& x) {
  json j = json::array();
  for (auto& f : x.c) {
    json c = json::array();
    for (Elt a : f.c) c.push_back(elem_json(*x.R->F, a));
    j.push_back(c);
  }
  return j;
}

json to_json(const KMat& M) {
  json j = json::array();
  for (auto& row : M) {
    json r = json::array();
    for (auto& f : row) {
      json p = json::array();
      for (auto& c : f.c) p.push_back(to_json(c));
      r.push_back(p);
    }
    j.push_back(r);
  }
  return j;
}

namespace {

json twpoly_json(const TwPoly& f) {
  json j = json::array();
  for (auto& C : f) {
    json m = json::array();
    for (auto& row : C) {
      json r = json::array();
      for (auto& x : row) r.push_back(to_json(x));
      m.push_back(r);
    }
    j.push_back(m);
  }
  return j;
}

}  // namespace

json to_json(const TModule& rho) {
  json j = {{"name", rho.name},
            {"q", rho.q},
            {"d", rho.d},
            {"r", rho.r},
            {"ring", ring_json(rho.A)},
            {"w_image", to_json(rho.wv)},
            {"rho_t", twpoly_json(rho.rho_t)}};
  if (!rho.rho_y.empty()) j["rho_y"] = twpoly_json(rho.rho_y);
  return j;
}

json to_json(const DualMotive& M) {
  json div = json::array();
  for (auto& [l, m] : M.pair.divisor) div.push_back({l, m});
  json h = json::array();
  for (auto& f : M.pair.h) {
    json p = json::array();
    for (auto& c : f.c) p.push_back(to_json(c));
    h.push_back(p);
  }
  return {{"model", M.model},
          {"rank", M.rank},
          {"basis", M.basis},
          {"xi", to_json(M.xi)},
          {"ring", ring_json(M.R.A)},
          {"w_image", to_json(M.w)},
          {"shtuka", {{"W", M.pair.W}, {"h", h}, {"ell", M.pair.ell}, {"divisor", div}}},
          {"Phi", to_json(M.Phi)}};
}

json to_json(const RelationCertificate& c) {
  json rel = json::array();
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
    json co = json::array();
    for (Elt a : c.coeffs[i].c) co.push_back(elem_json(*c.coeffs[i].F, a));
    rel.push_back({{"exponents", c.exponents[i]}, {"coeff_theta", co}});
  }
  return {{"relation", rel},
          {"text", c.str()},
          {"residual", rat_json(c.residual)},
          {"precision", rat_json(c.precision)},
          {"bounds", {{"D", c.D}, {"H", c.H}, {"M", c.M}}},
          {"scope", c.scope}};
}

json to_json(const DiffEqReport& r) {
  return {{"pass", r.pass},
          {"min_residual", rat_json(r.min_residual)},
          {"threshold", rat_json(r.threshold)},
          {"window", {r.window_lo, r.window_hi}},
          {"companion", r.used_companion}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

}  // namespace fcm
