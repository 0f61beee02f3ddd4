// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fcm/errors.hpp"
#include "fcm/json_io.hpp"
#include "fcm/pipeline.hpp"
#include "fcm/special.hpp"

using namespace fcm;

namespace {

struct Opts {
  int q = 3;
  std::int64_t prec = 200;
  int trunc = 64;
  int deg = 4, height = 40, margin = 20;
  bool json_out = false, timing = false, require_pass = false, control = false, reflection = false;
  std::string out, example, model, xi, x, values, label;
  int index = 0;
};

struct CertFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json conventions() {
  return {{"uniformizer", "u = theta^(-1/e), coefficients indexed by u-exponent"},
          {"pitilde", "1/Omega(theta), Omega normalized by (-theta)^(-q/(q-1)) with the canonical root"},
          {"points", "J_K points sorted by discrete log of the leading coefficient of nu(y)"},
          {"basis", "monomials 1, y, y^2, ... (component idempotents for constant extensions)"},
          {"symbols", "eigendifferential applied to row 0 of Psi^{-1}(theta)"}};
}

json config(const Opts& o, const std::string& cmd) {
  json c = {{"q", o.q}, {"prec", o.prec}, {"trunc", o.trunc}, {"conventions", conventions()}};
  if (cmd == "legendre" || cmd == "relhunt" || (cmd == "gamma" && o.reflection)) c["bounds"] = {{"D", o.deg}, {"H", o.height}, {"M", o.margin}};
  if (!o.example.empty()) c["example"] = o.example;
  if (!o.model.empty()) c["model_file"] = o.model;
  return c;
}

struct Report {
  std::string command;
  json cfg, results = json::object(), certs = json::array();
  std::vector<std::string> text;
  double ms = 0;
};

void emit(const Opts& o, Report& r) {
  json j = {{"command", r.command}, {"config", r.cfg}, {"results", r.results}, {"certificates", r.certs}};
  if (o.timing) j["timing_ms"] = r.ms;
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw InvalidArgument("cannot write " + o.out);
    f << j.dump(2) << "\n";
  }
  if (o.json_out) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto& l : r.text) std::cout << l << "\n";
  }
}

CMFieldModel load_model(const Opts& o) {
  if (!o.model.empty()) return model_from_json(read_json_file(o.model));
  if (!o.example.empty()) return example_model(parse_example(o.example, o.q));
  throw InvalidArgument("need --model or --example");
}

CMDivisor parse_divisor(const std::string& s) {
  CMDivisor D;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto k = item.find(':');
    std::string l = item.substr(0, k);
    int m = 1;
    if (k != std::string::npos) {
      try {
        m = std::stoi(item.substr(k + 1));
      } catch (const std::exception&) {
        throw InvalidArgument("bad multiplicity in " + item);
      }
    }
    if (l.empty()) throw InvalidArgument("empty point label");
    D[l] += m;
  }
  return D;
}

// polynomial in T (or theta) with integer coefficients reduced into F_q
FPoly parse_poly(const FieldPtr& F, std::string s) {
  std::string t;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  for (std::size_t k; (k = t.find("theta")) != std::string::npos;) t.replace(k, 5, "T");
  while (t.size() > 1 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  if (t.empty()) throw InvalidArgument("empty expression");
  std::vector<long> c;
  std::size_t i = 0;
  while (i < t.size()) {
    int sign = 1;
    if (t[i] == '+' || t[i] == '-') sign = t[i++] == '-' ? -1 : 1;
    long coef = 1;
    bool has = false;
    std::size_t j = i;
    while (j < t.size() && isdigit(static_cast<unsigned char>(t[j]))) ++j;
    if (j > i) {
      coef = std::stol(t.substr(i, j - i));
      has = true;
      i = j;
    }
    int deg = 0;
    if (i < t.size() && t[i] == '*') ++i;
    if (i < t.size() && (t[i] == 'T' || t[i] == 't')) {
      ++i;
      deg = 1;
      if (i < t.size() && t[i] == '^') {
        ++i;
        j = i;
        while (j < t.size() && isdigit(static_cast<unsigned char>(t[j]))) ++j;
        if (j == i) throw InvalidArgument("bad exponent in " + s);
        deg = std::stoi(t.substr(i, j - i));
        i = j;
      }
    } else if (!has) {
      throw InvalidArgument("cannot parse " + s);
    }
    if (static_cast<int>(c.size()) <= deg) c.resize(deg + 1, 0);
    c[deg] += sign * coef;
    if (i < t.size() && t[i] != '+' && t[i] != '-') throw InvalidArgument("cannot parse " + s);
  }
  std::vector<Elt> e;
  for (long v : c) e.push_back(F->from_int(((v % F->p) + F->p) % F->p));
  return FPoly(F, e, 'T');
}

RatFunc parse_ratfunc(const FieldPtr& F, const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '/' && depth == 0) {
      FPoly d = parse_poly(F, s.substr(i + 1));
      if (d.is_zero()) throw InvalidArgument("zero denominator");
      return RatFunc(parse_poly(F, s.substr(0, i)), d);
    }
  }
  return RatFunc(parse_poly(F, s));
}

std::string vstr(const Rat& r) { return r >= kInfVal ? "inf" : r.str(); }

void cmd_pitilde(const Opts& o, Report& r) {
  InfElem pi = carlitz_period(o.q, o.prec);
  InfElem prod = pitilde_product(o.q, o.prec);
  Rat res = diff_val(pi, prod);
  r.cfg["moduli"] = {field_json(pi.F)};
  r.results = {{"pitilde", to_json(pi)}, {"dual_formula_residual", rat_json(res)}};
  r.text = {"pitilde = " + pi.str(), "dual formula residual = " + vstr(res)};
}

void cmd_omega(const Opts& o, Report& r) {
  TateMatrix Psi = omega_psi(o.q, o.trunc, o.prec);
  const TateSeries& om = Psi.at(0, 0);
  TateMatrix Phi = TateMatrix::make(1, 1);
  InfElem th = theta(o.q).lift(om.a[0].F, om.a[0].e);
  Phi.at(0, 0) = TateSeries::poly({-th, InfElem::constant(th.F, o.q, 1, th.e)});
  auto rep = check_difference_eq(Phi, Psi, Rat(o.prec - 10));
  r.cfg["moduli"] = {field_json(om.a[0].F)};
  r.results = {{"omega", to_json(om)}, {"difference_eq", to_json(rep)}};
  r.text = {"Omega[0] = " + om.a[0].str(), "difference equation: " + rep.str()};
}

void cmd_gamma(const Opts& o, Report& r) {
  FieldPtr F = base_field(o.q);
  RatFunc f = parse_ratfunc(F, o.x);
  InfElem x = InfElem::from_ratfunc(f, o.q, o.prec);
  GammaResult g = geometric_gamma(x, o.prec);
  r.cfg["x"] = o.x;
  r.cfg["moduli"] = {field_json(F)};
  r.results = {{"x", to_json(x)},
               {"gamma", to_json(g.value)},
               {"degree_reached", g.degree_reached},
               {"tail_bound", rat_json(g.tail_bound)}};
  r.text = {"Gamma(" + o.x + ") = " + g.value.str(), "blocks through degree " + std::to_string(g.degree_reached - 1)};
  if (!o.reflection) return;
  auto rf = gamma_reflection(x, o.prec, o.deg, o.height, o.margin);
  r.results["reflection_ratio"] = to_json(rf.ratio);
  if (rf.cert) r.certs.push_back(to_json(*rf.cert));
  r.text.push_back("prod Gamma(eps x) * e_C(pitilde x) / pitilde: " +
                   (rf.cert ? "PASS " + rf.cert->str() : std::string("NONE within bounds")));
  if (!rf.cert && o.require_pass) throw CertFailure("no reflection certificate within bounds");
}

json point_json(const CMPoint& p) {
  json j = {{"label", p.label}, {"fiber", p.fiber}, {"component", p.component}};
  if (p.nu_y) j["nu_y"] = to_json(*p.nu_y);
  return j;
}

void cmd_cm(const std::string& sub, const Opts& o, Report& r) {
  CMFieldModel K = load_model(o);
  r.cfg["model"] = to_json(K);
  if (sub == "validate") {
    auto v = validate_cm_field(K);
    r.results = {{"pass", v.pass}, {"kplus_degree", v.kplus_degree}, {"places", v.places.size()}, {"message", v.message}};
    r.text = {std::string("validate: ") + (v.pass ? "PASS" : "FAIL") + " " + v.message};
    if (!v.pass) {
      emit(o, r);
      throw ModelInvalid(v.message);
    }
    return;
  }
  auto pts = jk_points(K);
  if (sub == "points") {
    json a = json::array();
    for (auto& p : pts) {
      a.push_back(point_json(p));
      r.text.push_back(p.label + " fiber " + std::to_string(p.fiber) + (p.nu_y ? " nu(y) = " + p.nu_y->str(4) : ""));
    }
    r.results = {{"points", a}};
  } else if (sub == "rank") {
    auto ri = rank_ik0(K, pts);
    r.results = {{"rank", ri.lattice_rank}, {"formula", rat_json(ri.formula)}, {"agree", ri.agree}};
    r.text = {"rank " + std::to_string(ri.lattice_rank) + ", formula " + ri.formula.str() +
              (ri.agree ? " (agree)" : " (DISAGREE)")};
    if (o.require_pass && !ri.agree) throw CertFailure("rank formula mismatch");
  } else if (sub == "xi0") {
    std::string l = o.label.empty() ? pts.at(0).label : o.label;
    auto c = nondegenerate_xi0(K, l, pts);
    r.results = {{"xi0", to_json(c.xi0)},
                 {"rank", c.rank},
                 {"rank_ik0", c.rank_ik0},
                 {"generalized_cm_type", c.generalized_cm_type},
                 {"nondegenerate", c.nondegenerate}};
    std::string d;
    for (auto& [k, m] : c.xi0) d += (d.empty() ? "" : " + ") + std::to_string(m) + "*" + k;
    r.text = {"Xi0 = " + d, "orbit rank " + std::to_string(c.rank) + " of " + std::to_string(c.rank_ik0)};
    if (o.require_pass && !c.nondegenerate) throw CertFailure("Xi0 degenerate");
  } else {
    throw InvalidArgument("unknown cm subcommand " + sub);
  }
}

void cmd_shtuka(const std::string& sub, const Opts& o, Report& r) {
  CMFieldModel K = load_model(o);
  CMDivisor Xi;
  if (!o.xi.empty())
    Xi = parse_divisor(o.xi);
  else if (!o.example.empty())
    Xi = default_divisor(parse_example(o.example, o.q));
  else
    throw InvalidArgument("need --xi");
  MotiveSetup S = setup_motive(K);
  auto M = build_motive(S, solve_shtuka(S, Xi), Xi);
  r.cfg["model"] = to_json(K);
  r.cfg["xi"] = to_json(Xi);
  r.cfg["moduli"] = {field_json(M.R.A->F)};
  auto d = check_det(M);
  bool sig = sigma_ideal_check(M, Xi);
  auto hp = hodge_pink_weights(M), ex = expected_weights(M);
  json checks = {{"det", d.str()}, {"det_ok", d.ok}, {"sigma_ideal", sig}, {"weights", hp}, {"expected_weights", ex}};
  if (sub == "build") {
    json mj = to_json(M);
    if (!o.example.empty()) {
      auto ex2 = parse_example(o.example, o.q);
      if (ex2.kind == Example::Kind::Kummer && Xi == default_divisor(ex2)) mj["tmodule"] = to_json(kummer_module(S));
      if (ex2.kind == Example::Kind::Carlitz) mj["tmodule"] = to_json(carlitz_module(ex2.q));
      if (ex2.kind == Example::Kind::CarlitzTensor) mj["tmodule"] = to_json(carlitz_tensor_module(ex2.q, ex2.n));
    }
    r.results = {{"motive", mj}, {"checks", checks}};
    r.text = {"Phi = " + str(M.Phi), d.str()};
  } else if (sub == "check") {
    bool ok = d.ok && sig && hp == ex;
    r.results = {{"checks", checks}, {"pass", ok}};
    r.text = {d.str(), std::string("sigma ideal: ") + (sig ? "PASS" : "FAIL"),
              std::string("weights: ") + (hp == ex ? "PASS" : "FAIL")};
    if (o.require_pass && !ok) throw CertFailure("motive checks failed");
  } else {
    throw InvalidArgument("unknown shtuka subcommand " + sub);
  }
}

Example need_example(const Opts& o) {
  if (o.example.empty()) throw InvalidArgument("need --example");
  return parse_example(o.example, o.q);
}

void cmd_periods(const Opts& o, Report& r) {
  auto run = run_periods(need_example(o), o.prec, o.trunc);
  r.cfg["moduli"] = {field_json(run.pitilde.F), field_json(run.rho.A->F)};
  json lat = json::array();
  for (std::size_t i = 0; i < run.lattice.basis.size(); ++i) {
    json v = json::array();
    for (auto& x : run.lattice.basis[i]) v.push_back(to_json(x));
    lat.push_back({{"lambda", v}, {"depth", run.lattice.depth[i]}, {"exp_residual", rat_json(run.lattice.exp_residual[i])}});
    r.text.push_back("lambda" + std::to_string(i + 1) + " = " + run.lattice.basis[i][0].str(4));
  }
  json sy = json::array();
  for (auto& s : run.symbols) {
    sy.push_back({{"label", s.label}, {"value", to_json(s.value)}});
    r.text.push_back("p(" + s.label + ") = " + s.value.str(4));
  }
  r.results = {{"lattice", lat}, {"psi_method", run.psi.method}, {"difference_eq", to_json(run.psi.report)}, {"symbols", sy}};
  r.text.push_back("Psi: " + run.psi.report.str());
}

void cmd_agf(const Opts& o, Report& r) {
  Example ex = need_example(o);
  auto run = run_periods(ex, o.prec, o.trunc);
  if (o.index < 0 || o.index >= static_cast<int>(run.lattice.basis.size()))
    throw InvalidArgument("lattice index out of range");
  auto G = agf(run.rho, run.lattice.basis[o.index], o.trunc, o.prec);
  r.results = {{"index", o.index}, {"agf", to_json(G)}};
  r.text = {"G[0] = " + G.a[0].str(4), "decay " + G.decay.kind_name()};
}

void cmd_qp(const Opts& o, Report& r) {
  auto run = run_periods(need_example(o), o.prec, o.trunc);
  if (run.rho.d != 1) throw Unsupported("quasi-periods need a Drinfeld module");
  auto Q = quasi_period_matrix(run.rho, run.lattice, o.prec);
  json m = json::array();
  for (auto& row : Q) {
    json rr = json::array();
    for (auto& x : row) rr.push_back(to_json(x));
    m.push_back(rr);
  }
  Rat dv = val_or_prec(mat_det(Q));
  r.results = {{"matrix", m}, {"det_valuation", rat_json(dv)}, {"nondegenerate", dv < Rat(o.prec) }};
  for (auto& row : Q) {
    std::string s;
    for (auto& x : row) s += x.str(3) + "   ";
    r.text.push_back(s);
  }
  r.text.push_back("det valuation " + vstr(dv));
}

json legendre_json(const std::vector<LegendreResult>& L) {
  json a = json::array();
  for (auto& x : L) {
    json j = {{"ratio", to_json(x.ratio)}, {"pitilde_exponent", rat_json(x.pitilde_exponent)}, {"pass", x.pass()}};
    j["certificate"] = x.cert ? to_json(*x.cert) : json("NONE");
    a.push_back(j);
  }
  return a;
}

void cmd_legendre(const Opts& o, Report& r) {
  auto run = run_periods(need_example(o), o.prec, o.trunc);
  auto L = legendre(run, o.deg, o.height, o.margin);
  r.cfg["moduli"] = {field_json(run.pitilde.F), field_json(run.rho.A->F)};
  r.results = {{"weight", run.wt}, {"fibers", legendre_json(L)}, {"difference_eq", to_json(run.psi.report)}};
  bool all = true;
  for (std::size_t i = 0; i < L.size(); ++i) {
    all = all && L[i].pass();
    if (L[i].cert) r.certs.push_back(to_json(*L[i].cert));
    r.text.push_back("fiber " + std::to_string(i) + ": " + (L[i].cert ? "PASS " + L[i].cert->str() : "NONE") +
                     " (within bounds D=" + std::to_string(o.deg) + " H=" + std::to_string(o.height) + ")");
  }
  if (o.control) {
    auto C = legendre_control(run, o.deg, o.height, o.margin);
    r.results["control"] = legendre_json(C);
    for (auto& c : C) r.text.push_back(std::string("control: ") + (c.cert ? c.cert->str() : "NONE"));
  }
  if (o.require_pass && !all) throw CertFailure("Legendre certificate not found within bounds");
}

void cmd_relhunt(const Opts& o, Report& r) {
  if (o.values.empty()) throw InvalidArgument("need --values");
  json j = read_json_file(o.values);
  if (j.is_object()) j = j.at("values");
  std::vector<InfElem> v;
  for (auto& x : j) v.push_back(inf_from_json(x));
  if (v.empty()) throw InvalidArgument("no values in " + o.values);
  r.cfg["values_file"] = o.values;
  r.cfg["moduli"] = {field_json(v[0].F)};
  std::vector<RelationCertificate> found;
  if (v.size() == 1) {
    auto c = find_algebraic_relation(v[0], o.deg, o.height, o.margin);
    if (c) found.push_back(*c);
  } else {
    found = find_polynomial_relations(v, o.deg, o.height, o.margin);
  }
  for (auto& c : found) {
    r.certs.push_back(to_json(c));
    r.text.push_back(c.str() + " = 0  residual " + vstr(c.residual) + " (within bounds)");
  }
  r.results = {{"count", found.size()}};
  if (found.empty()) r.text.push_back("NONE within bounds");
  if (o.require_pass && found.empty()) throw CertFailure("no relation within bounds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"function-field CM periods and relation certificates"};
  app.require_subcommand(1);
  Opts o;
  auto common = [&](CLI::App* s) {
    s->add_option("--q", o.q, "field size");
    s->add_option("--prec", o.prec, "precision in valuation units");
    s->add_option("--trunc", o.trunc, "t-truncation");
    s->add_flag("--json", o.json_out, "print JSON");
    s->add_option("--out", o.out, "write JSON report");
    s->add_flag("--timing", o.timing, "include timing in the report");
  };
  auto fixture = [&](CLI::App* s) {
    s->add_option("--example", o.example, "carlitz | carlitz-tensor:n | kummer-t:q | const-ext:l");
    s->add_option("--model", o.model, "model JSON file");
  };
  auto bounds = [&](CLI::App* s) {
    s->add_option("--deg", o.deg, "degree bound D");
    s->add_option("--height", o.height, "theta-degree bound H");
    s->add_option("--margin", o.margin, "margin M");
    s->add_flag("--require-pass", o.require_pass, "exit 4 when no certificate");
  };
  auto* pit = app.add_subcommand("pitilde", "Carlitz period");
  common(pit);
  auto* om = app.add_subcommand("omega", "Omega series and its difference equation");
  common(om);
  auto* ga = app.add_subcommand("gamma", "geometric gamma value");
  common(ga);
  ga->add_option("--x", o.x, "argument, e.g. 1/T")->required();
  ga->add_flag("--reflection", o.reflection, "certify the reflection product against pitilde");
  ga->add_option("--deg", o.deg, "relation degree bound");
  ga->add_option("--height", o.height, "coefficient degree bound");
  ga->add_option("--margin", o.margin, "verification margin");
  ga->add_flag("--require-pass", o.require_pass, "exit 4 without a certificate");
  auto* cm = app.add_subcommand("cm", "CM field data");
  std::string cm_sub, sh_sub;
  cm->add_option("action", cm_sub, "validate | points | rank | xi0")->required();
  common(cm);
  fixture(cm);
  cm->add_option("--label", o.label, "point for xi0");
  cm->add_flag("--require-pass", o.require_pass, "exit 4 on failed check");
  auto* sh = app.add_subcommand("shtuka", "shtuka function and dual motive");
  sh->add_option("action", sh_sub, "build | check")->required();
  common(sh);
  fixture(sh);
  sh->add_option("--xi", o.xi, "CM type, e.g. xi1:1,xi2:1");
  sh->add_flag("--require-pass", o.require_pass, "exit 4 on failed check");
  auto* pe = app.add_subcommand("periods", "period lattice, Psi and period symbols");
  common(pe);
  fixture(pe);
  auto* ag = app.add_subcommand("agf", "Anderson generating function");
  common(ag);
  fixture(ag);
  ag->add_option("--index", o.index, "lattice basis index");
  auto* qp = app.add_subcommand("qp", "quasi-period matrix");
  common(qp);
  fixture(qp);
  auto* le = app.add_subcommand("legendre", "certify Legendre relations");
  common(le);
  fixture(le);
  bounds(le);
  le->add_flag("--control", o.control, "also run the single-symbol control");
  auto* rh = app.add_subcommand("relhunt", "relations among values");
  common(rh);
  bounds(rh);
  rh->add_option("--values", o.values, "JSON file with values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto* sub = app.get_subcommands().front();
  Report r;
  r.command = sub->get_name();
  if (r.command == "cm") r.command += " " + cm_sub;
  if (r.command == "shtuka") r.command += " " + sh_sub;
  r.cfg = config(o, sub->get_name());
  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    const std::string n = sub->get_name();
    if (o.prec <= 0 || o.trunc <= 0 || o.deg < 1 || o.height < 0 || o.margin < 0)
      throw InvalidArgument("bounds must be positive");
    if (n == "pitilde")
      cmd_pitilde(o, r);
    else if (n == "omega")
      cmd_omega(o, r);
    else if (n == "gamma")
      cmd_gamma(o, r);
    else if (n == "cm")
      cmd_cm(cm_sub, o, r);
    else if (n == "shtuka")
      cmd_shtuka(sh_sub, o, r);
    else if (n == "periods")
      cmd_periods(o, r);
    else if (n == "agf")
      cmd_agf(o, r);
    else if (n == "qp")
      cmd_qp(o, r);
    else if (n == "legendre")
      cmd_legendre(o, r);
    else if (n == "relhunt")
      cmd_relhunt(o, r);
  } catch (const CertFailure& e) {
    code = 4;
    r.results["failure"] = e.what();
    r.text.push_back(std::string("FAIL: ") + e.what());
  } catch (const ModelInvalid& e) {
    std::cerr << e.what() << "\n";
    return 5;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    const std::string& k = e.kind();
    if (k == "InvalidArgument" || k == "PoleArgument") return 2;
    if (k == "PrecisionExhausted" || k == "InsufficientPrecision" || k == "ChainNotConverging" || k == "NoDecay" ||
        k == "TargetTooSmall")
      return 3;
    if (k == "ModelMismatch" || k == "GaloisDataInsufficient" || k == "UnsupportedGenus" || k == "RamifiedAboveTheta")
      return 5;
    if (k == "ConsistencyFailure") return 4;
    return 1;
  }
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(o, r);
  return code;
}
