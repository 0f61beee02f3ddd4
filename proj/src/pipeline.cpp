// SPDX-License-Identifier: Apache-2.0
#include "fcm/pipeline.hpp"

#include <map>

#include "fcm/errors.hpp"
#include "fcm/special.hpp"

namespace fcm {

namespace {

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t k = 0;
    int v = std::stoi(s, &k);
    if (k != s.size()) throw InvalidArgument("");
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("bad " + what + " in example name: " + s);
  }
}

}  // namespace

Example parse_example(const std::string& name, int q) {
  Example ex;
  ex.name = name;
  ex.q = q;
  auto k = name.find(':');
  std::string head = name.substr(0, k);
  std::string arg = k == std::string::npos ? "" : name.substr(k + 1);
  if (head == "carlitz" && arg.empty()) {
    ex.kind = Example::Kind::Carlitz;
  } else if (head == "carlitz-tensor") {
    ex.kind = Example::Kind::CarlitzTensor;
    ex.n = parse_int(arg, "tensor power");
    if (ex.n < 1) throw InvalidArgument("tensor power must be positive");
  } else if (head == "kummer-t") {
    ex.kind = Example::Kind::Kummer;
    ex.q = parse_int(arg, "q");
  } else if (head == "const-ext") {
    ex.kind = Example::Kind::ConstExt;
    ex.n = parse_int(arg, "ell");
  } else {
    throw InvalidArgument("unknown example " + name);
  }
  return ex;
}

CMFieldModel example_model(const Example& ex) {
  switch (ex.kind) {
    case Example::Kind::Carlitz:
    case Example::Kind::CarlitzTensor:
      return rational_model(ex.q);
    case Example::Kind::Kummer:
      return kummer_t_model(ex.q);
    default:
      return const_ext_model(ex.q, ex.n);
  }
}

CMDivisor default_divisor(const Example& ex) {
  switch (ex.kind) {
    case Example::Kind::Carlitz:
      return {{"xi_theta", 1}};
    case Example::Kind::CarlitzTensor:
      return {{"xi_theta", ex.n}};
    case Example::Kind::Kummer:
      return {{"xi1", 1}};
    default:
      return {{"xi0", 1}};
  }
}

PeriodRun run_periods(const Example& ex, std::int64_t N, int T) {
  PeriodRun run;
  run.ex = ex;
  run.xi = default_divisor(ex);
  switch (ex.kind) {
    case Example::Kind::Carlitz:
    case Example::Kind::CarlitzTensor:
      run.rho = ex.n == 1 ? carlitz_module(ex.q) : carlitz_tensor_module(ex.q, ex.n);
      run.motive = carlitz_tensor_motive(ex.q, ex.n);
      break;
    case Example::Kind::Kummer: {
      MotiveSetup S = setup_motive(kummer_t_model(ex.q));
      run.rho = kummer_module(S);
      run.motive = build_motive(S, solve_shtuka(S, run.xi), run.xi);
      break;
    }
    default:
      throw Unsupported("no paired t-module for " + ex.name);
  }
  if (run.rho.d == 1) run.lattice = period_lattice(run.rho, N);
  run.psi = build_psi(run.rho, run.lattice, run.motive, T, N, Rat(N - 20));
  run.symbols = period_symbols(run.motive, run.psi.psi_inv_theta);
  std::map<int, std::vector<int>> fib;
  for (std::size_t i = 0; i < run.motive.pts.size(); ++i) fib[run.motive.pts[i].fiber].push_back(static_cast<int>(i));
  for (auto& [f, v] : fib) run.fibers.push_back(v);
  run.wt = cm_weight(run.xi, run.motive.pts).weight;
  run.pitilde = carlitz_period(ex.q, N);
  return run;
}

std::vector<LegendreResult> legendre(const PeriodRun& run, int D, int H, int M) {
  std::vector<std::vector<InfElem>> f;
  for (auto& idx : run.fibers) {
    f.emplace_back();
    for (int i : idx) f.back().push_back(run.symbols[i].value);
  }
  return certify_legendre(f, run.pitilde, run.wt, D, H, M);
}

std::vector<LegendreResult> legendre_control(const PeriodRun& run, int D, int H, int M) {
  std::vector<std::vector<InfElem>> f;
  for (auto& idx : run.fibers) f.push_back({run.symbols[idx[0]].value});
  return certify_legendre(f, run.pitilde, run.wt, D, H, M);
}

GammaReflection gamma_reflection(const InfElem& x, std::int64_t N, int D, int H, int M) {
  const int q = x.q;
  InfElem pi = carlitz_period(q, N);
  FieldPtr F = base_field(q);
  InfElem xl = x.lift(pi.F, pi.e);
  InfElem g = InfElem::constant(pi.F, q, 1, pi.e);
  for (Elt eps = 1; eps < static_cast<Elt>(q); ++eps) {
    InfElem ex = InfElem::constant(F, q, eps, x.e) * x;
    g = g * geometric_gamma(ex, N).value.lift(pi.F, pi.e);
  }
  InfElem ez = exp_eval(carlitz_module(q), {pi * xl}, N)[0];
  GammaReflection out;
  out.ratio = g * ez / pi;
  out.cert = find_algebraic_relation(out.ratio, D, H, M);
  return out;
}

}  // namespace fcm
