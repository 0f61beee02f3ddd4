// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcm/cmtypes.hpp"
#include "fcm/relhunt.hpp"
#include "fcm/shtuka.hpp"
#include "fcm/tmodule.hpp"

namespace fcm {

// named fixtures: carlitz, carlitz-tensor:n, kummer-t:q, const-ext:l
struct Example {
  enum class Kind { Carlitz, CarlitzTensor, Kummer, ConstExt };
  Kind kind = Kind::Carlitz;
  std::string name;
  int q = 3;
  int n = 1;  // tensor power or ell
};

// q is used where the name does not fix it
Example parse_example(const std::string& name, int q = 3);
CMFieldModel example_model(const Example& ex);
CMDivisor default_divisor(const Example& ex);

struct PeriodRun {
  Example ex;
  CMDivisor xi;
  TModule rho;
  Lattice lattice;
  DualMotive motive;
  PsiResult psi;
  std::vector<PeriodSymbol> symbols;
  std::vector<std::vector<int>> fibers;  // symbol indices per K+ fiber
  int wt = 0;
  InfElem pitilde;
};

// model -> motive -> t-module -> lattice -> Psi -> symbols
PeriodRun run_periods(const Example& ex, std::int64_t N, int T);

std::vector<LegendreResult> legendre(const PeriodRun& run, int D, int H, int M);
// one symbol per fiber, the single-symbol control
std::vector<LegendreResult> legendre_control(const PeriodRun& run, int D, int H, int M);

struct GammaReflection {
  InfElem ratio;  // prod_eps Gamma(eps x) * e_C(pitilde x) / pitilde
  std::optional<RelationCertificate> cert;
};

GammaReflection gamma_reflection(const InfElem& x, std::int64_t N, int D, int H, int M);

}  // namespace fcm
