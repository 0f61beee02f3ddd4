// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "fcm/inf.hpp"

namespace fcm {

// polynomial in one variable with InfElem coefficients, low to high
using InfPoly = std::vector<InfElem>;

void unify_all(InfPoly& f);
InfElem eval(const InfPoly& f, const InfElem& y);
InfPoly derivative(const InfPoly& f);
// f(r + z) as a polynomial in z
InfPoly taylor_shift(const InfPoly& f, const InfElem& r);

struct InfRoot {
  InfElem root;
  int mult = 1;
};

struct PolygonSegment {
  int i0 = 0, i1 = 0;  // endpoint indices
  Rat root_val;        // valuation of the roots on this segment
};

// Lower Newton polygon of f (exact zero coefficients skipped).
std::vector<PolygonSegment> newton_polygon(const InfPoly& f);

// All roots of f in an algebraic closure of the completion, with
// multiplicity. Repeated roots are only recognised when the Taylor shift
// leaves exact zeros; otherwise clustering raises PrecisionExhausted.
// target: absolute precision (valuation units) for exact inputs
std::vector<InfRoot> newton_roots(InfPoly f, Rat target = kInfVal, int max_e = 1024);

}  // namespace fcm
