// SPDX-License-Identifier: Apache-2.0
#include "fcm/newton.hpp"

#include <numeric>

#include "fcm/errors.hpp"

namespace fcm {

void unify_all(InfPoly& f) {
  if (f.empty()) return;
  FieldPtr F = f[0].F;
  int e = f[0].e;
  for (auto& x : f) {
    if (x.q != f[0].q) throw IncompatibleFields("different q");
    if (x.F != F) F = compositum(F, x.F);
    e = std::lcm(e, x.e);
  }
  for (auto& x : f) x = x.lift(F, e);
}

InfElem eval(const InfPoly& f, const InfElem& y) {
  if (f.empty()) return InfElem::zero(y.F, y.q, y.e);
  InfElem acc = f.back();
  for (std::size_t k = f.size() - 1; k-- > 0;) acc = acc * y + f[k];
  return acc;
}

InfPoly derivative(const InfPoly& f) {
  InfPoly d;
  for (std::size_t k = 1; k < f.size(); ++k) d.push_back(f[k].scaled(f[k].F->from_int(static_cast<long>(k))));
  return d;
}

InfPoly taylor_shift(const InfPoly& f0, const InfElem& r) {
  // repeated synthetic division by (y - r)
  InfPoly f = f0;
  std::size_t n = f.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) f[k - 1] = f[k - 1] + f[k] * r;
  return f;
}

std::vector<PolygonSegment> newton_polygon(const InfPoly& f) {
  std::vector<std::pair<int, std::int64_t>> pts;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f[i].is_zero()) pts.push_back({static_cast<int>(i), f[i].v});
  std::vector<std::pair<int, std::int64_t>> hull;
  for (auto& pt : pts) {
    while (hull.size() >= 2) {
      auto& A = hull[hull.size() - 2];
      auto& B = hull.back();
      // drop B if it lies on or above segment A..pt
      __int128 lhs = static_cast<__int128>(B.second - A.second) * (pt.first - A.first);
      __int128 rhs = static_cast<__int128>(pt.second - A.second) * (B.first - A.first);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(pt);
  }
  std::vector<PolygonSegment> segs;
  int e = f.empty() ? 1 : f[0].e;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    PolygonSegment s;
    s.i0 = hull[k].first;
    s.i1 = hull[k + 1].first;
    s.root_val = Rat(-(hull[k + 1].second - hull[k].second), static_cast<std::int64_t>(s.i1 - s.i0) * e);
    segs.push_back(s);
  }
  return segs;
}

namespace {

struct Ctx {
  Rat target;
  int max_e;
};

std::int64_t target_units(const Ctx& cx, int e) {
  if (cx.target >= kInfVal) return InfElem::kExact;
  return (cx.target * Rat(e)).ceil();
}

InfElem newton_iterate(const InfPoly& f, InfElem r, const Ctx& cx) {
  InfPoly df = derivative(f);
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  int stall = 0;
  for (int it = 0; it < 400; ++it) {
    InfElem fr = eval(f, r);
    if (fr.exact_zero()) return r;
    InfElem dfr = eval(df, r);
    if (dfr.is_zero()) throw PrecisionExhausted("derivative vanishes at a simple root");
    std::int64_t tu = target_units(cx, fr.e);
    if (fr.exact() && dfr.exact() && !dfr.is_monomial() && tu >= InfElem::kExact / 2)
      throw PrecisionExhausted("exact polynomial needs a precision target");
    InfElem d = divide(fr, dfr, tu);
    r = r - d;
    if (d.is_zero()) return r;
    if (d.v <= last) {
      if (++stall > 3) throw PrecisionExhausted("Newton iteration is not converging");
    } else {
      stall = 0;
    }
    last = d.v;
  }
  throw PrecisionExhausted("Newton iteration did not settle");
}

void solve(InfPoly f, const Rat* above, std::vector<InfRoot>& out, const Ctx& cx) {
  unify_all(f);
  while (!f.empty() && f.back().exact_zero()) f.pop_back();
  if (f.size() <= 1) return;
  if (f.back().is_zero()) throw PrecisionExhausted("leading coefficient vanishes at working precision");
  std::size_t k0 = 0;
  while (f[k0].exact_zero()) ++k0;
  if (k0) {
    out.push_back({InfElem::zero(f[0].F, f[0].q, f[0].e), static_cast<int>(k0)});
    f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(k0));
  }
  if (f.size() <= 1) return;
  if (f[0].is_zero()) throw PrecisionExhausted("root indistinguishable from zero at working precision");
  const int e = f[0].e;
  auto segs = newton_polygon(f);
  // inexact zeros must lie strictly above the polygon
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!f[k].is_zero() || f[k].exact()) continue;
    for (auto& s : segs) {
      if (static_cast<int>(k) < s.i0 || static_cast<int>(k) > s.i1) continue;
      Rat line = Rat(f[s.i0].v) - s.root_val * Rat(e) * Rat(static_cast<std::int64_t>(k) - s.i0);
      if (Rat(f[k].N) <= line) throw PrecisionExhausted("coefficient precision too low for the Newton polygon");
    }
  }
  for (auto& s : segs) {
    if (above && !(s.root_val > *above)) continue;
    Rat su = s.root_val * Rat(e);  // root valuation in u-units
    int E = e * static_cast<int>(su.d);
    if (E > cx.max_e) throw Unsupported("ramification bound exceeded");
    std::int64_t S = su.n;
    Rat base = Rat(f[s.i0].v) + su * Rat(s.i0);
    std::vector<Elt> rc(static_cast<std::size_t>(s.i1 - s.i0) + 1, 0);
    for (int k = s.i0; k <= s.i1; ++k) {
      if (f[k].is_zero()) continue;
      if (Rat(f[k].v) + su * Rat(k) == base) rc[k - s.i0] = f[k].lead_coef();
    }
    FPoly R(f[0].F, rc, 'z');
    for (auto& er : all_roots(R)) {
      InfPoly fT = f;
      for (auto& x : fT) x = x.lift(er.field, E);
      InfElem r0 = InfElem::monomial(er.field, f[0].q, er.root, S, E);
      if (er.mult == 1) {
        out.push_back({newton_iterate(fT, r0, cx), 1});
        continue;
      }
      InfPoly g = taylor_shift(fT, r0);
      std::vector<InfRoot> sub;
      Rat v0 = s.root_val;
      solve(g, &v0, sub, cx);
      int tot = 0;
      for (auto& rr : sub) tot += rr.mult;
      if (tot != er.mult) throw PrecisionExhausted("could not separate clustered roots");
      for (auto& rr : sub) out.push_back({r0 + rr.root, rr.mult});
    }
  }
}

}  // namespace

std::vector<InfRoot> newton_roots(InfPoly f, Rat target, int max_e) {
  Ctx cx{target, max_e};
  unify_all(f);
  while (!f.empty() && f.back().exact_zero()) f.pop_back();
  if (f.empty()) throw InvalidArgument("zero polynomial");
  std::vector<InfRoot> out;
  solve(f, nullptr, out, cx);
  int tot = 0;
  for (auto& r : out) tot += r.mult;
  if (tot != static_cast<int>(f.size()) - 1) throw PrecisionExhausted("root count does not match degree");
  return out;
}

}  // namespace fcm
