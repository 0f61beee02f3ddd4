// SPDX-License-Identifier: Apache-2.0
#include "fcm/cmtypes.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "fcm/errors.hpp"
#include "fcm/newton.hpp"
#include "fcm/special.hpp"

namespace fcm {

int CMFieldModel::degree() const {
  switch (kind) {
    case ModelKind::Rational:
      return 1;
    case ModelKind::Monogenic:
      return static_cast<int>(m.size()) - 1;
    case ModelKind::ConstExt:
      return ell;
  }
  return 1;
}

CMFieldModel rational_model(int q) {
  CMFieldModel K;
  K.name = "F_q(t)";
  K.kind = ModelKind::Rational;
  K.q = q;
  K.Fq = base_field(q);
  K.m = {FPoly(K.Fq, {0, K.Fq->neg(1)}, 't'), FPoly(K.Fq, {1}, 't')};
  K.has_param = true;
  return K;
}

CMFieldModel kummer_t_model(int q) {
  if (q < 3) throw InvalidArgument("kummer-t needs q >= 3");
  CMFieldModel K;
  K.name = "kummer-t:" + std::to_string(q);
  K.kind = ModelKind::Monogenic;
  K.q = q;
  K.Fq = base_field(q);
  K.m.assign(static_cast<std::size_t>(q), FPoly(K.Fq, {}, 't'));
  K.m[0] = FPoly(K.Fq, {0, 1}, 't');
  K.m[q - 1] = FPoly(K.Fq, {1}, 't');
  K.has_param = true;
  K.tc = K.Fq->neg(1);
  K.tE = q - 1;
  K.automorphisms = {FPoly(K.Fq, {0, K.Fq->gen()}, 'y')};
  return K;
}

CMFieldModel const_ext_model(int q, int ell) {
  if (ell < 2) throw InvalidArgument("const-ext needs ell >= 2");
  CMFieldModel K;
  K.name = "const-ext:" + std::to_string(ell);
  K.kind = ModelKind::ConstExt;
  K.q = q;
  K.Fq = base_field(q);
  K.ell = ell;
  return K;
}

CMFieldModel monogenic_model(std::string name, int q, std::vector<FPoly> m) {
  CMFieldModel K;
  K.name = std::move(name);
  K.kind = ModelKind::Monogenic;
  K.q = q;
  K.Fq = base_field(q);
  K.m = std::move(m);
  if (K.m.size() < 2 || !(K.m.back().deg() == 0 && K.m.back().c[0] == 1))
    throw ModelInvalid("m(t, y) must be monic in y of positive degree");
  return K;
}

namespace {

InfPoly specialize(const CMFieldModel& K) {
  InfPoly f;
  for (auto& c : K.m) f.push_back(InfElem::from_poly(c, K.q, 1));
  return f;
}

InfElem eval_poly(const FPoly& g, const InfElem& y) {
  InfElem r = InfElem::zero(g.F, y.q, y.e);
  for (int i = g.deg(); i >= 0; --i) r = r * y + InfElem::constant(g.F, y.q, g.c[i], y.e);
  return r;
}

bool same_point(const InfElem& a, const InfElem& b) {
  Rat d = diff_val(a, b);
  Rat lim = std::min(a.prec(), b.prec());
  Rat lv = std::max(a.val(), b.val());
  if (!a.exact() || !b.exact()) return d >= lv + (lim - lv) / Rat(2);
  return d == kInfVal;
}

// lexicographic key: valuation, then coefficient discrete logs
bool point_less(const InfElem& x, const InfElem& y) {
  InfElem a = x, b = y;
  unify(a, b);
  if (a.v != b.v) return a.v < b.v;
  std::size_t n = std::min(a.c.size(), b.c.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.c[i] == b.c[i]) continue;
    if (a.c[i] == 0) return true;
    if (b.c[i] == 0) return false;
    return a.F->dlog(a.c[i]) < a.F->dlog(b.c[i]);
  }
  return a.c.size() < b.c.size();
}

std::vector<InfElem> roots_of(const CMFieldModel& K, std::int64_t prec) {
  std::vector<InfElem> out;
  for (auto& r : newton_roots(specialize(K), Rat(prec))) {
    if (r.mult != 1) throw RamifiedAboveTheta("m(theta, y) has a repeated root");
    out.push_back(r.root);
  }
  return out;
}

std::vector<int> point_fibers(const CMFieldModel& K, const std::vector<InfElem>& nus) {
  std::vector<int> fib(nus.size(), 0);
  if (K.kplus.is_zero()) return fib;
  std::vector<InfElem> vals;
  for (std::size_t i = 0; i < nus.size(); ++i) {
    InfElem g = eval_poly(K.kplus, nus[i]);
    std::size_t j = 0;
    while (j < vals.size() && !same_point(vals[j], g)) ++j;
    if (j == vals.size()) vals.push_back(g);
    fib[i] = static_cast<int>(j);
  }
  return fib;
}

}  // namespace

ValidationReport validate_cm_field(const CMFieldModel& K, std::int64_t prec) {
  ValidationReport rep;
  if (K.kind == ModelKind::Rational) {
    rep.pass = true;
    rep.places.push_back({InfElem::theta_pow(K.Fq, K.q, 1), 1, 1, 1});
    rep.kplus_places = {0};
    rep.message = "K = F_q(t): infinity is a single place";
    return rep;
  }
  if (K.kind == ModelKind::ConstExt) {
    rep.pass = true;
    Place P{InfElem::theta_pow(K.Fq, K.q, 1), K.ell, 1, K.ell};
    rep.places.push_back(P);
    rep.kplus_places = {0};
    rep.message = "constant field extension: infinity is inert";
    return rep;
  }
  // roots of m(t, y) over F_q((1/t)); same expansion machinery with theta renamed t
  std::vector<InfElem> rts = roots_of(K, prec);
  for (std::size_t i = 1; i < rts.size(); ++i) unify(rts[0], rts[i]);
  for (std::size_t i = 1; i < rts.size(); ++i) unify(rts[0], rts[i]);
  const int e = rts[0].e;
  const int p = K.Fq->p;
  if (e % p == 0) throw Unsupported("wild ramification above infinity");
  // field containing the e-th roots of unity
  int k = 1;
  while ((ipow(p, k) - 1) % e) ++k;
  FieldPtr F = compositum(rts[0].F, std_field(p, k));
  for (auto& r : rts) r = r.lift(F, e);
  Elt zeta = F->exp_gen((F->Q - 1) / static_cast<std::uint32_t>(e));
  int a = rts[0].a;
  std::vector<int> place_of(rts.size(), -1);
  for (std::size_t i = 0; i < rts.size(); ++i) {
    if (place_of[i] >= 0) continue;
    int id = static_cast<int>(rep.places.size());
    std::vector<InfElem> orbit = {rts[i]};
    place_of[i] = id;
    for (std::size_t o = 0; o < orbit.size(); ++o) {
      for (const InfElem& img : {orbit[o].map_coeffs_frob(a), orbit[o].scale_u(zeta)}) {
        for (std::size_t j = 0; j < rts.size(); ++j) {
          if (place_of[j] < 0 && same_point(rts[j], img)) {
            place_of[j] = id;
            orbit.push_back(rts[j]);
          }
        }
      }
    }
    Place P;
    P.root = rts[i];
    P.size = static_cast<int>(orbit.size());
    // ramification: smallest e' with all exponents divisible by e/e'
    std::int64_t g = 0;
    for (auto& [kk, c] : rts[i].terms()) g = std::gcd(g, kk);
    g = std::gcd(g, static_cast<std::int64_t>(e));
    P.e = static_cast<int>(e / (g ? g : e));
    P.f = P.size / P.e;
    rep.places.push_back(P);
  }
  if (K.kplus.is_zero()) {
    rep.kplus_degree = 1;
    rep.kplus_places.assign(rep.places.size(), 0);
    rep.pass = rep.places.size() == 1;
    rep.message = rep.pass ? "infinity is non-split in K" : std::to_string(rep.places.size()) + " places above infinity";
    return rep;
  }
  std::vector<InfElem> vals;
  bool real = true;
  for (auto& P : rep.places) {
    InfElem g = eval_poly(K.kplus.lift(P.root.F), P.root);
    for (auto& [kk, c] : g.terms()) {
      Elt r;
      if (kk % g.e || !restrict_to(g.F, K.Fq, c, r)) real = false;
    }
    std::size_t j = 0;
    while (j < vals.size() && !same_point(vals[j], g)) ++j;
    if (j == vals.size()) vals.push_back(g);
    rep.kplus_places.push_back(static_cast<int>(j));
  }
  // every root of the K+ generator's conjugates appears; d is the number of distinct values
  std::vector<InfElem> all_vals;
  for (auto& r : rts) {
    InfElem g = eval_poly(K.kplus.lift(r.F), r);
    bool seen = false;
    for (auto& v : all_vals) seen = seen || same_point(v, g);
    if (!seen) all_vals.push_back(g);
  }
  rep.kplus_degree = static_cast<int>(all_vals.size());
  bool nonsplit = vals.size() == rep.places.size() && static_cast<int>(vals.size()) == rep.kplus_degree;
  rep.pass = real && nonsplit;
  if (!real)
    rep.message = "K+ is not totally real at infinity";
  else if (!nonsplit)
    rep.message = "a place of K+ above infinity splits in K";
  else
    rep.message = "K+ totally real; every infinite place of K+ is non-split in K";
  return rep;
}

std::vector<CMPoint> jk_points(const CMFieldModel& K, std::int64_t prec) {
  std::vector<CMPoint> pts;
  if (K.kind == ModelKind::Rational) {
    pts.push_back({"xi_theta", InfElem::theta_pow(K.Fq, K.q, 1), 0, 0});
    return pts;
  }
  if (K.kind == ModelKind::ConstExt) {
    for (int i = 0; i < K.ell; ++i) pts.push_back({"xi" + std::to_string(i), std::nullopt, 0, i});
    return pts;
  }
  std::vector<InfElem> rts = roots_of(K, prec);
  std::sort(rts.begin(), rts.end(), point_less);
  std::vector<int> fib = point_fibers(K, rts);
  for (std::size_t i = 0; i < rts.size(); ++i) pts.push_back({"xi" + std::to_string(i + 1), rts[i], fib[i], 0});
  return pts;
}

WeightInfo cm_weight(const CMDivisor& D, const std::vector<CMPoint>& pts) {
  WeightInfo w;
  std::map<int, int> sums;
  bool effective = true, nonzero = false;
  for (auto& P : pts) sums[P.fiber] += 0;
  for (auto& [lab, m] : D) {
    auto it = std::find_if(pts.begin(), pts.end(), [&](const CMPoint& P) { return P.label == lab; });
    if (it == pts.end()) throw InvalidArgument("divisor point " + lab + " is not in J_K");
    sums[it->fiber] += m;
    effective = effective && m >= 0;
    nonzero = nonzero || m != 0;
  }
  std::set<int> vals;
  for (auto& [f, s] : sums) vals.insert(s);
  w.in_ik0 = vals.size() == 1;
  w.weight = w.in_ik0 ? *vals.begin() : 0;
  w.generalized_cm_type = w.in_ik0 && effective && nonzero;
  w.cm_type = w.generalized_cm_type && w.weight == 1;
  return w;
}

std::vector<CMDivisor> decompose_cm_type(const CMDivisor& Xi, const std::vector<CMPoint>& pts) {
  WeightInfo w = cm_weight(Xi, pts);
  if (!w.generalized_cm_type) throw InvalidArgument("not a generalized CM type");
  CMDivisor left = Xi;
  std::map<int, std::vector<std::string>> fibers;
  for (auto& P : pts) fibers[P.fiber].push_back(P.label);
  for (auto& [f, labs] : fibers) std::sort(labs.begin(), labs.end());
  std::vector<CMDivisor> out;
  for (int k = 0; k < w.weight; ++k) {
    CMDivisor T;
    for (auto& [f, labs] : fibers) {
      for (auto& l : labs) {
        auto it = left.find(l);
        if (it != left.end() && it->second > 0) {
          --it->second;
          T[l] = 1;
          break;
        }
      }
    }
    out.push_back(T);
  }
  return out;
}

CMDivisor inflate_from_base(const CMDivisor& D, const CMFieldModel& K, const std::vector<CMPoint>& pts) {
  if (static_cast<int>(pts.size()) != K.degree()) throw RamifiedAboveTheta("theta ramifies in K");
  int m = 0;
  for (auto& [l, v] : D) {
    if (l != "xi_theta") throw InvalidArgument("divisor over F_q(t) must live on xi_theta");
    m += v;
  }
  CMDivisor out;
  if (m)
    for (auto& P : pts) out[P.label] = m;
  return out;
}

CMDivisor restrict_to_base(const CMDivisor& D, const std::vector<CMPoint>& pts) {
  int m = 0;
  for (auto& [l, v] : D) {
    if (std::none_of(pts.begin(), pts.end(), [&](const CMPoint& P) { return P.label == l; }))
      throw InvalidArgument("divisor point " + l + " is not in J_K");
    m += v;
  }
  CMDivisor out;
  if (m) out["xi_theta"] = m;
  return out;
}

CMDivisor restrict_to_kplus(const CMDivisor& D, const std::vector<CMPoint>& pts) {
  CMDivisor out;
  for (auto& P : pts) {
    auto it = D.find(P.label);
    if (it != D.end() && it->second) out["xi+" + std::to_string(P.fiber)] += it->second;
  }
  return out;
}

CMDivisor reduction_at_infinity(const CMFieldModel& K, const CMDivisor& Xi, const std::vector<CMPoint>& pts) {
  CMDivisor I;
  for (auto& P : pts) {
    auto it = Xi.find(P.label);
    if (it == Xi.end() || it->second == 0) continue;
    std::string lab;
    if (K.kind == ModelKind::Rational) {
      lab = "inf";
    } else if (K.kind == ModelKind::ConstExt) {
      lab = "inf" + std::to_string(P.component);
    } else {
      if (!K.has_param) throw Unsupported("model carries no local data at infinity");
      // s = y; the uniformizer at s = oo is 1/y
      const InfElem& s = *P.nu_y;
      if (s.val() < Rat(0)) {
        lab = "inf[s=oo]";
      } else {
        if (s.prec() <= Rat(0)) throw PrecisionExhausted("reduction of nu(y) is ambiguous");
        lab = "inf[s=" + std::to_string(s.coef(0)) + "]";
      }
    }
    I[lab] += it->second;
  }
  return I;
}

std::vector<std::vector<int>> galois_generators(const CMFieldModel& K, const std::vector<CMPoint>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<int>> gens;
  if (K.kind == ModelKind::Rational) return {std::vector<int>{0}};
  if (K.kind == ModelKind::ConstExt) {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = (i + 1) % n;
    return {s};
  }
  if (K.automorphisms.empty() && !K.constant_frobenius) throw GaloisDataInsufficient("model supplies no Galois action");
  if (K.constant_frobenius) {
    std::vector<int> perm(n, -1);
    for (int i = 0; i < n; ++i) {
      InfElem img = pts[i].nu_y->map_coeffs_frob(pts[i].nu_y->a);
      for (int j = 0; j < n; ++j)
        if (same_point(img, *pts[j].nu_y)) perm[i] = j;
      if (perm[i] < 0) throw ModelInvalid("Frobenius does not permute J_K");
    }
    gens.push_back(perm);
  }
  for (auto& a : K.automorphisms) {
    std::vector<int> perm(n, -1);
    for (int i = 0; i < n; ++i) {
      FieldPtr G = compositum(a.F, pts[i].nu_y->F);
      InfElem img = eval_poly(a.lift(G), pts[i].nu_y->lift(G, pts[i].nu_y->e));
      for (int j = 0; j < n; ++j)
        if (same_point(img, *pts[j].nu_y)) perm[i] = j;
      if (perm[i] < 0) throw ModelInvalid("automorphism does not permute J_K");
    }
    gens.push_back(perm);
  }
  return gens;
}

int integer_rank(std::vector<std::vector<long long>> M) {
  if (M.empty()) return 0;
  const std::size_t n = M.size(), m = M[0].size();
  __int128 prev = 1;
  std::vector<std::vector<__int128>> A(n, std::vector<__int128>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) A[i][j] = M[i][j];
  std::size_t r = 0;
  for (std::size_t col = 0; col < m && r < n; ++col) {
    std::size_t piv = r;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) continue;
    std::swap(A[piv], A[r]);
    for (std::size_t i = r + 1; i < n; ++i) {
      for (std::size_t j = col + 1; j < m; ++j) A[i][j] = (A[r][col] * A[i][j] - A[i][col] * A[r][j]) / prev;
      A[i][col] = 0;
    }
    prev = A[r][col];
    ++r;
  }
  return static_cast<int>(r);
}

namespace {

std::vector<long long> to_vec(const CMDivisor& D, const std::vector<CMPoint>& pts) {
  std::vector<long long> v(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto it = D.find(pts[i].label);
    if (it != D.end()) v[i] = it->second;
  }
  return v;
}

}  // namespace

int galois_rank(const CMFieldModel& K, const CMDivisor& Xi, const std::vector<CMPoint>& pts) {
  auto gens = galois_generators(K, pts);
  std::set<std::vector<long long>> seen;
  std::vector<std::vector<long long>> orbit = {to_vec(Xi, pts)};
  seen.insert(orbit[0]);
  for (std::size_t o = 0; o < orbit.size(); ++o) {
    for (auto& g : gens) {
      std::vector<long long> w(orbit[o].size(), 0);
      for (std::size_t i = 0; i < g.size(); ++i) w[g[i]] = orbit[o][i];
      if (seen.insert(w).second) orbit.push_back(w);
    }
  }
  return integer_rank(orbit);
}

RankInfo rank_ik0(const CMFieldModel& K, const std::vector<CMPoint>& pts) {
  std::map<int, std::vector<int>> fibers;
  for (std::size_t i = 0; i < pts.size(); ++i) fibers[pts[i].fiber].push_back(static_cast<int>(i));
  // all CM types: one point per fiber
  std::vector<std::vector<long long>> rows;
  std::vector<std::size_t> idx(fibers.size(), 0);
  std::vector<std::vector<int>> fl;
  for (auto& [f, v] : fibers) fl.push_back(v);
  while (true) {
    std::vector<long long> v(pts.size(), 0);
    for (std::size_t k = 0; k < fl.size(); ++k) v[fl[k][idx[k]]] = 1;
    rows.push_back(v);
    std::size_t k = 0;
    while (k < fl.size() && ++idx[k] == fl[k].size()) idx[k++] = 0;
    if (k == fl.size()) break;
  }
  RankInfo R;
  R.lattice_rank = integer_rank(rows);
  const int n = K.degree();
  const int d = static_cast<int>(fibers.size());
  const int kk = n / d;
  R.formula = Rat(1) + Rat(kk - 1, kk) * Rat(n);
  R.agree = R.formula == Rat(R.lattice_rank);
  return R;
}

Xi0Certificate nondegenerate_xi0(const CMFieldModel& K, const std::string& label, const std::vector<CMPoint>& pts) {
  auto it = std::find_if(pts.begin(), pts.end(), [&](const CMPoint& P) { return P.label == label; });
  if (it == pts.end()) throw InvalidArgument("xi0 must be a point of J_K");
  std::map<int, int> fsize;
  for (auto& P : pts) fsize[P.fiber]++;
  Xi0Certificate c;
  c.xi0[label] = fsize[it->fiber];
  for (auto& P : pts)
    if (P.fiber != it->fiber) c.xi0[P.label] += 1;
  c.generalized_cm_type = cm_weight(c.xi0, pts).generalized_cm_type;
  c.rank = galois_rank(K, c.xi0, pts);
  c.rank_ik0 = rank_ik0(K, pts).lattice_rank;
  c.nondegenerate = c.generalized_cm_type && c.rank == c.rank_ik0;
  return c;
}

}  // namespace fcm
