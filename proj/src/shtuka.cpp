// SPDX-License-Identifier: Apache-2.0
#include "fcm/shtuka.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fcm/errors.hpp"
#include "fcm/special.hpp"

namespace fcm {

KVec cr_one(const CoordRing& R) {
  KVec v(R.r, KPoly::zero(R.A));
  if (R.kind == ModelKind::ConstExt) {
    for (auto& x : v) x = KPoly::constant(KElem::constant(R.A, 1));
  } else {
    v[0] = KPoly::constant(KElem::constant(R.A, 1));
  }
  return v;
}

KVec cr_scalar(const CoordRing& R, const KPoly& f) {
  KVec v = cr_one(R);
  for (auto& x : v) x = x * f;
  return v;
}

KVec cr_y(const CoordRing& R) {
  if (R.kind == ModelKind::ConstExt) throw InvalidArgument("constant field extension has no y");
  KVec v(R.r, KPoly::zero(R.A));
  if (R.r == 1) return KVec{-R.m[0]};
  v[1] = KPoly::constant(KElem::constant(R.A, 1));
  return v;
}

KVec cr_mul(const CoordRing& R, const KVec& x, const KVec& y) {
  if (R.kind == ModelKind::ConstExt) {
    KVec z(R.r, KPoly::zero(R.A));
    for (int i = 0; i < R.r; ++i) z[i] = x[i] * y[i];
    return z;
  }
  const int r = R.r;
  std::vector<KPoly> z(static_cast<std::size_t>(2 * r - 1), KPoly::zero(R.A));
  for (int i = 0; i < r; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < r; ++j)
      if (!y[j].is_zero()) z[i + j] = z[i + j] + x[i] * y[j];
  }
  for (int k = 2 * r - 2; k >= r; --k) {
    if (z[k].is_zero()) continue;
    KPoly c = z[k];
    for (int j = 0; j < r; ++j) z[k - r + j] = z[k - r + j] - c * R.m[j];
    z[k] = KPoly::zero(R.A);
  }
  z.resize(r);
  return z;
}

static KVec basis_vec(const CoordRing& R, int i) {
  KVec v(R.r, KPoly::zero(R.A));
  v[i] = KPoly::constant(KElem::constant(R.A, 1));
  return v;
}

KMat mult_matrix(const CoordRing& R, const KVec& g) {
  KMat M;
  for (int i = 0; i < R.r; ++i) M.push_back(cr_mul(R, g, basis_vec(R, i)));
  return M;
}

MotiveSetup setup_motive(const CMFieldModel& K, std::int64_t prec) {
  MotiveSetup S;
  S.K = K;
  S.pts = jk_points(K, prec);
  const int q = K.q;
  FieldPtr F = K.Fq;
  auto lift_m = [&](const KRingPtr& A) {
    std::vector<KPoly> m;
    for (auto& c : K.m) {
      KPoly f{A, {}};
      for (auto x : c.c) f.c.push_back(KElem::constant(A, embed(F, A->F, x)));
      f.normalize();
      m.push_back(f);
    }
    return m;
  };
  if (K.kind == ModelKind::ConstExt) {
    FieldPtr Fl = std_field(F->p, F->n * K.ell);
    S.R.A = make_kring(Fl, q);
    S.R.kind = ModelKind::ConstExt;
    S.R.r = K.ell;
    S.w = InfElem::theta_pow(Fl, q, 1);
    return S;
  }
  if (K.kind == ModelKind::Rational || !K.has_param) {
    S.R.A = make_kring(F, q, 1, FPoly(F, {0, 1}, 'T'));
    S.R.kind = K.kind;
    S.R.r = K.degree();
    S.R.m = lift_m(S.R.A);
    S.w = InfElem::theta_pow(F, q, 1);
    if (K.kind == ModelKind::Rational) S.nu = {KElem::theta(S.R.A)};
    return S;
  }
  // t = tc * y^E, so w^E = theta / tc
  const int E = K.tE;
  FPoly u(F, {0, F->inv(K.tc)}, 'T');
  S.R.A = make_kring(F, q, E, u);
  S.R.A = std::const_pointer_cast<const KRing>(S.R.A);
  S.R.kind = ModelKind::Monogenic;
  S.R.r = K.degree();
  S.R.m = lift_m(S.R.A);
  S.w = *S.pts[0].nu_y;
  InfElem wE = pow(S.w, static_cast<std::uint64_t>(E));
  InfElem uv = InfElem::from_poly(u, q, 1);
  if (diff_val(wE, uv) < std::min(wE.prec(), Rat(prec) - Rat(1)))
    throw ConsistencyFailure("first point does not satisfy w^E = u(theta)");
  for (auto& P : S.pts) {
    InfElem z = *P.nu_y / S.w;
    Elt c = z.lead_coef();
    Elt zc;
    if (z.v != 0 || !restrict_to(z.F, F, c, zc)) throw Unsupported("point is not a constant multiple of w");
    InfElem back = S.w * c;
    if (diff_val(back, *P.nu_y) < Rat(prec) / Rat(2)) throw ConsistencyFailure("point is not a constant multiple of w");
    S.nu.push_back(KElem::w(S.R.A) * zc);
  }
  return S;
}

ShtukaPair solve_shtuka(const MotiveSetup& S, const CMDivisor& Xi) {
  const CMFieldModel& K = S.K;
  WeightInfo wi = cm_weight(Xi, S.pts);
  if (!wi.generalized_cm_type) throw InvalidArgument("Xi must be a generalized CM type");
  ShtukaPair P;
  const CoordRing& R = S.R;
  if (K.kind == ModelKind::ConstExt) {
    P.ell = K.ell;
    P.h.assign(R.r, KPoly::constant(KElem::constant(R.A, 1)));
    for (auto& pt : S.pts) {
      auto it = Xi.find(pt.label);
      if (it == Xi.end() || it->second == 0) continue;
      P.h[pt.component] = pow(KPoly::t_minus_theta(R.A), static_cast<unsigned>(it->second));
    }
  } else {
    if (!K.has_param) throw UnsupportedGenus("model has no genus-zero parametrization");
    P.h = cr_one(R);
    KVec y = cr_y(R);
    for (std::size_t i = 0; i < S.pts.size(); ++i) {
      auto it = Xi.find(S.pts[i].label);
      if (it == Xi.end()) continue;
      KVec f = y;
      f[0] = f[0] - KPoly::constant(S.nu[i]);
      for (int k = 0; k < it->second; ++k) P.h = cr_mul(R, P.h, f);
    }
  }
  for (auto& [l, m] : Xi)
    if (m) P.divisor.push_back({l, m});
  for (auto& [l, m] : reduction_at_infinity(K, Xi, S.pts)) P.divisor.push_back({l, -m});
  return P;
}

std::string DetReport::str() const {
  std::ostringstream os;
  os << (ok ? "" : "not ") << "of the form c*(t-theta)^" << n;
  if (ok) os << " with c = " << c.str();
  return os.str();
}

DetReport check_det(const DualMotive& M) {
  DetReport r;
  KPoly d = det(M.Phi);
  r.c = KElem::zero(M.R.A);
  if (d.is_zero()) return r;
  r.n = ord_theta(d);
  KPoly c = div_t_minus_theta(d, r.n);
  r.ok = c.deg() == 0;
  if (r.ok) r.c = c.c[0];
  return r;
}

DualMotive build_motive(const MotiveSetup& S, const ShtukaPair& pair, const CMDivisor& Xi, bool validate) {
  DualMotive M;
  M.model = S.K.name;
  M.R = S.R;
  M.w = S.w;
  M.rank = S.R.r;
  M.xi = Xi;
  M.pair = pair;
  M.pts = S.pts;
  M.nu = S.nu;
  if (S.R.kind == ModelKind::ConstExt) {
    const int l = S.R.r;
    M.Phi.assign(l, std::vector<KPoly>(l, KPoly::zero(S.R.A)));
    for (int i = 0; i < l; ++i) M.Phi[i][(i + 1) % l] = pair.h[(i + 1) % l];
    for (int i = 0; i < l; ++i) M.basis.push_back("e" + std::to_string(i));
  } else {
    M.Phi = mult_matrix(S.R, pair.h);
    for (int i = 0; i < M.rank; ++i) M.basis.push_back(i == 0 ? "1" : i == 1 ? "y" : "y^" + std::to_string(i));
  }
  if (validate) {
    int deg = 0;
    for (auto& [l, m] : Xi) deg += m;
    DetReport d = check_det(M);
    if (!d.ok || d.n != deg) throw BasisExpansionFailure("det Phi is not c(t-theta)^deg(Xi): " + d.str());
    if (M.rank != S.K.degree()) throw BasisExpansionFailure("rank differs from [K:F_q(t)]");
  }
  return M;
}

namespace {

// vectors of M / (t-theta)^n M for the A[t]-span of the given rows
std::vector<std::vector<KElem>> jets(const KMat& rows, int n, const KRingPtr& A) {
  std::vector<std::vector<KElem>> out;
  for (auto& row : rows) {
    std::vector<KPoly> tay;
    for (auto& f : row) tay.push_back(taylor_at_theta(f));
    for (int j = 0; j < n; ++j) {
      std::vector<KElem> v;
      for (auto& s : tay)
        for (int k = 0; k < n; ++k) v.push_back(k - j >= 0 ? s.coef(k - j) : KElem::zero(A));
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

bool sigma_ideal_check(const DualMotive& M, const CMDivisor& Xi) {
  const CoordRing& R = M.R;
  int deg = 0;
  for (auto& [l, m] : Xi) deg += m;
  DetReport d = check_det(M);
  if (!d.ok) return false;
  int n = std::max(deg, d.n);
  if (n == 0) return true;
  // generators of prod P_xi^{m_xi}
  std::vector<KVec> gens = {cr_one(R)};
  for (std::size_t i = 0; i < M.pts.size(); ++i) {
    auto it = Xi.find(M.pts[i].label);
    if (it == Xi.end()) continue;
    std::vector<KVec> P;
    if (R.kind == ModelKind::ConstExt) {
      KVec g = cr_one(R);
      g[M.pts[i].component] = KPoly::t_minus_theta(R.A);
      P.push_back(g);
    } else {
      P.push_back(cr_scalar(R, KPoly::t_minus_theta(R.A)));
      if (R.r > 1) {
        KVec g = cr_y(R);
        g[0] = g[0] - KPoly::constant(M.nu[i]);
        P.push_back(g);
      }
    }
    for (int k = 0; k < it->second; ++k) {
      std::vector<KVec> nxt;
      for (auto& a : gens)
        for (auto& b : P) nxt.push_back(cr_mul(R, a, b));
      gens = nxt;
    }
  }
  KMat Irows;
  for (auto& g : gens)
    for (auto& row : mult_matrix(R, g)) Irows.push_back(row);
  auto S = jets(M.Phi, n, R.A);
  auto I = jets(Irows, n, R.A);
  int rs = rank_over_frac(S);
  int ri = rank_over_frac(I);
  auto both = S;
  both.insert(both.end(), I.begin(), I.end());
  int rb = rank_over_frac(both);
  return rs == ri && ri == rb;
}

DualMotive tensor_motives(const DualMotive& M1, const DualMotive& M2) {
  const KRing& A1 = *M1.R.A;
  const KRing& A2 = *M2.R.A;
  if (M1.R.kind != M2.R.kind || M1.rank != M2.rank || A1.F != A2.F || A1.E != A2.E || !(A1.u == A2.u) ||
      M1.pts.size() != M2.pts.size())
    throw ModelMismatch("tensor of motives over different models");
  ShtukaPair P;
  P.ell = M1.pair.ell;
  P.h = cr_mul(M1.R, M1.pair.h, M2.pair.h);
  CMDivisor Xi = M1.xi;
  for (auto& [l, m] : M2.xi) Xi[l] += m;
  std::map<std::string, int> dv;
  for (auto& [l, m] : M1.pair.divisor) dv[l] += m;
  for (auto& [l, m] : M2.pair.divisor) dv[l] += m;
  for (auto& [l, m] : dv)
    if (m) P.divisor.push_back({l, m});
  MotiveSetup S;
  S.R = M1.R;
  S.w = M1.w;
  S.pts = M1.pts;
  S.nu = M1.nu;
  S.K.name = M1.model == M2.model ? M1.model : M1.model + "*" + M2.model;
  S.K.kind = M1.R.kind;
  S.K.ell = M1.R.r;
  S.K.m.assign(static_cast<std::size_t>(M1.R.r + 1), FPoly());
  DualMotive M = build_motive(S, P, Xi, false);
  int deg = 0;
  for (auto& [l, m] : Xi) deg += m;
  DetReport d = check_det(M);
  if (!d.ok || d.n != deg) throw BasisExpansionFailure("tensor determinant mismatch");
  return M;
}

std::vector<int> hodge_pink_weights(const DualMotive& M) {
  const int r = M.rank;
  std::vector<int> dk(static_cast<std::size_t>(r + 1), 0);
  for (int k = 1; k <= r; ++k) {
    int best = -1;
    for (unsigned rs = 0; rs < (1u << r); ++rs) {
      if (__builtin_popcount(rs) != k) continue;
      for (unsigned cs = 0; cs < (1u << r); ++cs) {
        if (__builtin_popcount(cs) != k) continue;
        KMat sub;
        for (int i = 0; i < r; ++i) {
          if (!(rs >> i & 1)) continue;
          std::vector<KPoly> row;
          for (int j = 0; j < r; ++j)
            if (cs >> j & 1) row.push_back(M.Phi[i][j]);
          sub.push_back(row);
        }
        KPoly d = det(sub);
        if (d.is_zero()) continue;
        int o = ord_theta(d);
        if (best < 0 || o < best) best = o;
      }
    }
    if (best < 0) throw ConsistencyFailure("Phi is singular");
    dk[k] = best;
  }
  std::vector<int> w;
  for (int k = 1; k <= r; ++k) w.push_back(-(dk[k] - dk[k - 1]));
  std::sort(w.begin(), w.end());
  return w;
}

std::vector<int> expected_weights(const DualMotive& M) {
  std::vector<int> w;
  for (auto& P : M.pts) {
    auto it = M.xi.find(P.label);
    w.push_back(it == M.xi.end() ? 0 : -it->second);
  }
  std::sort(w.begin(), w.end());
  return w;
}

std::vector<std::vector<InfElem>> eigendifferentials(const DualMotive& M) {
  std::vector<std::vector<InfElem>> out;
  const int q = M.R.A->q;
  FieldPtr F = M.R.A->F;
  for (std::size_t i = 0; i < M.pts.size(); ++i) {
    std::vector<InfElem> row;
    if (M.R.kind == ModelKind::ConstExt) {
      for (int j = 0; j < M.rank; ++j) row.push_back(InfElem::constant(F, q, j == M.pts[i].component ? 1 : 0));
    } else {
      InfElem nu = to_inf(M.nu[i], M.w);
      InfElem p = InfElem::constant(F, q, 1, nu.e);
      for (int j = 0; j < M.rank; ++j) {
        row.push_back(p);
        p = p * nu;
      }
    }
    out.push_back(row);
  }
  return out;
}

std::vector<PeriodSymbol> period_symbols(const DualMotive& M, const InfMatrix& psi_inv_theta) {
  auto om = eigendifferentials(M);
  std::vector<PeriodSymbol> out;
  for (std::size_t i = 0; i < M.pts.size(); ++i) {
    InfElem s = om[i][0] * psi_inv_theta[0][0];
    for (int j = 1; j < M.rank; ++j) s = s + om[i][j] * psi_inv_theta[0][j];
    out.push_back({M.pts[i].label, s});
  }
  return out;
}

ExtendedSymbol extended_symbol(const MotiveSetup& S, const std::string& xi1, const std::string& xi2) {
  std::set<int> fibers;
  for (auto& P : S.pts) fibers.insert(P.fiber);
  const int n = S.K.degree();
  const int k = n / static_cast<int>(fibers.size());
  return {xi1, xi2, Rat(1, n), Rat(1, k)};
}

DualMotive carlitz_tensor_motive(int q, int n) {
  if (n < 1) throw InvalidArgument("tensor power must be positive");
  MotiveSetup S = setup_motive(rational_model(q));
  CMDivisor Xi{{"xi_theta", n}};
  DualMotive M = build_motive(S, solve_shtuka(S, Xi), Xi);
  M.model = "carlitz-tensor:" + std::to_string(n);
  return M;
}

}  // namespace fcm
