// SPDX-License-Identifier: Apache-2.0
#include "fcm/tmodule.hpp"

#include <algorithm>
#include <cstdlib>

#include "fcm/errors.hpp"
#include "fcm/newton.hpp"
#include "fcm/special.hpp"

namespace fcm {

namespace {

constexpr std::int64_t kGuard = 8;

KEMat kzero(const KRingPtr& A, int d) { return KEMat(d, std::vector<KElem>(d, KElem::zero(A))); }

KEMat kmul(const KEMat& X, const KEMat& Y) {
  const int d = static_cast<int>(X.size());
  KEMat Z = kzero(X[0][0].R, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      if (X[i][k].is_zero()) continue;
      for (int j = 0; j < d; ++j)
        if (!Y[k][j].is_zero()) Z[i][j] = Z[i][j] + X[i][k] * Y[k][j];
    }
  return Z;
}

KEMat kadd(const KEMat& X, const KEMat& Y) {
  KEMat Z = X;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < X.size(); ++j) Z[i][j] = X[i][j] + Y[i][j];
  return Z;
}

KEMat ktwist(const KEMat& X, int k) {
  KEMat Z = X;
  for (auto& row : Z)
    for (auto& x : row) x = twist(x, k);
  return Z;
}

bool kzero_p(const KEMat& X) {
  for (auto& row : X)
    for (auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

KFMat tofrac(const KEMat& X) {
  KFMat Z;
  for (auto& row : X) {
    std::vector<KFrac> r;
    for (auto& x : row) r.push_back(KFrac::of(x));
    Z.push_back(r);
  }
  return Z;
}

KFMat fzero(const KRingPtr& A, int d) { return KFMat(d, std::vector<KFrac>(d, KFrac::zero(A))); }

KFMat fmul(const KFMat& X, const KFMat& Y) {
  const int d = static_cast<int>(X.size());
  KFMat Z = fzero(X[0][0].num.R, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      if (X[i][k].is_zero()) continue;
      for (int j = 0; j < d; ++j)
        if (!Y[k][j].is_zero()) Z[i][j] = Z[i][j] + X[i][k] * Y[k][j];
    }
  return Z;
}

KFMat fadd(const KFMat& X, const KFMat& Y, bool sub = false) {
  KFMat Z = X;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < X.size(); ++j) Z[i][j] = sub ? X[i][j] - Y[i][j] : X[i][j] + Y[i][j];
  return Z;
}

KFMat ftwist(const KFMat& X, int k) {
  KFMat Z = X;
  for (auto& row : Z)
    for (auto& x : row) x = twist(x, k);
  return Z;
}

KFMat fscale(const KFMat& X, const KFrac& s) {
  KFMat Z = X;
  for (auto& row : Z)
    for (auto& x : row)
      if (!x.is_zero()) x = x * s;
  return Z;
}

bool fzero_p(const KFMat& X) {
  for (auto& row : X)
    for (auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

std::int64_t qpow(int q, int n) {
  std::int64_t r = 1;
  for (int i = 0; i < n; ++i) r *= q;
  return r;
}

// nilpotent part of d rho_t
KEMat nil_part(const TModule& rho) {
  KEMat Nn = rho.rho_t[0];
  for (int i = 0; i < rho.d; ++i) Nn[i][i] = Nn[i][i] - KElem::theta(rho.A);
  return Nn;
}

// X (theta^{q^n} + Nn) - (theta + Nn) X = R
KFMat sylvester_exact(const TModule& rho, const KFMat& R, int n) {
  KFrac c = KFrac::of(pow(KElem::theta(rho.A), static_cast<unsigned>(qpow(rho.q, n))) - KElem::theta(rho.A));
  KFrac ci = inverse(c);
  KFMat Nn = tofrac(nil_part(rho));
  KFMat X = fzero(rho.A, rho.d);
  KFMat term = R;
  KFrac cp = ci;
  for (int m = 0; m < 2 * rho.d + 1 && !fzero_p(term); ++m) {
    X = fadd(X, fscale(term, cp), m % 2 == 1);
    term = fadd(fmul(term, Nn), fmul(Nn, term), true);
    cp = cp * ci;
  }
  if (!fzero_p(term)) throw SingularRecursion("nilpotent part does not vanish");
  return X;
}

KFMat fidentity(const KRingPtr& A, int d) {
  KFMat I = fzero(A, d);
  for (int i = 0; i < d; ++i) I[i][i] = KFrac::one(A);
  return I;
}

// ---- numeric helpers ----

std::int64_t min_lead(const InfMatrix& M) {
  std::int64_t m = InfElem::kExact;
  for (auto& row : M)
    for (auto& x : row)
      if (!x.exact_zero()) m = std::min(m, x.v);
  return m;
}

InfElem mul_to(const InfElem& x, const InfElem& y, std::int64_t P) {
  if (x.exact_zero() || y.exact_zero()) {
    InfElem z = x.exact_zero() ? x : y;
    return z;
  }
  InfElem a = x.truncate(P - y.v), b = y.truncate(P - x.v);
  return (a * b).truncate(P);
}

InfMatrix izero(const InfElem& proto, int d) {
  return InfMatrix(d, std::vector<InfElem>(d, InfElem::zero(proto.F, proto.q, proto.e)));
}

InfMatrix imul_to(const InfMatrix& X, const InfMatrix& Y, std::int64_t P) {
  const int d = static_cast<int>(X.size());
  InfMatrix Z = izero(X[0][0], d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      if (X[i][k].exact_zero()) continue;
      for (int j = 0; j < d; ++j)
        if (!Y[k][j].exact_zero()) Z[i][j] = Z[i][j] + mul_to(X[i][k], Y[k][j], P);
    }
  return Z;
}

InfMatrix iadd(const InfMatrix& X, const InfMatrix& Y, bool sub = false) {
  InfMatrix Z = X;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < X.size(); ++j) Z[i][j] = sub ? X[i][j] - Y[i][j] : X[i][j] + Y[i][j];
  return Z;
}

InfMatrix itwist(const InfMatrix& X, int k, std::int64_t cap) {
  InfMatrix Z = X;
  for (auto& row : Z)
    for (auto& x : row) x = frobenius(x, k, cap);
  return Z;
}

InfMatrix itrunc(const InfMatrix& X, std::int64_t P) {
  InfMatrix Z = X;
  for (auto& row : Z)
    for (auto& x : row) x = x.truncate(P);
  return Z;
}

// 1 / (theta^Q - theta) to relative precision rel (u-units)
InfElem inv_c(const InfElem& proto, std::int64_t Q, std::int64_t rel) {
  const int e = proto.e;
  InfElem r = InfElem::zero(proto.F, proto.q, e);
  r.v = Q * e;
  r.N = r.v + std::max<std::int64_t>(rel, 1);
  r.c.assign(static_cast<std::size_t>(r.N - r.v), 0);
  const std::int64_t step = (Q - 1) * e;
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(r.c.size()); k += step) r.c[k] = 1;
  r.normalize();
  return r;
}

struct Frame {
  InfElem proto;
  InfElem wv;
};

Frame make_frame(const TModule& rho, const InfElem& proto) {
  InfElem a = rho.wv, b = proto;
  unify(a, b);
  return {InfElem::constant(a.F, a.q, 1, a.e), a};
}

InfMatrix to_num(const KEMat& X, const Frame& fr) {
  InfMatrix Z;
  for (auto& row : X) {
    std::vector<InfElem> r;
    for (auto& x : row) r.push_back(x.is_zero() ? InfElem::zero(fr.proto.F, fr.proto.q, fr.proto.e) : to_inf(x, fr.wv));
    Z.push_back(r);
  }
  return Z;
}

CoeffSeries build_series(const TModule& rho, Rat vmin, std::int64_t N, const InfElem& proto, bool is_log) {
  Frame fr = make_frame(rho, proto);
  const int e = fr.proto.e, q = rho.q, d = rho.d;
  const std::int64_t Nu = N * e, G = kGuard * e;
  const std::int64_t vu = (vmin * Rat(e)).floor();
  std::vector<InfMatrix> A;
  for (auto& C : rho.rho_t) A.push_back(to_num(C, fr));
  InfMatrix Nn = to_num(nil_part(rho), fr);
  CoeffSeries S;
  S.vmin = vmin;
  S.N = N;
  InfMatrix I = izero(fr.proto, d);
  for (int i = 0; i < d; ++i) I[i][i] = fr.proto;
  S.c.push_back(I);
  const int deg = static_cast<int>(A.size()) - 1;
  int good = 0;
  Rat prev_b = Rat(-(std::int64_t(1) << 40));
  for (int n = 1;; ++n) {
    const std::int64_t Q = qpow(q, n);
    if (n > 40 || Q * (std::abs(vu) + e) > (std::int64_t(1) << 23))
      throw ChainNotConverging("coefficient series does not settle below the target");
    const std::int64_t Pn = Nu + G - Q * vu;
    const std::int64_t Pr = Pn - Q * e;
    InfMatrix R = izero(fr.proto, d);
    for (int k = 1; k <= std::min(n, deg); ++k) {
      if (is_log) {
        // L_{n-k} A_k^{(n-k)}
        const InfMatrix& Lp = S.c[n - k];
        std::int64_t lp = min_lead(Lp);
        InfMatrix Ak = itwist(A[k], n - k, lp >= InfElem::kExact ? Pr : Pr - lp);
        R = iadd(R, imul_to(Lp, Ak, Pr), true);
      } else {
        std::int64_t la = min_lead(A[k]);
        InfMatrix Et = itwist(S.c[n - k], k, la >= InfElem::kExact ? Pr : Pr - la);
        R = iadd(R, imul_to(A[k], Et, Pr));
      }
    }
    std::int64_t lr = min_lead(R);
    InfMatrix X = izero(fr.proto, d);
    if (lr < InfElem::kExact) {
      InfElem ic = inv_c(fr.proto, Q, Pn - (lr + Q * e) + G);
      InfMatrix term = R;
      InfElem cp = ic;
      for (int m = 0; m < 2 * d + 1; ++m) {
        InfMatrix sc = term;
        for (auto& row : sc)
          for (auto& x : row) x = mul_to(x, cp, Pn);
        X = iadd(X, sc, m % 2 == 1);
        term = iadd(imul_to(term, Nn, Pr), imul_to(Nn, term, Pr), true);
        if (min_lead(term) >= InfElem::kExact) break;
        bool allz = true;
        for (auto& row : term)
          for (auto& x : row) allz = allz && x.is_zero();
        if (allz) break;
        cp = mul_to(cp, ic, Pn);
      }
      X = itrunc(X, Pn);
    }
    S.c.push_back(X);
    std::int64_t lx = std::min(min_lead(X), Pn);
    for (auto& row : X)
      for (auto& x : row)
        if (!x.exact_zero() && x.is_zero()) lx = std::min(lx, x.N);
    Rat b = lx >= InfElem::kExact ? kInfVal : Rat(lx + Q * vu, e);
    if (b >= Rat(N + kGuard) && b >= prev_b) {
      if (++good >= 3) break;
    } else {
      good = 0;
    }
    prev_b = b;
  }
  return S;
}

}  // namespace

TwPoly tw_mul(const TwPoly& f, const TwPoly& g) {
  if (f.empty() || g.empty()) return {};
  const KRingPtr& A = f[0][0][0].R;
  const int d = static_cast<int>(f[0].size());
  TwPoly h(f.size() + g.size() - 1, kzero(A, d));
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] = kadd(h[i + j], kmul(f[i], ktwist(g[j], static_cast<int>(i))));
  while (h.size() > 1 && kzero_p(h.back())) h.pop_back();
  return h;
}

KEMat kemat_identity(const KRingPtr& A, int d) {
  KEMat I = kzero(A, d);
  for (int i = 0; i < d; ++i) I[i][i] = KElem::constant(A, 1);
  return I;
}

TModule carlitz_module(int q) {
  MotiveSetup S = setup_motive(rational_model(q));
  TModule rho;
  rho.name = "carlitz";
  rho.q = q;
  rho.A = S.R.A;
  rho.wv = S.w;
  rho.rho_t = {KEMat{{KElem::theta(rho.A)}}, KEMat{{KElem::constant(rho.A, 1)}}};
  return rho;
}

TModule carlitz_tensor_module(int q, int n) {
  if (n < 1) throw InvalidArgument("tensor power must be positive");
  if (n == 1) return carlitz_module(q);
  MotiveSetup S = setup_motive(rational_model(q));
  TModule rho;
  rho.name = "carlitz-tensor:" + std::to_string(n);
  rho.q = q;
  rho.d = n;
  rho.A = S.R.A;
  rho.wv = S.w;
  KEMat D = kzero(rho.A, n), E = kzero(rho.A, n);
  for (int i = 0; i < n; ++i) D[i][i] = KElem::theta(rho.A);
  for (int i = 0; i + 1 < n; ++i) D[i][i + 1] = KElem::constant(rho.A, 1);
  E[n - 1][0] = KElem::constant(rho.A, 1);
  rho.rho_t = {D, E};
  return rho;
}

TModule kummer_module(const MotiveSetup& S) {
  const CMFieldModel& K = S.K;
  if (K.kind != ModelKind::Monogenic || !K.has_param || K.tE != K.q - 1)
    throw ModelMismatch("kummer t-module needs a model y^{q-1} = c t");
  TModule rho;
  rho.name = K.name;
  rho.q = K.q;
  rho.r = K.q - 1;
  rho.A = S.R.A;
  rho.wv = S.w;
  rho.rho_y = {KEMat{{KElem::w(rho.A)}}, KEMat{{KElem::constant(rho.A, 1)}}};
  TwPoly p = {KEMat{{KElem::constant(rho.A, 1)}}};
  for (int i = 0; i < rho.r; ++i) p = tw_mul(p, rho.rho_y);
  // rho_t = (rho_y)^{q-1} / c with w^{q-1} = theta / c
  Elt ci = S.R.A->F->inv(embed(K.Fq, S.R.A->F, K.tc));
  for (auto& C : p) C[0][0] = C[0][0] * ci;
  rho.rho_t = p;
  check_tmodule(rho);
  return rho;
}

void check_tmodule(const TModule& rho) {
  if (rho.rho_t.size() < 2) throw ConsistencyFailure("rho_t must have positive tau-degree");
  KEMat Nn = nil_part(rho);
  KEMat P = Nn;
  for (int i = 1; i < rho.d; ++i) P = kmul(P, Nn);
  if (!kzero_p(P)) throw ConsistencyFailure("d rho_t - theta is not nilpotent");
  if (!rho.rho_y.empty()) {
    TwPoly a = tw_mul(rho.rho_y, rho.rho_t), b = tw_mul(rho.rho_t, rho.rho_y);
    bool same = a.size() == b.size();
    for (std::size_t k = 0; same && k < a.size(); ++k)
      for (int i = 0; i < rho.d; ++i)
        for (int j = 0; j < rho.d; ++j) same = same && a[k][i][j] == b[k][i][j];
    if (!same) throw ConsistencyFailure("rho_y does not commute with rho_t");
  }
}

std::vector<KFMat> exp_coeffs(const TModule& rho, int imax) {
  std::vector<KFMat> E = {fidentity(rho.A, rho.d)};
  const int deg = static_cast<int>(rho.rho_t.size()) - 1;
  for (int n = 1; n <= imax; ++n) {
    KFMat R = fzero(rho.A, rho.d);
    for (int k = 1; k <= std::min(n, deg); ++k) R = fadd(R, fmul(tofrac(rho.rho_t[k]), ftwist(E[n - k], k)));
    E.push_back(sylvester_exact(rho, R, n));
  }
  return E;
}

std::vector<KFMat> log_coeffs(const TModule& rho, int imax) {
  std::vector<KFMat> L = {fidentity(rho.A, rho.d)};
  const int deg = static_cast<int>(rho.rho_t.size()) - 1;
  for (int n = 1; n <= imax; ++n) {
    KFMat R = fzero(rho.A, rho.d);
    for (int k = 1; k <= std::min(n, deg); ++k) R = fadd(R, fmul(L[n - k], tofrac(ktwist(rho.rho_t[k], n - k))), true);
    L.push_back(sylvester_exact(rho, R, n));
  }
  return L;
}

bool exp_log_identity(const std::vector<KFMat>& E, const std::vector<KFMat>& L) {
  const std::size_t K = std::min(E.size(), L.size());
  if (K == 0) return false;
  const KRingPtr& A = E[0][0][0].num.R;
  const int d = static_cast<int>(E[0].size());
  for (std::size_t k = 1; k < K; ++k) {
    KFMat s = fzero(A, d);
    for (std::size_t i = 0; i <= k; ++i) s = fadd(s, fmul(E[i], ftwist(L[k - i], static_cast<int>(i))));
    if (!fzero_p(s)) return false;
  }
  return true;
}

bool exp_functional_eq(const TModule& rho, const std::vector<KFMat>& E) {
  const int deg = static_cast<int>(rho.rho_t.size()) - 1;
  KFMat D = tofrac(rho.rho_t[0]);
  for (std::size_t n = 1; n < E.size(); ++n) {
    // coefficient of z^{(n)} in exp(d z) - rho_t(exp z)
    KFMat s = fmul(E[n], ftwist(D, static_cast<int>(n)));
    for (int k = 0; k <= std::min<int>(static_cast<int>(n), deg); ++k)
      s = fadd(s, fmul(tofrac(rho.rho_t[k]), ftwist(E[n - k], k)), true);
    if (!fzero_p(s)) return false;
  }
  return true;
}

CoeffSeries exp_series(const TModule& rho, Rat vmin, std::int64_t N, const InfElem& proto) {
  return build_series(rho, vmin, N, proto, false);
}

CoeffSeries log_series(const TModule& rho, Rat vmin, std::int64_t N, const InfElem& proto) {
  return build_series(rho, vmin, N, proto, true);
}

InfVec apply_series(const CoeffSeries& S, const InfVec& z) {
  const InfElem& pr = S.c[0][0][0];
  const int d = static_cast<int>(z.size());
  InfVec zz = z;
  for (auto& x : zz) {
    InfElem p = pr;
    unify(p, x);
    if (p.e != pr.e || p.F != pr.F) throw IncompatibleFields("argument lives outside the coefficient frame");
  }
  const int e = pr.e;
  const std::int64_t P = (S.N + kGuard) * e;
  InfVec out(d, InfElem::zero(pr.F, pr.q, e));
  for (std::size_t i = 0; i < S.c.size(); ++i) {
    const InfMatrix& C = S.c[i];
    std::int64_t lc = min_lead(C);
    if (lc >= InfElem::kExact) continue;
    for (int k = 0; k < d; ++k) {
      InfElem zt = frobenius(zz[k], static_cast<long>(i), P - lc);
      for (int j = 0; j < d; ++j)
        if (!C[j][k].exact_zero()) out[j] = out[j] + mul_to(C[j][k], zt, P);
    }
  }
  for (auto& x : out) x = x.truncate(S.N * e);
  return out;
}

namespace {

Rat min_val(const InfVec& z) {
  Rat m = kInfVal;
  for (auto& x : z)
    if (!x.exact_zero()) m = std::min(m, x.is_zero() ? x.prec() : x.val());
  return m;
}

}  // namespace

InfVec exp_eval(const TModule& rho, const InfVec& z, std::int64_t N) {
  Rat v = min_val(z);
  if (v >= kInfVal) return z;
  return apply_series(exp_series(rho, v, N, z[0]), z);
}

InfVec log_eval(const TModule& rho, const InfVec& z, std::int64_t N) {
  Rat v = min_val(z);
  if (v >= kInfVal) return z;
  return apply_series(log_series(rho, v, N, z[0]), z);
}

std::vector<InfElem> preimages(const TModule& rho, const InfElem& x, Rat target) {
  if (rho.d != 1) throw Unsupported("torsion by root finding needs d = 1");
  Frame fr = make_frame(rho, x);
  const int deg = static_cast<int>(rho.rho_t.size()) - 1;
  const std::int64_t Q = qpow(rho.q, deg);
  InfPoly f(static_cast<std::size_t>(Q + 1), InfElem::zero(fr.proto.F, fr.proto.q, fr.proto.e));
  for (int k = 0; k <= deg; ++k) f[qpow(rho.q, k)] = to_inf(rho.rho_t[k][0][0], fr.wv);
  f[0] = -x;
  std::vector<InfElem> out;
  if (x.exact_zero()) {
    f.erase(f.begin());
    out.push_back(x);
  }
  for (auto& r : newton_roots(f, target)) {
    if (r.mult != 1) throw PrecisionExhausted("torsion roots collide at this precision");
    out.push_back(r.root);
  }
  return out;
}

namespace {

bool root_less(const InfElem& x, const InfElem& y) {
  InfElem a = x, b = y;
  unify(a, b);
  Rat va = val_or_prec(a), vb = val_or_prec(b);
  if (va != vb) return va > vb;
  if (a.is_zero() || b.is_zero()) return false;
  return a.F->dlog(a.lead_coef()) < a.F->dlog(b.lead_coef());
}

bool near(const InfElem& a, const InfElem& b) {
  Rat d = diff_val(a, b);
  if (d >= kInfVal) return true;
  if (a.exact() && b.exact()) return false;
  Rat lim = std::min(a.prec(), b.prec());
  Rat lv = std::max(val_or_prec(a), val_or_prec(b));
  return d >= lv + (lim - lv) / Rat(2);
}

InfElem deepest(std::vector<InfElem> v) {
  std::sort(v.begin(), v.end(), root_less);
  return v.front();
}

std::vector<InfElem> fq_basis(const TModule& rho, Rat target) {
  InfElem z = InfElem::zero(rho.wv.F, rho.q, rho.wv.e);
  std::vector<InfElem> roots;
  for (auto& r : preimages(rho, z, target))
    if (!r.is_zero()) roots.push_back(r);
  std::sort(roots.begin(), roots.end(), root_less);
  FieldPtr Fq = base_field(rho.q);
  std::vector<InfElem> basis, span = {z};
  for (auto& r : roots) {
    bool in = false;
    for (auto& s : span) in = in || near(s, r);
    if (in) continue;
    basis.push_back(r);
    std::vector<InfElem> nxt;
    for (auto& s : span)
      for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(rho.q); ++c)
        nxt.push_back(s + r.scaled(c == 0 ? 0 : embed(Fq, r.F, Fq->exp_gen(c - 1))));
    span = nxt;
  }
  const int deg = static_cast<int>(rho.rho_t.size()) - 1;
  if (static_cast<int>(basis.size()) != deg) throw PrecisionExhausted("t-torsion does not have the expected rank");
  return basis;
}

}  // namespace

std::vector<std::vector<InfElem>> torsion_points(const TModule& rho, int n, Rat target) {
  std::vector<std::vector<InfElem>> chains;
  for (auto& x : fq_basis(rho, target)) {
    std::vector<InfElem> ch = {x};
    while (static_cast<int>(ch.size()) < n) ch.push_back(deepest(preimages(rho, ch.back(), target)));
    chains.push_back(ch);
  }
  return chains;
}

Lattice period_lattice(const TModule& rho, std::int64_t N) {
  if (rho.d != 1) throw Unsupported("period lattice for d > 1 needs supplied torsion data");
  const int max_depth = 40;
  Rat target(N + max_depth + 2 * kGuard);
  Lattice L;
  L.N = N;
  for (auto& x1 : fq_basis(rho, target)) {
    std::vector<InfElem> ch = {x1};
    int steady = 0;
    InfElem lam;
    bool done = false;
    while (!done) {
      if (static_cast<int>(ch.size()) > max_depth) throw ChainNotConverging("torsion chain never enters the log disk");
      InfElem nx = deepest(preimages(rho, ch.back(), target));
      steady = nx.val() == ch.back().val() + Rat(1) ? steady + 1 : 0;
      ch.push_back(nx);
      if (steady < 2) continue;
      try {
        const std::int64_t n = static_cast<std::int64_t>(ch.size());
        InfElem lg = log_eval(rho, {ch.back()}, N + n + kGuard)[0];
        lam = lg.shift(-n * lg.e);
        done = true;
      } catch (const ChainNotConverging&) {
      }
    }
    L.depth.push_back(static_cast<int>(ch.size()));
    L.basis.push_back({lam.truncate(N * lam.e)});
  }
  // valuation-greedy reduction over F_q[theta]
  FieldPtr Fq = base_field(rho.q);
  for (int it = 0; it < 200; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < L.basis.size(); ++i)
      for (std::size_t j = 0; j < L.basis.size(); ++j) {
        if (i == j) continue;
        InfElem a = L.basis[i][0], b = L.basis[j][0];
        unify(a, b);
        if (a.is_zero() || b.is_zero()) continue;
        std::int64_t k = a.v - b.v;  // b is larger by theta^{k/e}
        if (k < 0 || k % a.e) continue;
        Elt c = a.F->div(b.lead_coef(), a.lead_coef());
        Elt cq;
        if (!restrict_to(a.F, Fq, c, cq)) continue;
        InfElem nb = b - a.shift(-k).scaled(c);
        if (val_or_prec(nb) > val_or_prec(b)) {
          L.basis[j][0] = nb;
          changed = true;
        }
      }
    if (!changed) break;
  }
  std::stable_sort(L.basis.begin(), L.basis.end(),
                   [](const InfVec& x, const InfVec& y) { return val_or_prec(x[0]) > val_or_prec(y[0]); });
  for (auto& lam : L.basis) {
    InfElem ex = exp_eval(rho, lam, N)[0];
    L.exp_residual.push_back(val_or_prec(ex));
    if (val_or_prec(ex) < Rat(N) / Rat(2)) throw ConsistencyFailure("period does not lie in the kernel of exp");
  }
  return L;
}

TateSeries agf(const TModule& rho, const InfVec& lambda, int T, std::int64_t N, int coord) {
  if (rho.d != 1) throw Unsupported("generating functions for d > 1 are not shipped");
  const InfElem& lam = lambda[coord];
  TateSeries s;
  if (lam.exact_zero()) {
    s = TateSeries::zero_like(lam, T);
    return s;
  }
  InfElem z0 = lam.shift(lam.e);
  CoeffSeries S = exp_series(rho, val_or_prec(z0), N, z0);
  const int e = S.c[0][0][0].e;
  Rat B = val_or_prec(lam) + Rat(1);
  for (int n = 0; n < T; ++n) {
    InfElem z = lam.shift(static_cast<std::int64_t>(n + 1) * lam.e);
    InfElem a = apply_series(S, {z})[0];
    s.a.push_back(a);
    if (!a.is_zero()) B = std::min(B, a.val() - Rat(n));
  }
  (void)e;
  s.decay = Decay::linear(Rat(1), B);
  return s;
}

InfElem de_rham_pairing(const TModule& rho, int k, const InfVec& lambda, std::int64_t N) {
  if (k < 1) throw NoDecay("the untwisted generating function has a pole at theta");
  const InfElem& lam = lambda[0];
  if (lam.exact_zero()) return lam;
  const std::int64_t Q = qpow(rho.q, k);
  Rat B = val_or_prec(lam) + Rat(1);
  // tail (Q-1) T + Q B' >= N + guard, with B' <= B; probe with a short series first
  TateSeries probe = agf(rho, lambda, 4, N, 0);
  B = std::min(B, probe.decay.B);
  Rat need = Rat(N + kGuard) - Rat(Q) * B;
  int T = std::max<std::int64_t>(4, (need / Rat(Q - 1)).ceil() + 1);
  TateSeries f = agf(rho, lambda, T, N + T, 0);
  const int e = f.a[0].e;
  TateSeries g = twist(f, k, (N + T + kGuard) * e);
  InfElem v = eval_theta(g, Rat(N));
  return v.truncate(N * v.e);
}

InfMatrix quasi_period_matrix(const TModule& rho, const Lattice& L, std::int64_t N) {
  const int r = static_cast<int>(L.basis.size());
  InfMatrix Q(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) Q[i].push_back(de_rham_pairing(rho, i + 1, L.basis[j], N));
  return Q;
}

// ---- Psi ----

KMat phi_rho(const TModule& rho) {
  if (rho.d != 1) throw Unsupported("companion motive needs d = 1");
  const KRingPtr& A = rho.A;
  const int r = static_cast<int>(rho.rho_t.size()) - 1;
  const KElem& Ar = rho.rho_t[r][0][0];
  if (!Ar.is_constant() || Ar.is_zero()) throw Unsupported("leading coefficient of rho_t must be a nonzero constant");
  Elt ai = A->F->inv(Ar.c[0].c[0]);
  KMat Th(r, std::vector<KPoly>(r, KPoly::zero(A)));
  for (int i = 0; i + 1 < r; ++i) Th[i][i + 1] = KPoly::constant(KElem::constant(A, 1));
  Th[r - 1][0] = KElem::constant(A, ai) * KPoly::t_minus_theta(A);
  for (int k = 1; k < r; ++k) Th[r - 1][k] = KPoly::constant(-(rho.rho_t[k][0][0] * ai));
  KMat P(r, std::vector<KPoly>(r, KPoly::zero(A)));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) P[i][j] = Th[j][i];
  return P;
}

KMat motive_basis_change(const TModule& rho, const DualMotive& M) {
  const KRingPtr& A = rho.A;
  const int r = static_cast<int>(rho.rho_t.size()) - 1;
  if (M.rank != r) throw ModelMismatch("motive rank differs from the t-module rank");
  KMat B;
  if (rho.rho_y.empty()) {
    if (r != 1) throw ModelMismatch("rank > 1 needs a CM generator");
    B = kmat_identity(A, 1);
  } else {
    const KElem& Ar = rho.rho_t[r][0][0];
    Elt ai = A->F->inv(Ar.c[0].c[0]);
    const int dy = static_cast<int>(rho.rho_y.size()) - 1;
    // f^{(n)} = sum_i R[n][i] f^{(i+1)}
    std::vector<std::vector<KPoly>> R(static_cast<std::size_t>(r + dy + 1), std::vector<KPoly>(r, KPoly::zero(A)));
    for (int n = 1; n <= r; ++n) R[n][n - 1] = KPoly::constant(KElem::constant(A, 1));
    for (int n = 1; n + r <= r + dy; ++n) {
      KPoly tt = KPoly::t(A) - KPoly::constant(twist(KElem::theta(A), n));
      for (int i = 0; i < r; ++i) {
        KPoly s = tt * R[n][i];
        for (int k = 1; k < r; ++k) s = s - twist(rho.rho_t[k][0][0], n) * R[n + k][i];
        R[n + r][i] = KElem::constant(A, ai) * s;
      }
    }
    KMat Y(r, std::vector<KPoly>(r, KPoly::zero(A)));
    for (int k = 1; k <= r; ++k)
      for (int i = 0; i < r; ++i) {
        KPoly s = KPoly::zero(A);
        for (int j = 0; j <= dy; ++j)
          if (k + j <= r + dy) s = s + twist(rho.rho_y[j][0][0], k) * R[k + j][i];
        Y[i][k - 1] = s;
      }
    std::vector<KPoly> row(r, KPoly::zero(A));
    row[r - 1] = KPoly::constant(KElem::constant(A, 1));
    for (int i = 0; i < r; ++i) {
      B.push_back(row);
      std::vector<KPoly> nx(r, KPoly::zero(A));
      for (int k = 0; k < r; ++k)
        for (int j = 0; j < r; ++j) nx[j] = nx[j] + row[k] * Y[k][j];
      row = nx;
    }
  }
  KMat lhs = B * twist(phi_rho(rho), 1);
  KMat rhs = twist(M.Phi, 1) * twist(B, 1);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (!(lhs[i][j] == rhs[i][j])) throw ConsistencyFailure("t-module and motive are not related by the basis change");
  return B;
}

namespace {

TateSeries series_inverse(const TateSeries& D, std::int64_t Nabs) {
  const int T = D.T();
  TateSeries h;
  h.decay = Decay::none();
  InfElem h0 = divide(InfElem::constant(D.a[0].F, D.a[0].q, 1, D.a[0].e), D.a[0], Nabs);
  h.a.push_back(h0);
  for (int n = 1; n < T; ++n) {
    InfElem s = InfElem::zero(D.a[0].F, D.a[0].q, D.a[0].e);
    for (int k = 1; k <= n; ++k)
      if (!D.a[k].exact_zero()) s = s + D.a[k] * h.a[n - k];
    h.a.push_back(-(s * h0).truncate(Nabs));
  }
  return h;
}

TateSeries sneg(const TateSeries& f) {
  TateSeries g = f;
  for (auto& x : g.a) x = -x;
  return g;
}

TateSeries strunc(const TateSeries& f, std::int64_t Nabs) {
  TateSeries g = f;
  for (auto& x : g.a) x = x.truncate(Nabs);
  return g;
}

TateSeries sdet(const TateMatrix& A, std::int64_t Nabs) {
  const int r = A.rows;
  if (r == 1) return A.at(0, 0);
  TateSeries acc;
  for (int j = 0; j < r; ++j) {
    TateMatrix minor = TateMatrix::make(r - 1, r - 1);
    for (int i = 1; i < r; ++i) {
      int cc = 0;
      for (int k = 0; k < r; ++k)
        if (k != j) minor.at(i - 1, cc++) = A.at(i, k);
    }
    TateSeries term = strunc(A.at(0, j) * sdet(minor, Nabs), Nabs);
    if (j % 2) term = sneg(term);
    acc = j == 0 ? term : acc + term;
  }
  return acc;
}

TateMatrix sinverse(const TateMatrix& A, std::int64_t Nabs) {
  const int r = A.rows;
  TateSeries h = series_inverse(sdet(A, Nabs), Nabs);
  TateMatrix out = TateMatrix::make(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      // (A^{-1})_{ij} = (-1)^{i+j} det(minor_{ji}) / det
      TateSeries c;
      if (r == 1) {
        c = TateSeries::constant(InfElem::constant(A.at(0, 0).a[0].F, A.at(0, 0).a[0].q, 1, A.at(0, 0).a[0].e));
      } else {
        TateMatrix minor = TateMatrix::make(r - 1, r - 1);
        int ri = 0;
        for (int a = 0; a < r; ++a) {
          if (a == j) continue;
          int cc = 0;
          for (int b = 0; b < r; ++b)
            if (b != i) minor.at(ri, cc++) = A.at(a, b);
          ++ri;
        }
        c = sdet(minor, Nabs);
      }
      if ((i + j) % 2) c = sneg(c);
      out.at(i, j) = strunc(c * h, Nabs);
    }
  return out;
}

InfElem eval_at_theta(const KPoly& f, const InfElem& wv) {
  KElem s = KElem::zero(f.R);
  KElem th = KElem::theta(f.R);
  for (int i = f.deg(); i >= 0; --i) s = s * th + f.c[i];
  return to_inf(s, wv);
}

InfElem inv_frob(const InfElem& x) {
  try {
    return frobenius(x, -1);
  } catch (const NotAPower&) {
    return frobenius_root(x, 1);
  }
}

}  // namespace

PsiResult build_psi(const TModule& rho, const Lattice& L, const DualMotive& M, int T, std::int64_t N, Rat threshold) {
  PsiResult out;
  const int q = rho.q;
  if (rho.d > 1) {
    if (M.rank != 1) throw ModelMismatch("tensor power motive must have rank 1");
    out.method = "omega-power";
    out.Psi = omega_psi(q, T, N, rho.d);
    out.Phi = to_tate(M.Phi, M.w);
    out.B = kmat_identity(M.R.A, 1);
    InfElem om = eval_theta(out.Psi.at(0, 0));
    out.psi_inv_theta = {{inverse(om).truncate(N * om.e)}};
    out.report = check_difference_eq(out.Phi, out.Psi, threshold);
    if (!out.report.pass) throw ConsistencyFailure("difference equation fails: " + out.report.str());
    return out;
  }
  const int r = static_cast<int>(rho.rho_t.size()) - 1;
  if (static_cast<int>(L.basis.size()) != r) throw InvalidArgument("lattice must have full rank");
  out.method = "agf";
  out.B = motive_basis_change(rho, M);
  const std::int64_t G = N + 3 * kGuard;
  std::vector<TateSeries> f;
  for (auto& lam : L.basis) f.push_back(agf(rho, lam, T, G));
  const int e = f[0].a[0].e;
  const std::int64_t cap = G * e;
  // Ups[i][j] = f_j^{(i)}
  TateMatrix U0 = TateMatrix::make(r, r), U1 = TateMatrix::make(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      U0.at(i, j) = strunc(twist(f[j], i, cap), cap);
      U1.at(i, j) = strunc(twist(f[j], i + 1, cap), cap);
    }
  TateMatrix PsiR = sinverse(transpose(U1), cap);
  TateMatrix PsiRm = sinverse(transpose(U0), cap);
  FieldPtr F = f[0].a[0].F;
  InfElem wv = rho.wv;
  {
    InfElem pr = InfElem::constant(F, q, 1, e);
    unify(wv, pr);
  }
  TateMatrix Bt = to_tate(out.B, wv);
  TateMatrix Bm = TateMatrix::make(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      std::vector<InfElem> cs;
      for (auto& c : out.B[i][j].c) cs.push_back(inv_frob(to_inf(c, wv)));
      if (cs.empty()) cs.push_back(InfElem::zero(F, q, e));
      Bm.at(i, j) = TateSeries::poly(cs);
    }
  out.Psi = Bt * PsiR;
  TateMatrix comp = Bm * PsiRm;
  for (auto& s : out.Psi.e) s = strunc(s, N * e + kGuard * e);
  out.Psi.inv_twist = comp.e;
  for (auto& s : out.Psi.inv_twist) s = strunc(s, N * e + kGuard * e);
  out.Phi = to_tate(M.Phi, wv);
  out.report = check_difference_eq(out.Phi, out.Psi, threshold);
  // Psi^{-1}(theta) = (Ups^{(1)}(theta))^T B(theta)^{-1}
  InfMatrix QP(r, std::vector<InfElem>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) QP[i][j] = de_rham_pairing(rho, j + 1, L.basis[i], N + kGuard);
  InfMatrix Bth(r, std::vector<InfElem>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) Bth[i][j] = eval_at_theta(out.B[i][j], wv);
  out.psi_inv_theta = mat_mul(QP, mat_inverse(Bth));
  if (!out.report.pass) throw ConsistencyFailure("difference equation fails: " + out.report.str());
  return out;
}

}  // namespace fcm
