// SPDX-License-Identifier: Apache-2.0
#include "fcm/ring.hpp"

#include <sstream>

#include "fcm/errors.hpp"

namespace fcm {

KRingPtr make_kring(FieldPtr F, int q, int E, FPoly u) {
  auto R = std::make_shared<KRing>();
  R->F = F;
  R->q = q;
  int a = 0;
  for (long x = 1; x < q; x *= F->p) ++a;
  R->a = a;
  R->E = E;
  R->u = u.F ? u.lift(F) : FPoly(F, {}, 'T');
  R->u.var = 'T';
  if (E < 1) throw InvalidArgument("E must be positive");
  return R;
}

KRingPtr make_kring(FieldPtr F, int q) { return make_kring(F, q, 1, FPoly(F, {}, 'T')); }

static void same_ring(const KElem& x, const KElem& y) {
  if (x.R != y.R && (x.R->F != y.R->F || x.R->E != y.R->E || !(x.R->u == y.R->u)))
    throw IncompatibleFields("ring elements from different rings");
}

KElem KElem::zero(const KRingPtr& R) {
  KElem z;
  z.R = R;
  z.c.assign(static_cast<std::size_t>(R->E), FPoly(R->F, {}, 'T'));
  return z;
}

KElem KElem::constant(const KRingPtr& R, Elt x) {
  KElem z = zero(R);
  z.c[0] = FPoly(R->F, {x}, 'T');
  return z;
}

KElem KElem::theta(const KRingPtr& R) {
  KElem z = zero(R);
  z.c[0] = FPoly(R->F, {0, 1}, 'T');
  return z;
}

KElem KElem::w(const KRingPtr& R) {
  if (R->E == 1) {
    KElem z = zero(R);
    z.c[0] = R->u;
    return z;
  }
  KElem z = zero(R);
  z.c[1] = FPoly(R->F, {1}, 'T');
  return z;
}

KElem KElem::from_poly(const KRingPtr& R, const FPoly& f) {
  KElem z = zero(R);
  z.c[0] = f.F == R->F ? f : f.lift(R->F);
  z.c[0].var = 'T';
  return z;
}

bool KElem::is_zero() const {
  for (auto& p : c)
    if (!p.is_zero()) return false;
  return true;
}

bool KElem::operator==(const KElem& o) const {
  for (std::size_t j = 0; j < c.size(); ++j)
    if (!(c[j] == o.c[j])) return false;
  return true;
}

bool KElem::is_constant() const {
  for (std::size_t j = 1; j < c.size(); ++j)
    if (!c[j].is_zero()) return false;
  return c[0].deg() <= 0;
}

int KElem::theta_deg() const {
  int d = -1;
  for (auto& p : c) d = std::max(d, p.deg());
  return d;
}

std::string KElem::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    bool single = c[j].c.size() == 1 || (c[j].deg() >= 0 && [&] {
      int nz = 0;
      for (auto x : c[j].c) nz += x != 0;
      return nz == 1;
    }());
    if (j == 0) {
      os << c[j].str();
    } else {
      if (!(c[j].deg() == 0 && c[j].c[0] == 1)) os << (single ? c[j].str() : "(" + c[j].str() + ")") << "*";
      os << R->wname;
      if (j > 1) os << "^" << j;
    }
  }
  if (first) return "0";
  std::string s = os.str();
  for (auto& ch : s)
    if (ch == 'T') ch = 'T';
  return s;
}

KElem operator+(const KElem& x, const KElem& y) {
  same_ring(x, y);
  KElem z = x;
  for (std::size_t j = 0; j < z.c.size(); ++j) z.c[j] = x.c[j] + y.c[j];
  return z;
}

KElem operator-(const KElem& x) {
  KElem z = x;
  for (auto& p : z.c) p = -p;
  return z;
}

KElem operator-(const KElem& x, const KElem& y) { return x + (-y); }

KElem operator*(const KElem& x, const KElem& y) {
  same_ring(x, y);
  const int E = x.R->E;
  std::vector<FPoly> acc(static_cast<std::size_t>(2 * E - 1), FPoly(x.R->F, {}, 'T'));
  for (int i = 0; i < E; ++i) {
    if (x.c[i].is_zero()) continue;
    for (int j = 0; j < E; ++j) {
      if (y.c[j].is_zero()) continue;
      acc[i + j] = acc[i + j] + x.c[i] * y.c[j];
    }
  }
  KElem z = KElem::zero(x.R);
  for (int k = 0; k < 2 * E - 1; ++k) {
    if (acc[k].is_zero()) continue;
    if (k < E)
      z.c[k] = z.c[k] + acc[k];
    else
      z.c[k - E] = z.c[k - E] + acc[k] * x.R->u;
  }
  for (auto& p : z.c) p.var = 'T';
  return z;
}

KElem operator*(const KElem& x, Elt s) {
  KElem z = x;
  for (auto& p : z.c) p = scale(p, s);
  return z;
}

KElem pow(const KElem& x, unsigned k) {
  KElem r = KElem::constant(x.R, 1), b = x;
  while (k) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

static KElem twist1(const KElem& x) {
  const KRingPtr& R = x.R;
  KElem W1 = pow(KElem::w(R), static_cast<unsigned>(R->q));
  KElem z = KElem::zero(R);
  KElem wp = KElem::constant(R, 1);
  for (int j = 0; j < R->E; ++j) {
    if (!x.c[j].is_zero()) {
      FPoly f = frobenius_power(x.c[j], R->a);
      f.var = 'T';
      z = z + KElem::from_poly(R, f) * wp;
    }
    wp = wp * W1;
  }
  return z;
}

KElem twist(const KElem& x, int k) {
  if (k < 0) throw InvalidArgument("negative twist is not defined in the coefficient ring");
  KElem z = x;
  for (int i = 0; i < k; ++i) z = twist1(z);
  return z;
}

InfElem to_inf(const KElem& x, const InfElem& wv) {
  const int q = x.R->q;
  InfElem r = InfElem::zero(x.R->F, q, wv.e);
  InfElem wp = InfElem::constant(x.R->F, q, 1, wv.e);
  for (int j = 0; j < x.R->E; ++j) {
    if (!x.c[j].is_zero()) r = r + InfElem::from_poly(x.c[j], q, wv.e) * wp;
    if (j + 1 < x.R->E) wp = wp * wv;
  }
  return r;
}

static Elt root_of_unity(const Field& F, int E) {
  std::uint64_t order = F.Q - 1;
  if (order % static_cast<std::uint64_t>(E)) throw Unsupported("coefficient field lacks the needed roots of unity");
  return F.exp_gen(order / static_cast<std::uint64_t>(E));
}

FPoly norm(const KElem& x, KElem* cofactor) {
  const KRingPtr& R = x.R;
  if (R->E == 1) {
    if (cofactor) *cofactor = KElem::constant(R, 1);
    return x.c[0];
  }
  Elt z = root_of_unity(*R->F, R->E);
  KElem cof = KElem::constant(R, 1);
  for (int j = 1; j < R->E; ++j) {
    KElem cj = x;
    Elt zj = R->F->pow(z, static_cast<std::uint64_t>(j));
    Elt s = 1;
    for (int k = 0; k < R->E; ++k) {
      cj.c[k] = scale(cj.c[k], s);
      s = R->F->mul(s, zj);
    }
    cof = cof * cj;
  }
  KElem n = x * cof;
  for (int k = 1; k < R->E; ++k)
    if (!n.c[k].is_zero()) throw ConsistencyFailure("norm left a w component");
  if (cofactor) *cofactor = cof;
  return n.c[0];
}

bool exact_div(const KElem& x, const KElem& y, KElem& out) {
  if (y.is_zero()) throw DivisionByApparentZero("exact division by zero");
  KElem cof;
  FPoly N = norm(y, &cof);
  KElem z = x * cof;
  for (auto& p : z.c) {
    auto [qq, r] = divmod(p, N);
    if (!r.is_zero()) return false;
    p = qq;
    p.var = 'T';
  }
  out = z;
  return true;
}

KFrac KFrac::of(const KElem& x) { return {x, FPoly(x.R->F, {1}, 'T')}; }

void KFrac::reduce() {
  if (num.is_zero()) {
    den = FPoly(num.R->F, {1}, 'T');
    return;
  }
  FPoly g = den;
  for (auto& p : num.c)
    if (!p.is_zero()) g = gcd(g, p);
  if (g.deg() > 0) {
    den = den / g;
    for (auto& p : num.c) p = p / g;
  }
  Elt l = den.lc();
  if (l != 1) {
    Elt li = num.R->F->inv(l);
    den = scale(den, li);
    num = num * li;
  }
  den.var = 'T';
  for (auto& p : num.c) p.var = 'T';
}

std::string KFrac::str() const {
  if (den.deg() == 0) return num.str();
  return "(" + num.str() + ")/(" + den.str() + ")";
}

KFrac operator+(const KFrac& x, const KFrac& y) {
  KFrac r{x.num * KElem::from_poly(x.num.R, y.den) + y.num * KElem::from_poly(x.num.R, x.den), x.den * y.den};
  r.reduce();
  return r;
}

KFrac operator-(const KFrac& x) { return {-x.num, x.den}; }
KFrac operator-(const KFrac& x, const KFrac& y) { return x + (-y); }

KFrac operator*(const KFrac& x, const KFrac& y) {
  KFrac r{x.num * y.num, x.den * y.den};
  r.reduce();
  return r;
}

KFrac inverse(const KFrac& x) {
  if (x.is_zero()) throw DivisionByApparentZero("inverse of zero");
  KElem cof;
  FPoly N = norm(x.num, &cof);
  KFrac r{cof * KElem::from_poly(x.num.R, x.den), N};
  r.reduce();
  return r;
}

KFrac operator/(const KFrac& x, const KFrac& y) { return x * inverse(y); }

bool operator==(const KFrac& x, const KFrac& y) { return (x - y).is_zero(); }

KFrac twist(const KFrac& x, int k) {
  FPoly d = x.den;
  for (int i = 0; i < k; ++i) d = frobenius_power(d, x.num.R->a);
  d.var = 'T';
  KFrac r{twist(x.num, k), d};
  r.reduce();
  return r;
}

InfElem to_inf(const KFrac& x, const InfElem& wv, std::int64_t N) {
  InfElem n = to_inf(x.num, wv);
  if (x.den.deg() == 0) {
    InfElem r = n * x.num.R->F->inv(x.den.c[0]);
    return r.exact() ? r : r.truncate(N);
  }
  InfElem d = InfElem::from_poly(x.den, x.num.R->q, wv.e);
  return divide(n, d, N);
}

KPoly KPoly::constant(const KElem& x) {
  KPoly f{x.R, {x}};
  f.normalize();
  return f;
}

KPoly KPoly::t(const KRingPtr& R) { return {R, {KElem::zero(R), KElem::constant(R, 1)}}; }

KPoly KPoly::t_minus_theta(const KRingPtr& R) { return {R, {-KElem::theta(R), KElem::constant(R, 1)}}; }

void KPoly::normalize() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

bool KPoly::operator==(const KPoly& o) const {
  if (c.size() != o.c.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != o.c[i]) return false;
  return true;
}

std::string KPoly::str() const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = deg(); i >= 0; --i) {
    if (c[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    std::string s = c[i].str();
    bool one = s == "1";
    if (i == 0 || !one) os << (s.find(' ') != std::string::npos && i > 0 ? "(" + s + ")" : s);
    if (i > 0) {
      if (!one) os << "*";
      os << "t";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

KPoly operator+(const KPoly& f, const KPoly& g) {
  const KRingPtr& R = f.R ? f.R : g.R;
  KPoly h{R, {}};
  std::size_t n = std::max(f.c.size(), g.c.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= f.c.size())
      h.c.push_back(g.c[i]);
    else if (i >= g.c.size())
      h.c.push_back(f.c[i]);
    else
      h.c.push_back(f.c[i] + g.c[i]);
  }
  h.normalize();
  return h;
}

KPoly operator-(const KPoly& f) {
  KPoly h = f;
  for (auto& x : h.c) x = -x;
  return h;
}

KPoly operator-(const KPoly& f, const KPoly& g) { return f + (-g); }

KPoly operator*(const KPoly& f, const KPoly& g) {
  const KRingPtr& R = f.R ? f.R : g.R;
  if (f.is_zero() || g.is_zero()) return KPoly::zero(R);
  KPoly h{R, std::vector<KElem>(f.c.size() + g.c.size() - 1, KElem::zero(R))};
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    for (std::size_t j = 0; j < g.c.size(); ++j)
      if (!g.c[j].is_zero()) h.c[i + j] = h.c[i + j] + f.c[i] * g.c[j];
  }
  h.normalize();
  return h;
}

KPoly operator*(const KElem& s, const KPoly& f) { return KPoly::constant(s) * f; }

KPoly pow(const KPoly& f, unsigned k) {
  KPoly r = KPoly::constant(KElem::constant(f.R, 1));
  for (unsigned i = 0; i < k; ++i) r = r * f;
  return r;
}

KPoly twist(const KPoly& f, int k) {
  KPoly h = f;
  for (auto& x : h.c) x = twist(x, k);
  return h;
}

KPoly taylor_at_theta(const KPoly& f) {
  // repeated synthetic division by (t - theta)
  KPoly g = f;
  KPoly out{f.R, {}};
  KElem th = KElem::theta(f.R);
  while (!g.is_zero()) {
    int n = g.deg();
    std::vector<KElem> qv(static_cast<std::size_t>(std::max(n, 0)), KElem::zero(f.R));
    KElem acc = g.c[n];
    for (int i = n - 1; i >= 0; --i) {
      qv[i] = acc;
      acc = g.c[i] + acc * th;
    }
    out.c.push_back(acc);
    g = KPoly{f.R, qv};
    g.normalize();
  }
  out.normalize();
  return out;
}

int ord_theta(const KPoly& f) {
  if (f.is_zero()) return -1;
  KPoly s = taylor_at_theta(f);
  int k = 0;
  while (s.c[k].is_zero()) ++k;
  return k;
}

KPoly div_t_minus_theta(const KPoly& f, int k) {
  KPoly g = f;
  KElem th = KElem::theta(f.R);
  for (int r = 0; r < k; ++r) {
    if (g.is_zero()) return g;
    int n = g.deg();
    std::vector<KElem> qv(static_cast<std::size_t>(n), KElem::zero(f.R));
    KElem acc = g.c[n];
    for (int i = n - 1; i >= 0; --i) {
      qv[i] = acc;
      acc = g.c[i] + acc * th;
    }
    if (!acc.is_zero()) throw ConsistencyFailure("polynomial is not divisible by t - theta");
    g = KPoly{f.R, qv};
    g.normalize();
  }
  return g;
}

TateSeries to_tate(const KPoly& f, const InfElem& wv) {
  std::vector<InfElem> a;
  for (auto& x : f.c) a.push_back(to_inf(x, wv));
  if (a.empty()) a.push_back(InfElem::zero(f.R->F, f.R->q, wv.e));
  return TateSeries::poly(a);
}

KMat kmat_identity(const KRingPtr& R, int n) {
  KMat I(n, std::vector<KPoly>(n, KPoly::zero(R)));
  for (int i = 0; i < n; ++i) I[i][i] = KPoly::constant(KElem::constant(R, 1));
  return I;
}

KMat operator*(const KMat& A, const KMat& B) {
  const KRingPtr& R = A[0][0].R ? A[0][0].R : B[0][0].R;
  std::size_t n = A.size(), m = B[0].size(), k = B.size();
  KMat C(n, std::vector<KPoly>(m, KPoly::zero(R)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l)
        if (!A[i][l].is_zero() && !B[l][j].is_zero()) C[i][j] = C[i][j] + A[i][l] * B[l][j];
  return C;
}

KMat twist(const KMat& A, int k) {
  KMat B = A;
  for (auto& row : B)
    for (auto& x : row) x = twist(x, k);
  return B;
}

KPoly det(const KMat& A) {
  std::size_t n = A.size();
  const KRingPtr& R = A[0][0].R;
  if (n == 1) return A[0][0];
  KPoly d = KPoly::zero(R);
  for (std::size_t j = 0; j < n; ++j) {
    if (A[0][j].is_zero()) continue;
    KMat M;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<KPoly> row;
      for (std::size_t l = 0; l < n; ++l)
        if (l != j) row.push_back(A[i][l]);
      M.push_back(row);
    }
    KPoly term = A[0][j] * det(M);
    d = (j % 2) ? d - term : d + term;
  }
  return d;
}

TateMatrix to_tate(const KMat& A, const InfElem& wv) {
  TateMatrix M = TateMatrix::make(static_cast<int>(A.size()), static_cast<int>(A[0].size()));
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) M.at(i, j) = to_tate(A[i][j], wv);
  return M;
}

std::string str(const KMat& A) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < A.size(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < A[i].size(); ++j) os << (j ? ", " : "") << A[i][j].str();
    os << "]";
  }
  os << "]";
  return os.str();
}

int rank_over_frac(std::vector<std::vector<KElem>> M) {
  if (M.empty()) return 0;
  const std::size_t n = M.size(), m = M[0].size();
  const KRingPtr R = M[0][0].R;
  KElem prev = KElem::constant(R, 1);
  std::size_t r = 0;
  for (std::size_t col = 0; col < m && r < n; ++col) {
    std::size_t piv = r;
    while (piv < n && M[piv][col].is_zero()) ++piv;
    if (piv == n) continue;
    std::swap(M[piv], M[r]);
    for (std::size_t i = r + 1; i < n; ++i) {
      for (std::size_t j = col + 1; j < m; ++j) {
        KElem v = M[r][col] * M[i][j] - M[i][col] * M[r][j];
        KElem qv;
        if (!exact_div(v, prev, qv)) throw ConsistencyFailure("fraction-free step was not exact");
        M[i][j] = qv;
      }
      M[i][col] = KElem::zero(R);
    }
    prev = M[r][col];
    ++r;
  }
  return static_cast<int>(r);
}

}  // namespace fcm
