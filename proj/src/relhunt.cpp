// SPDX-License-Identifier: Apache-2.0
#include "fcm/relhunt.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fcm/errors.hpp"

namespace fcm {

namespace {

// lift everything to one constant field and ramification
std::vector<InfElem> common(const std::vector<InfElem>& vals) {
  if (vals.empty()) throw InvalidArgument("no values");
  FieldPtr F = vals[0].F;
  int e = vals[0].e;
  for (auto& v : vals) {
    if (v.q != vals[0].q) throw IncompatibleFields("values over different q");
    F = compositum(F, v.F);
    e = std::lcm(e, v.e);
  }
  std::vector<InfElem> out;
  for (auto& v : vals) out.push_back(v.lift(F, e));
  return out;
}

int qexp(int q, int p) {
  int a = 0;
  for (long x = 1; x < q; x *= p) ++a;
  return a;
}

struct ModP {
  int p;
  int inv(int x) const {
    for (int y = 1; y < p; ++y)
      if (x * y % p == 1) return y;
    return 0;
  }
};

// null space over F_p of the rows fed in, row echelon kept reduced
struct Echelon {
  ModP P;
  int n;
  std::vector<std::vector<int>> rows;
  std::vector<int> piv;

  bool full() const { return static_cast<int>(rows.size()) == n; }
  void add(std::vector<int> r) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      int c = r[piv[i]];
      if (!c) continue;
      const auto& b = rows[i];
      for (int j = piv[i]; j < n; ++j)
        if (b[j]) r[j] = (r[j] + (P.p - c) * b[j]) % P.p;
    }
    int pc = 0;
    while (pc < n && !r[pc]) ++pc;
    if (pc == n) return;
    int iv = P.inv(r[pc]);
    for (int j = pc; j < n; ++j) r[j] = r[j] * iv % P.p;
    for (auto& b : rows) {
      int c = b[pc];
      if (!c) continue;
      for (int j = pc; j < n; ++j)
        if (r[j]) b[j] = (b[j] + (P.p - c) * r[j]) % P.p;
    }
    // keep sorted by pivot
    auto it = std::lower_bound(piv.begin(), piv.end(), pc);
    auto k = it - piv.begin();
    piv.insert(it, pc);
    rows.insert(rows.begin() + k, std::move(r));
  }
  std::vector<std::vector<int>> kernel() const {
    std::vector<char> is_piv(n, 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<std::vector<int>> out;
    for (int f = 0; f < n; ++f) {
      if (is_piv[f]) continue;
      std::vector<int> v(n, 0);
      v[f] = 1;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i][f]) v[piv[i]] = (P.p - rows[i][f]) % P.p;
      out.push_back(v);
    }
    return out;
  }
};

// F_q-echelon of vectors with entries in Fq
std::vector<std::vector<Elt>> fq_basis(const Field& K, std::vector<std::vector<Elt>> vs) {
  std::vector<std::vector<Elt>> out;
  std::vector<int> piv;
  for (auto v : vs) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      Elt c = v[piv[i]];
      if (!c) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = K.sub(v[j], K.mul(c, out[i][j]));
    }
    std::size_t pc = 0;
    while (pc < v.size() && !v[pc]) ++pc;
    if (pc == v.size()) continue;
    Elt iv = K.inv(v[pc]);
    for (auto& x : v) x = K.mul(x, iv);
    for (auto& b : out) {
      Elt c = b[pc];
      if (!c) continue;
      for (std::size_t j = 0; j < v.size(); ++j) b[j] = K.sub(b[j], K.mul(c, v[j]));
    }
    out.push_back(v);
    piv.push_back(static_cast<int>(pc));
  }
  return out;
}

InfElem poly_value(const FPoly& c, const InfElem& like) {
  if (c.is_zero()) return InfElem::zero(like.F, like.q, like.e);
  return InfElem::from_poly(c.lift(like.F), like.q, like.e);
}

}  // namespace

std::string RelationCertificate::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << coeffs[i].str() << ")";
    for (std::size_t j = 0; j < exponents[i].size(); ++j) {
      if (!exponents[i][j]) continue;
      os << "*X" << (exponents[i].size() > 1 ? std::to_string(j + 1) : "");
      if (exponents[i][j] > 1) os << "^" << exponents[i][j];
    }
  }
  if (first) os << "0";
  return os.str();
}

LinearRelations find_linear_relations(const std::vector<InfElem>& values, int H, int M,
                                      std::int64_t exact_rows) {
  if (H < 0 || M < 0) throw InvalidArgument("negative bound");
  auto vals = common(values);
  const FieldPtr F = vals[0].F;
  const int q = vals[0].q, e = vals[0].e, p = F->p, n = F->n;
  const int a = qexp(q, p);
  const int k = static_cast<int>(vals.size());
  FieldPtr Fq = std_field(p, a);
  std::vector<Elt> gam;
  for (int j = 0; j < a; ++j) {
    std::vector<int> d(a, 0);
    d[j] = 1;
    gam.push_back(embed(Fq, F, Fq->from_digits(d)));
  }
  const int U = k * (H + 1) * a;

  std::int64_t vlow = InfElem::kExact, pmin = InfElem::kExact;
  for (auto& v : vals) {
    if (!v.is_zero()) vlow = std::min(vlow, v.lead() - std::int64_t(H) * e);
    if (!v.exact()) pmin = std::min(pmin, v.N - std::int64_t(H) * e);
  }
  if (vlow == InfElem::kExact) vlow = pmin == InfElem::kExact ? 0 : pmin - e;
  if (pmin == InfElem::kExact) {
    std::int64_t need = exact_rows > 0 ? exact_rows : 2 * (U / n + 1) + std::int64_t(M) * e + 8 * e;
    pmin = vlow + need;
  }
  const std::int64_t pker = pmin - std::int64_t(M) * e;
  const std::int64_t avail = (pker - vlow) * n;
  if (avail <= U)
    throw InsufficientPrecision("relation search needs " + std::to_string(U) + " equations, have " +
                                std::to_string(std::max<std::int64_t>(avail, 0)));

  Echelon E{ModP{p}, U, {}, {}};
  std::vector<std::vector<int>> block(n, std::vector<int>(U));
  for (std::int64_t s = vlow; s < pker && !E.full(); ++s) {
    for (auto& r : block) std::fill(r.begin(), r.end(), 0);
    bool any = false;
    for (int i = 0; i < k; ++i)
      for (int h = 0; h <= H; ++h) {
        Elt c = vals[i].coef(s + std::int64_t(h) * e);
        if (!c) continue;
        any = true;
        for (int j = 0; j < a; ++j) {
          auto dg = F->digits(F->mul(c, gam[j]));
          int col = (i * (H + 1) + h) * a + j;
          for (int t = 0; t < n && t < static_cast<int>(dg.size()); ++t) block[t][col] = dg[t];
        }
      }
    if (!any) continue;
    for (auto& r : block) E.add(r);
  }

  std::vector<std::vector<Elt>> fv;
  for (auto& kv : E.kernel()) {
    std::vector<Elt> c(k * (H + 1), 0);
    for (int idx = 0; idx < k * (H + 1); ++idx) {
      std::vector<int> d(a);
      for (int j = 0; j < a; ++j) d[j] = kv[idx * a + j];
      c[idx] = Fq->from_digits(d);
    }
    fv.push_back(c);
  }
  LinearRelations out;
  out.precision = Rat(pmin, e);
  out.H = H;
  out.M = M;
  out.rows = static_cast<int>(avail);
  out.unknowns = U;
  for (auto& c : fq_basis(*Fq, fv)) {
    std::vector<FPoly> rel;
    InfElem sum = InfElem::zero(F, q, e);
    for (int i = 0; i < k; ++i) {
      std::vector<Elt> cc(c.begin() + i * (H + 1), c.begin() + (i + 1) * (H + 1));
      FPoly f(Fq, cc, 'T');
      sum = sum + poly_value(f, vals[i]) * vals[i];
      rel.push_back(f);
    }
    Rat res = val_or_prec(sum);
    if (res < out.precision) continue;
    out.basis.push_back(rel);
    out.residuals.push_back(res);
  }
  return out;
}

Rat substitute(const RelationCertificate& c, const std::vector<InfElem>& values) {
  auto vals = common(values);
  InfElem sum = InfElem::zero(vals[0].F, vals[0].q, vals[0].e);
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
    InfElem m = poly_value(c.coeffs[i], vals[0]);
    for (std::size_t j = 0; j < vals.size(); ++j)
      if (c.exponents[i][j]) m = m * pow(vals[j], static_cast<std::uint64_t>(c.exponents[i][j]));
    sum = sum + m;
  }
  return val_or_prec(sum);
}

std::optional<RelationCertificate> find_algebraic_relation(const InfElem& x, int D, int H, int M) {
  if (D < 1) throw InvalidArgument("degree bound must be positive");
  std::vector<InfElem> pw{InfElem::constant(x.F, x.q, 1, x.e)};
  for (int d = 1; d <= D; ++d) {
    pw.push_back(pw.back() * x);
    auto L = find_linear_relations(pw, H, M);
    if (L.basis.empty()) continue;
    int lo = 0, hi = H;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (find_linear_relations(pw, mid, M).basis.empty())
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < H) L = find_linear_relations(pw, lo, M);
    for (std::size_t b = 0; b < L.basis.size(); ++b) {
      auto rel = L.basis[b];
      if (rel[d].is_zero()) continue;
      Elt s = rel[d].F->inv(rel[d].lc());
      for (auto& f : rel) f = scale(f, s);
      RelationCertificate c;
      for (int i = 0; i <= d; ++i) c.exponents.push_back({i});
      c.coeffs = rel;
      c.residual = substitute(c, {x});
      c.precision = L.precision;
      c.D = D;
      c.H = H;
      c.M = M;
      if (c.residual < c.precision) continue;
      return c;
    }
  }
  return std::nullopt;
}

std::vector<RelationCertificate> find_polynomial_relations(const std::vector<InfElem>& values, int D, int H,
                                                           int M) {
  if (D < 1) throw InvalidArgument("degree bound must be positive");
  auto vals = common(values);
  const int k = static_cast<int>(vals.size());
  std::vector<std::vector<int>> mons{std::vector<int>(k, 0)};
  std::vector<InfElem> mv{InfElem::constant(vals[0].F, vals[0].q, 1, vals[0].e)};
  // degree by degree, each monomial extends one of lower degree by a variable >= its last
  std::size_t lo = 0;
  for (int d = 1; d <= D; ++d) {
    std::size_t hi = mons.size();
    for (std::size_t i = lo; i < hi; ++i) {
      int last = 0;
      for (int j = 0; j < k; ++j)
        if (mons[i][j]) last = j;
      for (int j = last; j < k; ++j) {
        auto m = mons[i];
        ++m[j];
        mons.push_back(m);
        mv.push_back(mv[i] * vals[j]);
      }
    }
    lo = hi;
  }
  auto L = find_linear_relations(mv, H, M);
  std::vector<RelationCertificate> out;
  for (auto& rel : L.basis) {
    RelationCertificate c;
    for (std::size_t i = 0; i < rel.size(); ++i) {
      if (rel[i].is_zero()) continue;
      c.exponents.push_back(mons[i]);
      c.coeffs.push_back(rel[i]);
    }
    c.precision = L.precision;
    c.residual = substitute(c, vals);
    c.D = D;
    c.H = H;
    c.M = M;
    if (c.residual >= c.precision) out.push_back(c);
  }
  return out;
}

std::vector<LegendreResult> certify_legendre(const std::vector<std::vector<InfElem>>& fibers,
                                             const InfElem& pitilde, int wt, int D, int H, int M) {
  std::vector<LegendreResult> out;
  for (auto& fib : fibers) {
    if (fib.empty()) throw InvalidArgument("empty fiber");
    InfElem prod = fib[0];
    for (std::size_t i = 1; i < fib.size(); ++i) prod = prod * fib[i];
    InfElem den = wt >= 0 ? pow(pitilde, static_cast<std::uint64_t>(wt)) : InfElem::constant(pitilde.F, pitilde.q, 1);
    InfElem R = wt >= 0 ? prod / den : prod * pow(pitilde, static_cast<std::uint64_t>(-wt));
    LegendreResult r{Rat(wt), R, find_algebraic_relation(R, D, H, M)};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fcm
