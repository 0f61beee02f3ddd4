// SPDX-License-Identifier: Apache-2.0
#include "fcm/inf.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fcm/errors.hpp"

namespace fcm {

namespace {

int log_p(int p, int q) {
  int a = 0;
  long x = 1;
  while (x < q) {
    x *= p;
    ++a;
  }
  if (x != q) throw InvalidArgument("q is not a power of p");
  return a;
}

// out[k] = sum A[i] B[k-i] for k < L
void conv(const Field& F, const Elt* A, std::size_t la, const Elt* B, std::size_t lb, Elt* out, std::size_t L) {
  if (L == 0 || la == 0 || lb == 0) return;
  if (F.kind == Field::Kind::Prime && F.p < (1 << 16)) {
    std::vector<std::uint64_t> acc(L, 0);
    std::uint64_t p = F.p;
    // keep sums below 2^63
    std::size_t budget = static_cast<std::size_t>((std::uint64_t(1) << 62) / ((p - 1) * (p - 1) + 1));
    std::size_t since = 0;
    for (std::size_t i = 0; i < la && i < L; ++i) {
      std::uint64_t ai = A[i];
      if (!ai) continue;
      std::size_t top = std::min(lb, L - i);
      std::uint64_t* dst = acc.data() + i;
      for (std::size_t j = 0; j < top; ++j) dst[j] += ai * B[j];
      if (++since >= budget) {
        for (auto& x : acc) x %= p;
        since = 0;
      }
    }
    for (std::size_t k = 0; k < L; ++k) out[k] = static_cast<Elt>(acc[k] % p);
    return;
  }
  std::fill(out, out + L, 0);
  for (std::size_t i = 0; i < la && i < L; ++i) {
    Elt ai = A[i];
    if (!ai) continue;
    std::size_t top = std::min(lb, L - i);
    for (std::size_t j = 0; j < top; ++j) {
      if (!B[j]) continue;
      out[i + j] = F.add(out[i + j], F.mul(ai, B[j]));
    }
  }
}

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  __int128 r = static_cast<__int128>(x) * y;
  if (r > InfElem::kExact / 4 || r < -InfElem::kExact / 4) throw Unsupported("exponent overflow");
  return static_cast<std::int64_t>(r);
}

}  // namespace

void InfElem::normalize() {
  std::size_t s = 0;
  while (s < c.size() && c[s] == 0) ++s;
  if (s) {
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(s));
    v += static_cast<std::int64_t>(s);
  }
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (!exact()) {
    if (v >= N) c.clear();
    else if (end() > N) c.resize(static_cast<std::size_t>(N - v));
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  if (c.empty()) v = exact() ? 0 : N;
}

InfElem InfElem::zero(FieldPtr F, int q, int e, std::int64_t N) {
  InfElem r;
  r.a = log_p(F->p, q);
  if (F->n % r.a) throw IncompatibleFields("constant field does not contain F_q");
  r.F = std::move(F);
  r.q = q;
  r.e = e;
  r.N = N;
  r.v = r.exact() ? 0 : N;
  return r;
}

InfElem InfElem::constant(FieldPtr F, int q, Elt x, int e) { return monomial(std::move(F), q, x, 0, e); }

InfElem InfElem::monomial(FieldPtr F, int q, Elt x, std::int64_t k, int e) {
  InfElem r = zero(std::move(F), q, e);
  if (x) {
    r.v = k;
    r.c = {x};
  }
  return r;
}

InfElem InfElem::theta_pow(FieldPtr F, int q, std::int64_t k, Elt x, int e) {
  return monomial(std::move(F), q, x, -k * e, e);
}

InfElem InfElem::from_poly(const FPoly& f, int q, int e) {
  InfElem r = zero(f.F, q, e);
  if (f.is_zero()) return r;
  int d = f.deg();
  r.v = -static_cast<std::int64_t>(d) * e;
  r.c.assign(static_cast<std::size_t>(d) * e + 1, 0);
  for (int i = 0; i <= d; ++i) r.c[static_cast<std::size_t>(d - i) * e] = f.c[i];
  r.normalize();
  return r;
}

InfElem InfElem::from_ratfunc(const RatFunc& f, int q, std::int64_t N, int e) {
  InfElem n = from_poly(f.num, q, e);
  InfElem d = from_poly(f.den, q, e);
  if (d.is_monomial()) return n / d;
  return divide(n, d, N);
}

bool InfElem::is_monomial() const { return exact() && c.size() == 1; }

InfElem InfElem::truncate(std::int64_t Nnew) const {
  if (Nnew >= N) return *this;
  InfElem r = *this;
  r.N = Nnew;
  r.normalize();
  return r;
}

InfElem InfElem::lift(const FieldPtr& F2, int e2) const {
  if (F2 == F && e2 == e) return *this;
  if (e2 % e) throw IncompatibleFields("ramification index does not divide");
  if (F2->p != F->p || F2->n % F->n) throw IncompatibleFields("constant field does not embed");
  std::int64_t r = e2 / e;
  InfElem o;
  o.F = F2;
  o.q = q;
  o.a = a;
  o.e = e2;
  o.N = exact() ? kExact : checked_mul(N, r);
  if (c.empty()) {
    o.v = o.exact() ? 0 : o.N;
    return o;
  }
  o.v = checked_mul(v, r);
  o.c.assign((c.size() - 1) * static_cast<std::size_t>(r) + 1, 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i]) o.c[i * static_cast<std::size_t>(r)] = F2 == F ? c[i] : embed(F, F2, c[i]);
  return o;
}

InfElem InfElem::map_coeffs_frob(long k) const {
  InfElem o = *this;
  for (auto& x : o.c) x = F->frob(x, k);
  return o;
}

InfElem InfElem::scale_u(Elt z) const {
  InfElem o = *this;
  if (c.empty()) return o;
  Elt zi = F->inv(z);
  Elt base = v >= 0 ? F->pow(z, static_cast<std::uint64_t>(v)) : F->pow(zi, static_cast<std::uint64_t>(-v));
  for (auto& x : o.c) {
    x = F->mul(x, base);
    base = F->mul(base, z);
  }
  return o;
}

InfElem InfElem::shift(std::int64_t k) const {
  InfElem o = *this;
  if (!exact()) o.N += k;
  if (!c.empty() || !exact()) o.v += k;
  return o;
}

InfElem InfElem::scaled(Elt s) const {
  InfElem o = *this;
  for (auto& x : o.c) x = F->mul(x, s);
  o.normalize();
  return o;
}

std::vector<std::pair<std::int64_t, Elt>> InfElem::terms() const {
  std::vector<std::pair<std::int64_t, Elt>> t;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i]) t.push_back({v + static_cast<std::int64_t>(i), c[i]});
  return t;
}

std::string InfElem::str(int max_terms) const {
  std::ostringstream os;
  auto ex = [&](std::int64_t k) { return Rat(-k, e).str(); };
  int shown = 0;
  for (auto& [k, x] : terms()) {
    if (shown == max_terms) {
      os << " + ...";
      break;
    }
    if (shown) os << " + ";
    os << x;
    if (k) os << "*th^(" << ex(k) << ")";
    ++shown;
  }
  if (!shown) os << "0";
  if (!exact()) os << " + O(th^(" << ex(N) << "))";
  return os.str();
}

void unify(InfElem& a, InfElem& b) {
  if (a.q != b.q) throw IncompatibleFields("different q");
  if (a.F == b.F && a.e == b.e) return;
  FieldPtr F = a.F == b.F ? a.F : compositum(a.F, b.F);
  int e = std::lcm(a.e, b.e);
  a = a.lift(F, e);
  b = b.lift(F, e);
}

InfElem operator+(const InfElem& x, const InfElem& y) {
  InfElem a = x, b = y;
  unify(a, b);
  if (a.exact_zero()) return b;
  if (b.exact_zero()) return a;
  InfElem r = InfElem::zero(a.F, a.q, a.e);
  r.N = std::min(a.N, b.N);
  std::int64_t lo = std::min(a.v, b.v);
  std::int64_t hi = std::max(a.end(), b.end());
  if (!r.exact()) hi = std::min(hi, r.N);
  if (hi <= lo) {
    r.normalize();
    return r;
  }
  r.v = lo;
  r.c.assign(static_cast<std::size_t>(hi - lo), 0);
  const Field& F = *a.F;
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    std::int64_t k = a.v + static_cast<std::int64_t>(i);
    if (k >= hi) break;
    r.c[k - lo] = a.c[i];
  }
  for (std::size_t i = 0; i < b.c.size(); ++i) {
    std::int64_t k = b.v + static_cast<std::int64_t>(i);
    if (k >= hi) break;
    if (b.c[i]) r.c[k - lo] = F.add(r.c[k - lo], b.c[i]);
  }
  r.normalize();
  return r;
}

InfElem operator-(const InfElem& a) {
  InfElem r = a;
  for (auto& x : r.c) x = a.F->neg(x);
  return r;
}

InfElem operator-(const InfElem& a, const InfElem& b) { return a + (-b); }

InfElem operator*(const InfElem& x, Elt s) { return x.scaled(s); }

InfElem operator*(const InfElem& x, const InfElem& y) {
  InfElem a = x, b = y;
  unify(a, b);
  if (a.exact_zero() || b.exact_zero()) return InfElem::zero(a.F, a.q, a.e);
  InfElem r = InfElem::zero(a.F, a.q, a.e);
  std::int64_t N = InfElem::kExact;
  if (!a.exact()) N = std::min(N, a.N + b.v);
  if (!b.exact()) N = std::min(N, b.N + a.v);
  r.N = N;
  std::int64_t vr = a.v + b.v;
  std::size_t L;
  if (r.exact()) {
    L = a.c.size() + b.c.size() - 1;
  } else {
    if (N <= vr || a.c.empty() || b.c.empty()) {
      r.normalize();
      return r;
    }
    L = std::min<std::size_t>(static_cast<std::size_t>(N - vr), a.c.size() + b.c.size() - 1);
  }
  r.v = vr;
  r.c.assign(L, 0);
  conv(*a.F, a.c.data(), a.c.size(), b.c.data(), b.c.size(), r.c.data(), L);
  r.normalize();
  return r;
}

InfElem inverse(const InfElem& b, std::int64_t rel) {
  if (b.is_zero()) throw DivisionByApparentZero("inverse of an element that is zero at its precision");
  const Field& F = *b.F;
  if (b.is_monomial()) return InfElem::monomial(b.F, b.q, F.inv(b.c[0]), -b.v, b.e);
  std::int64_t L;
  if (b.exact()) {
    if (rel <= 0) throw PrecisionExhausted("inverse of an exact series needs a precision");
    L = rel;
  } else {
    L = b.rel_prec();
    if (rel > 0) L = std::min(L, rel);
  }
  if (L <= 0) throw PrecisionExhausted("no significant digits to invert");
  std::vector<std::size_t> nz;
  for (std::size_t i = 1; i < b.c.size() && static_cast<std::int64_t>(i) < L; ++i)
    if (b.c[i]) nz.push_back(i);
  std::vector<Elt> r(static_cast<std::size_t>(L), 0);
  Elt i0 = F.inv(b.c[0]);
  Elt ni0 = F.neg(i0);
  r[0] = i0;
  for (std::size_t k = 1; k < r.size(); ++k) {
    Elt s = 0;
    for (std::size_t i : nz) {
      if (i > k) break;
      Elt rk = r[k - i];
      if (rk) s = F.add(s, F.mul(b.c[i], rk));
    }
    r[k] = F.mul(ni0, s);
  }
  InfElem o = InfElem::zero(b.F, b.q, b.e);
  o.v = -b.v;
  o.N = -b.v + L;
  o.c = std::move(r);
  o.normalize();
  return o;
}

InfElem operator/(const InfElem& x, const InfElem& y) {
  InfElem a = x, b = y;
  unify(a, b);
  if (b.is_zero()) throw DivisionByApparentZero("division by an element that is zero at its precision");
  if (b.is_monomial()) return a * inverse(b);
  if (!b.exact()) return a * inverse(b);
  if (a.exact_zero()) return a;
  if (a.exact()) throw PrecisionExhausted("exact quotient needs a precision");
  return a * inverse(b, a.rel_prec());
}

InfElem divide(const InfElem& x, const InfElem& y, std::int64_t Nabs) {
  InfElem a = x, b = y;
  unify(a, b);
  if (b.is_zero()) throw DivisionByApparentZero("division by an element that is zero at its precision");
  if (a.exact_zero()) return a;
  if (b.is_monomial()) return (a * inverse(b)).truncate(Nabs);
  std::int64_t rel = Nabs - (a.v - b.v);
  if (rel <= 0) return InfElem::zero(a.F, a.q, a.e, Nabs);
  return (a * inverse(b, rel)).truncate(Nabs);
}

InfElem pow(const InfElem& x, std::uint64_t k) {
  InfElem r = InfElem::constant(x.F, x.q, 1, x.e);
  InfElem b = x;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

InfElem frobenius(const InfElem& x, long n, std::int64_t cap) {
  if (n == 0) return x;
  const Field& F = *x.F;
  long k = n * x.a;
  if (n > 0) {
    std::int64_t step = 1;
    for (long i = 0; i < n; ++i) step = checked_mul(step, x.q);
    InfElem r = x;
    if (!x.exact()) r.N = checked_mul(x.N, step);
    if (x.c.empty()) {
      if (!r.exact()) r.v = r.N;
      return r.truncate(cap);
    }
    r.v = checked_mul(x.v, step);
    std::int64_t stop = std::min(r.N, cap);
    std::size_t len = (x.c.size() - 1) * static_cast<std::size_t>(step) + 1;
    if (stop < InfElem::kExact / 2) len = std::min<std::size_t>(len, static_cast<std::size_t>(std::max<std::int64_t>(stop - r.v, 0)));
    r.c.assign(len, 0);
    for (std::size_t i = 0; i < x.c.size(); ++i) {
      std::size_t j = i * static_cast<std::size_t>(step);
      if (j >= len) break;
      if (x.c[i]) r.c[j] = F.frob(x.c[i], k);
    }
    r.N = std::min(r.N, cap);
    if (r.exact() && cap < InfElem::kExact) r.N = cap;
    r.normalize();
    return r;
  }
  std::int64_t step = 1;
  for (long i = 0; i < -n; ++i) step = checked_mul(step, x.q);
  InfElem r = InfElem::zero(x.F, x.q, x.e);
  r.N = x.exact() ? InfElem::kExact : ceil_div(x.N, step);
  if (x.c.empty()) {
    r.normalize();
    return r;
  }
  for (auto& [kk, cc] : x.terms())
    if (kk % step) throw NotAPower("exponent not divisible by q^n");
  r.v = floor_div(x.v, step);
  std::int64_t top = floor_div(x.end() - 1, step);
  r.c.assign(static_cast<std::size_t>(top - r.v + 1), 0);
  for (auto& [kk, cc] : x.terms()) r.c[kk / step - r.v] = F.frob(cc, k);
  r.normalize();
  return r;
}

namespace {

// a^{1/p^s}, ramifying only as much as needed
InfElem p_power_root(const InfElem& x, int s) {
  if (s == 0 || x.exact_zero()) return x;
  int p = x.F->p;
  int t = s;
  for (auto& [k, cc] : x.terms()) {
    int nu = 0;
    std::int64_t kk = k;
    while (nu < t && kk % p == 0 && kk != 0) {
      kk /= p;
      ++nu;
    }
    if (k == 0) nu = t;
    t = std::min(t, nu);
  }
  std::int64_t pt = ipow(p, t), ps = ipow(p, s - t);
  InfElem r = InfElem::zero(x.F, x.q, x.e * static_cast<int>(ps));
  r.N = x.exact() ? InfElem::kExact : ceil_div(x.N, pt);
  if (x.c.empty()) {
    r.normalize();
    return r;
  }
  r.v = floor_div(x.v, pt);
  std::int64_t top = floor_div(x.end() - 1, pt);
  r.c.assign(static_cast<std::size_t>(top - r.v + 1), 0);
  for (auto& [k, cc] : x.terms()) r.c[k / pt - r.v] = x.F->frob(cc, -s);
  r.normalize();
  return r;
}

}  // namespace

InfElem frobenius_root(const InfElem& x, long n) { return p_power_root(x, static_cast<int>(n * x.a)); }

InfElem nth_root(const InfElem& x, std::int64_t n, std::int64_t rel) {
  if (n <= 0) throw InvalidArgument("root index must be positive");
  if (x.is_zero()) throw PrecisionExhausted("root of an element that is zero at its precision");
  int p = x.F->p;
  int s = 0;
  while (n % p == 0) {
    n /= p;
    ++s;
  }
  InfElem a = p_power_root(x, s);
  if (n == 1) return a;
  std::int64_t g = std::gcd(a.v < 0 ? -a.v : a.v, n);
  if (a.v == 0) g = n;
  int e2 = a.e * static_cast<int>(n / g);
  // canonical root of the leading coefficient
  FPoly z(a.F, {a.F->neg(a.c[0])});
  z = z + FPoly::monomial(a.F, 1, static_cast<int>(n));
  auto roots = all_roots(z);
  const ExtRoot& r0 = roots.front();
  a = a.lift(r0.field, e2);
  std::int64_t vr = a.v / n;
  InfElem lead = InfElem::monomial(a.F, a.q, r0.root, vr, e2);
  if (a.is_monomial()) return lead;
  std::int64_t L = a.exact() ? rel : a.rel_prec();
  if (!a.exact() && rel > 0) L = std::min(L, rel);
  if (L <= 0) throw PrecisionExhausted("root of an exact series needs a precision");
  // unit part s = a / (c0 u^v), then z = s^{-1/n} by Newton, y = s z^{n-1}
  InfElem sunit = a.shift(-a.v).scaled(a.F->inv(a.c[0])).truncate(L);
  const Field& F = *a.F;
  Elt ninv = F.inv(F.from_int(n));
  InfElem zz = InfElem::constant(a.F, a.q, 1, e2);
  std::int64_t cur = 1;
  while (cur < L) {
    cur = std::min(2 * cur, L);
    InfElem st = sunit.truncate(cur);
    // the previous iterate is an approximation, so its precision is reset
    InfElem zc = zz;
    zc.N = cur;
    InfElem one = InfElem::constant(a.F, a.q, 1, e2);
    InfElem corr = (one - st * pow(zc, static_cast<std::uint64_t>(n))).truncate(cur);
    zz = (zc + (zc * corr).scaled(ninv)).truncate(cur);
  }
  zz = zz.truncate(L);
  InfElem y = (sunit * pow(zz, static_cast<std::uint64_t>(n - 1))).truncate(L);
  return lead * y;
}

Rat val_or_prec(const InfElem& a) {
  if (a.exact_zero()) return kInfVal;
  return Rat(a.v, a.e);
}

Rat diff_val(const InfElem& a, const InfElem& b) { return val_or_prec(a - b); }

bool agree(const InfElem& a, const InfElem& b, Rat limit) {
  InfElem d = a - b;
  if (d.is_zero()) return true;
  return Rat(d.v, d.e) >= limit;
}

}  // namespace fcm
