// SPDX-License-Identifier: Apache-2.0
#include "fcm/fpoly.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "fcm/errors.hpp"

namespace fcm {

FPoly::FPoly(FieldPtr f, std::vector<Elt> coeffs, char v) : F(std::move(f)), c(std::move(coeffs)), var(v) {
  normalize();
}

FPoly FPoly::constant(FieldPtr f, Elt a, char v) { return FPoly(std::move(f), {a}, v); }

FPoly FPoly::monomial(FieldPtr f, Elt a, int k, char v) {
  std::vector<Elt> c(k + 1, 0);
  c[k] = a;
  return FPoly(std::move(f), std::move(c), v);
}

void FPoly::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Elt FPoly::eval(Elt x) const {
  Elt r = 0;
  for (int i = deg(); i >= 0; --i) r = F->add(F->mul(r, x), c[i]);
  return r;
}

FPoly FPoly::monic() const {
  if (c.empty()) return *this;
  return scale(*this, F->inv(lc()));
}

FPoly FPoly::deriv() const {
  std::vector<Elt> d;
  for (int i = 1; i <= deg(); ++i) d.push_back(F->mul(F->from_int(i), c[i]));
  return FPoly(F, std::move(d), var);
}

FPoly FPoly::lift(const FieldPtr& to) const {
  std::vector<Elt> d(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) d[i] = embed(F, to, c[i]);
  return FPoly(to, std::move(d), var);
}

std::string FPoly::str() const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = deg(); i >= 0; --i) {
    if (!c[i]) continue;
    if (!first) os << " + ";
    first = false;
    bool unit = c[i] == 1;
    if (!unit || i == 0) os << c[i];
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

static const FieldPtr& pick(const FPoly& a, const FPoly& b) {
  if (a.F && b.F && a.F != b.F) throw IncompatibleFields("polynomials over different fields");
  return a.F ? a.F : b.F;
}

FPoly operator+(const FPoly& a, const FPoly& b) {
  const FieldPtr& F = pick(a, b);
  std::vector<Elt> r(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F->add(a.coef(static_cast<int>(i)), b.coef(static_cast<int>(i)));
  return FPoly(F, std::move(r), a.var);
}

FPoly operator-(const FPoly& a) {
  std::vector<Elt> r(a.c.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.F->neg(a.c[i]);
  return FPoly(a.F, std::move(r), a.var);
}

FPoly operator-(const FPoly& a, const FPoly& b) { return a + (-b); }

FPoly operator*(const FPoly& a, const FPoly& b) {
  const FieldPtr& F = pick(a, b);
  if (a.c.empty() || b.c.empty()) return FPoly(F, {}, a.var);
  std::vector<Elt> r(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (!a.c[i]) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] = F->add(r[i + j], F->mul(a.c[i], b.c[j]));
  }
  return FPoly(F, std::move(r), a.var);
}

FPoly scale(const FPoly& a, Elt s) {
  std::vector<Elt> r(a.c.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.F->mul(a.c[i], s);
  return FPoly(a.F, std::move(r), a.var);
}

std::pair<FPoly, FPoly> divmod(const FPoly& a, const FPoly& b) {
  if (b.is_zero()) throw DivisionByApparentZero("polynomial division by zero");
  const FieldPtr& F = pick(a, b);
  std::vector<Elt> r = a.c;
  int db = b.deg();
  if (a.deg() < db) return {FPoly(F, {}, a.var), a};
  std::vector<Elt> q(a.deg() - db + 1, 0);
  Elt li = F->inv(b.lc());
  for (int k = a.deg() - db; k >= 0; --k) {
    Elt co = F->mul(r[k + db], li);
    q[k] = co;
    if (!co) continue;
    for (int i = 0; i <= db; ++i) r[k + i] = F->sub(r[k + i], F->mul(co, b.c[i]));
  }
  return {FPoly(F, std::move(q), a.var), FPoly(F, std::move(r), a.var)};
}

FPoly operator%(const FPoly& a, const FPoly& b) { return divmod(a, b).second; }
FPoly operator/(const FPoly& a, const FPoly& b) { return divmod(a, b).first; }

FPoly gcd(FPoly a, FPoly b) {
  while (!b.is_zero()) {
    FPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

FPoly powmod(FPoly a, unsigned long long k, const FPoly& m) {
  FPoly r = FPoly::constant(m.F, 1, m.var);
  a = a % m;
  while (k > 0) {
    if (k & 1) r = (r * a) % m;
    k >>= 1;
    if (k) a = (a * a) % m;
  }
  return r;
}

FPoly pow(const FPoly& a, unsigned k) {
  FPoly r = FPoly::constant(a.F, 1, a.var);
  for (unsigned i = 0; i < k; ++i) r = r * a;
  return r;
}

FPoly frobenius_power(const FPoly& a, int k) {
  if (a.is_zero()) return a;
  long step = ipow(a.F->p, k);
  std::vector<Elt> r(static_cast<std::size_t>(a.deg()) * step + 1, 0);
  for (int i = 0; i <= a.deg(); ++i) r[static_cast<std::size_t>(i) * step] = a.F->frob(a.c[i], k);
  return FPoly(a.F, std::move(r), a.var);
}

namespace {

// split a product of distinct linear factors into its roots
void split_linear(const FPoly& g, std::vector<Elt>& out, std::mt19937_64& rng) {
  if (g.deg() <= 0) return;
  if (g.deg() == 1) {
    FPoly m = g.monic();
    out.push_back(m.F->neg(m.c[0]));
    return;
  }
  const FieldPtr& F = g.F;
  if (F->Q <= 4096) {
    for (Elt x = 0; x < F->Q; ++x)
      if (g.eval(x) == 0) out.push_back(x);
    return;
  }
  for (int attempt = 0; attempt < 200; ++attempt) {
    Elt d = static_cast<Elt>(rng() % F->Q);
    FPoly h;
    if (F->p == 2) {
      // trace map
      FPoly xd(F, {d, 1}, g.var);
      FPoly acc = xd % g, term = acc;
      for (int i = 1; i < F->n; ++i) {
        term = (term * term) % g;
        acc = acc + term;
      }
      h = gcd(g, acc);
    } else {
      FPoly xd(F, {d, 1}, g.var);
      FPoly pw = powmod(xd, (F->Q - 1) / 2, g);
      h = gcd(g, pw - FPoly::constant(F, 1, g.var));
    }
    if (h.deg() > 0 && h.deg() < g.deg()) {
      split_linear(h, out, rng);
      split_linear(g / h, out, rng);
      return;
    }
  }
  throw InvalidArgument("root splitting failed");
}

int multiplicity(FPoly f, Elt r) {
  int m = 0;
  FPoly lin(f.F, {f.F->neg(r), 1}, f.var);
  while (!f.is_zero()) {
    auto [q, rem] = divmod(f, lin);
    if (!rem.is_zero()) break;
    ++m;
    f = q;
  }
  return m;
}

}  // namespace

std::vector<std::pair<Elt, int>> poly_roots_in_ext(const FPoly& f, const FieldPtr& target, bool complete) {
  if (f.is_zero()) throw InvalidArgument("zero polynomial has no finite root set");
  FPoly g = f.lift(target);
  std::vector<std::pair<Elt, int>> res;
  if (g.deg() >= 1) {
    FPoly xq = powmod(FPoly::x(target, g.var), target->Q, g);
    FPoly rad = gcd(g, xq - FPoly::x(target, g.var));
    std::vector<Elt> roots;
    std::mt19937_64 rng(0x5eed);
    split_linear(rad, roots, rng);
    std::sort(roots.begin(), roots.end(), [&](Elt a, Elt b) {
      if (a == 0 || b == 0) return a == 0 && b != 0;
      return target->dlog(a) < target->dlog(b);
    });
    for (Elt r : roots) res.push_back({r, multiplicity(g, r)});
  }
  if (complete) {
    int tot = 0;
    for (auto& pr : res) tot += pr.second;
    if (tot < g.deg()) throw TargetTooSmall("some roots lie outside the target field");
  }
  return res;
}

std::vector<ExtRoot> all_roots(const FPoly& f) {
  if (f.is_zero()) throw InvalidArgument("zero polynomial");
  std::vector<ExtRoot> out;
  FPoly rest = f;
  const FieldPtr& F = f.F;
  for (int k = 1; rest.deg() > 0; ++k) {
    if (k > f.deg()) throw InvalidArgument("root search did not terminate");
    FieldPtr T = std_field(F->p, F->n * k);
    FPoly g = rest.lift(T);
    auto rs = poly_roots_in_ext(g, T);
    for (auto& [r, m] : rs) {
      // roots lying in a smaller level were removed already
      out.push_back({T, r, m});
      FPoly lin(T, {T->neg(r), 1}, g.var);
      for (int i = 0; i < m; ++i) g = g / lin;
    }
    if (rs.empty()) continue;
    // bring the remaining cofactor back to F: product over Galois orbits lies in F
    std::vector<Elt> back(g.c.size());
    for (std::size_t i = 0; i < g.c.size(); ++i) {
      if (!restrict_to(T, F, g.c[i], back[i])) throw InvalidArgument("cofactor not defined over base");
    }
    rest = FPoly(F, back, f.var);
  }
  return out;
}

RatFunc::RatFunc(FPoly n) : num(std::move(n)), den(FPoly::constant(num.F, 1, num.var)) {}

RatFunc::RatFunc(FPoly n, FPoly d) {
  if (d.is_zero()) throw DivisionByApparentZero("rational function with zero denominator");
  if (n.is_zero()) {
    num = n;
    den = FPoly::constant(d.F, 1, d.var);
    return;
  }
  FPoly g = gcd(n, d);
  n = n / g;
  d = d / g;
  Elt l = d.lc();
  Elt li = d.F->inv(l);
  num = scale(n, li);
  den = scale(d, li);
}

RatFunc RatFunc::constant(const FieldPtr& f, Elt a, char v) { return RatFunc(FPoly::constant(f, a, v)); }

std::string RatFunc::str() const {
  if (den.deg() == 0) return num.str();
  return "(" + num.str() + ")/(" + den.str() + ")";
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den == b.den) return RatFunc(a.num + b.num, a.den);
  return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
}
RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num, a.den); }
RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
RatFunc operator*(const RatFunc& a, const RatFunc& b) { return RatFunc(a.num * b.num, a.den * b.den); }
RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw DivisionByApparentZero("rational function division by zero");
  return RatFunc(a.num * b.den, a.den * b.num);
}

RatFunc frobenius_power(const RatFunc& a, int k) {
  return RatFunc(frobenius_power(a.num, k), frobenius_power(a.den, k));
}

}  // namespace fcm
