// SPDX-License-Identifier: Apache-2.0
#include "fcm/field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "fcm/errors.hpp"

namespace fcm {

namespace {

using DP = std::vector<int>;  // polynomial over F_p, low to high

void trim(DP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

DP dp_mod(DP a, const DP& f, int p) {
  trim(a);
  int df = static_cast<int>(f.size()) - 1;
  int lead_inv = 1;
  {
    long b = f.back(), r = 1, e = p - 2;
    while (e > 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    lead_inv = static_cast<int>(r);
  }
  while (static_cast<int>(a.size()) - 1 >= df && !a.empty()) {
    int k = static_cast<int>(a.size()) - 1 - df;
    long c = static_cast<long>(a.back()) * lead_inv % p;
    for (int i = 0; i <= df; ++i)
      a[i + k] = static_cast<int>(((a[i + k] - c * f[i]) % p + p) % p);
    trim(a);
  }
  return a;
}

DP dp_mulmod(const DP& a, const DP& b, const DP& f, int p) {
  if (a.empty() || b.empty()) return {};
  DP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<int>((r[i + j] + static_cast<long>(a[i]) * b[j]) % p);
  }
  return dp_mod(std::move(r), f, p);
}

DP dp_powmod(DP a, unsigned long long k, const DP& f, int p) {
  DP r{1};
  a = dp_mod(a, f, p);
  while (k > 0) {
    if (k & 1) r = dp_mulmod(r, a, f, p);
    k >>= 1;
    if (k) a = dp_mulmod(a, a, f, p);
  }
  return r;
}

DP dp_sub(DP a, const DP& b, int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
  trim(a);
  return a;
}

DP dp_gcd(DP a, DP b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    DP r = dp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool dp_irreducible(const DP& f, int p) {
  int n = static_cast<int>(f.size()) - 1;
  DP x{0, 1};
  // x^{p^n} == x mod f
  DP xp = x;
  std::vector<DP> pows(n + 1);
  pows[0] = x;
  for (int i = 1; i <= n; ++i) {
    xp = dp_powmod(xp, static_cast<unsigned long long>(p), f, p);
    pows[i] = xp;
  }
  if (dp_sub(pows[n], x, p).size() != 0) return false;
  for (long r : prime_factors(static_cast<unsigned long>(n))) {
    DP g = dp_gcd(f, dp_sub(pows[n / r], x, p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

// evaluate g (coefficients in F_p) at the element a of F_p[x]/f
DP dp_compose_eval(const DP& g, const DP& a, const DP& f, int p) {
  DP r;
  for (int i = static_cast<int>(g.size()) - 1; i >= 0; --i) {
    r = dp_mulmod(r, a, f, p);
    DP c{g[i]};
    trim(c);
    if (r.size() < 1) r = c;
    else if (!c.empty()) {
      r[0] = (r[0] + c[0]) % p;
      trim(r);
    }
  }
  return r;
}

struct Registry {
  std::mutex mu;
  std::map<std::pair<int, int>, FieldPtr> std_fields;
  std::map<std::pair<int, std::vector<int>>, FieldPtr> by_modulus;
  std::map<std::tuple<int, int, int>, std::shared_ptr<std::vector<Elt>>> embeds;
};

Registry& registry() {
  static Registry r;
  return r;
}

FieldPtr make_field(int p, const DP& modulus, bool standard) {
  auto F = std::make_shared<Field>();
  F->p = p;
  F->n = static_cast<int>(modulus.size()) - 1;
  F->modulus = modulus;
  F->standard = standard;
  F->Q = static_cast<std::uint32_t>(ipow(p, F->n));
  F->build();
  return F;
}

DP find_std_modulus(int p, int n, const std::vector<std::pair<int, DP>>& subs) {
  unsigned long Q = static_cast<unsigned long>(ipow(p, n));
  auto qf = prime_factors(Q - 1);
  for (unsigned long idx = 0; idx < Q; ++idx) {
    DP f(n + 1, 0);
    unsigned long t = idx;
    for (int i = 0; i < n; ++i) {
      f[i] = static_cast<int>(t % p);
      t /= p;
    }
    f[n] = 1;
    if (f[0] == 0) continue;
    if (!dp_irreducible(f, p)) continue;
    DP x{0, 1};
    bool prim = true;
    for (long r : qf) {
      DP y = dp_powmod(x, (Q - 1) / r, f, p);
      if (y.size() == 1 && y[0] == 1) {
        prim = false;
        break;
      }
    }
    if (!prim) continue;
    bool compat = true;
    for (auto& [d, g] : subs) {
      unsigned long Qd = static_cast<unsigned long>(ipow(p, d));
      DP beta = dp_powmod(x, (Q - 1) / (Qd - 1), f, p);
      if (!dp_compose_eval(g, beta, f, p).empty()) {
        compat = false;
        break;
      }
    }
    if (compat) return f;
  }
  throw InvalidArgument("no compatible primitive modulus found");
}

}  // namespace

bool is_prime(long v) {
  if (v < 2) return false;
  for (long d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

std::vector<long> prime_factors(unsigned long v) {
  std::vector<long> out;
  for (unsigned long d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(static_cast<long>(d));
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(static_cast<long>(v));
  return out;
}

long ipow(long b, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= b;
  return r;
}

void Field::build() {
  if (n == 1) {
    kind = Kind::Prime;
    // least primitive root
    auto pf = prime_factors(static_cast<unsigned long>(p - 1));
    for (int g = 1; g < p; ++g) {
      bool ok = true;
      for (long r : pf) {
        long b = g, e = (p - 1) / r, acc = 1;
        while (e > 0) {
          if (e & 1) acc = acc * b % p;
          b = b * b % p;
          e >>= 1;
        }
        if (acc == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        gen_ = static_cast<Elt>(g);
        break;
      }
    }
    if (p <= (1 << 16)) {
      log_.assign(Q, 0);
      exp_.assign(2 * (Q - 1) + 1, 0);
      Elt x = 1;
      for (std::uint32_t i = 0; i < Q - 1; ++i) {
        exp_[i] = exp_[i + Q - 1] = x;
        log_[x] = i;
        x = static_cast<Elt>(static_cast<std::uint64_t>(x) * gen_ % p);
      }
    }
    return;
  }
  kind = Q <= 4096 ? Kind::Table : Kind::Poly;
  // generator: alpha when primitive, else least primitive element
  auto pf = prime_factors(Q - 1);
  Elt cand = static_cast<Elt>(p);
  {
    auto primcheck = [&](Elt a) {
      for (long r : pf) {
        Elt acc = 1, b = a;
        std::uint64_t e = (Q - 1) / static_cast<std::uint64_t>(r);
        while (e > 0) {
          if (e & 1) acc = mul_slow(acc, b);
          b = mul_slow(b, b);
          e >>= 1;
        }
        if (acc == 1) return false;
      }
      return true;
    };
    if (!primcheck(cand)) {
      for (cand = 2; cand < Q; ++cand)
        if (primcheck(cand)) break;
    }
  }
  gen_ = cand;
  if (kind == Kind::Table) {
    log_.assign(Q, 0);
    exp_.assign(2 * (Q - 1) + 1, 0);
    Elt x = 1;
    for (std::uint32_t i = 0; i < Q - 1; ++i) {
      exp_[i] = exp_[i + Q - 1] = x;
      log_[x] = i;
      x = mul_slow(x, gen_);
    }
    if (p != 2 && Q <= 1024) {
      addt_.assign(static_cast<std::size_t>(Q) * Q, 0);
      for (Elt a = 0; a < Q; ++a)
        for (Elt b = 0; b < Q; ++b)
          addt_[static_cast<std::size_t>(a) * Q + b] = static_cast<std::uint16_t>(add_slow(a, b));
    }
  }
}

Elt Field::add_slow(Elt a, Elt b) const {
  Elt r = 0, m = 1;
  while (a > 0 || b > 0) {
    Elt d = (a % p + b % p) % p;
    r += d * m;
    m *= p;
    a /= p;
    b /= p;
  }
  return r;
}

Elt Field::neg_slow(Elt a) const {
  Elt r = 0, m = 1;
  while (a > 0) {
    Elt d = a % p;
    r += (d == 0 ? 0 : p - d) * m;
    m *= p;
    a /= p;
  }
  return r;
}

Elt Field::mul_slow(Elt a, Elt b) const {
  if (a == 0 || b == 0) return 0;
  DP da = digits(a), db = digits(b);
  return from_digits(dp_mulmod(da, db, modulus, p));
}

Elt Field::inv(Elt a) const {
  if (a == 0) throw DivisionByApparentZero("inverse of zero in finite field");
  if (kind == Kind::Prime) return pow(a, p - 2);
  if (kind == Kind::Table) return exp_[(Q - 1 - log_[a]) % (Q - 1)];
  return pow(a, Q - 2);
}

Elt Field::pow(Elt a, std::uint64_t k) const {
  if (k == 0) return 1;
  if (a == 0) return 0;
  if (!log_.empty()) return exp_[(static_cast<std::uint64_t>(log_[a]) * (k % (Q - 1))) % (Q - 1)];
  Elt r = 1;
  while (k > 0) {
    if (k & 1) r = mul(r, a);
    k >>= 1;
    if (k) a = mul(a, a);
  }
  return r;
}

Elt Field::frob(Elt a, long k) const {
  long kk = ((k % n) + n) % n;
  if (kk == 0 || a == 0) return a;
  std::uint64_t e = static_cast<std::uint64_t>(ipow(p, static_cast<int>(kk)));
  return pow(a, e);
}

Elt Field::from_int(long v) const {
  long r = ((v % p) + p) % p;
  return static_cast<Elt>(r);
}

std::uint32_t Field::dlog(Elt a) const {
  if (a == 0) throw InvalidArgument("dlog of zero");
  if (!log_.empty()) return log_[a];
  // baby-step giant-step
  std::uint32_t m = 1;
  while (static_cast<std::uint64_t>(m) * m < Q - 1) ++m;
  std::unordered_map<Elt, std::uint32_t> baby;
  Elt x = 1;
  for (std::uint32_t j = 0; j < m; ++j) {
    baby.emplace(x, j);
    x = mul(x, gen_);
  }
  Elt giant = inv(pow(gen_, m));
  Elt y = a;
  for (std::uint32_t i = 0; i <= m; ++i) {
    auto it = baby.find(y);
    if (it != baby.end()) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(i) * m + it->second) % (Q - 1));
    y = mul(y, giant);
  }
  throw InvalidArgument("dlog failed");
}

Elt Field::exp_gen(std::uint64_t k) const {
  if (!exp_.empty()) return exp_[k % (Q - 1)];
  return pow(gen_, k);
}

std::vector<int> Field::digits(Elt a) const {
  std::vector<int> d;
  while (a > 0) {
    d.push_back(static_cast<int>(a % p));
    a /= p;
  }
  return d;
}

Elt Field::from_digits(const std::vector<int>& d) const {
  Elt r = 0, m = 1;
  for (std::size_t i = 0; i < d.size() && i < static_cast<std::size_t>(n); ++i) {
    r += static_cast<Elt>(((d[i] % p) + p) % p) * m;
    m *= p;
  }
  return r;
}

FieldPtr std_field(int p, int n) {
  if (!is_prime(p)) throw InvalidArgument("characteristic must be prime");
  if (n < 1) throw InvalidArgument("extension degree must be positive");
  if (static_cast<double>(n) * std::log2(static_cast<double>(p)) > 31)
    throw InvalidArgument("field too large");
  auto& R = registry();
  {
    std::lock_guard<std::mutex> lk(R.mu);
    auto it = R.std_fields.find({p, n});
    if (it != R.std_fields.end()) return it->second;
  }
  DP modulus;
  if (n == 1) {
    auto F1 = std::make_shared<Field>();
    F1->p = p;
    F1->n = 1;
    F1->Q = static_cast<std::uint32_t>(p);
    F1->modulus = {0, 1};
    F1->build();
    modulus = {static_cast<int>((p - F1->gen()) % p), 1};
  } else {
    std::vector<std::pair<int, DP>> subs;
    for (int d = 1; d < n; ++d)
      if (n % d == 0) subs.push_back({d, std_field(p, d)->modulus});
    modulus = find_std_modulus(p, n, subs);
  }
  FieldPtr F = make_field(p, modulus, true);
  std::lock_guard<std::mutex> lk(R.mu);
  auto [it, ins] = R.std_fields.emplace(std::make_pair(p, n), F);
  if (ins) R.by_modulus.emplace(std::make_pair(p, modulus), F);
  return it->second;
}

FieldPtr prime_field(int p) { return std_field(p, 1); }

FieldPtr field_with_modulus(int p, const std::vector<int>& modulus_in) {
  DP m = modulus_in;
  for (auto& c : m) c = ((c % p) + p) % p;
  trim(m);
  if (m.size() < 2) throw InvalidArgument("modulus degree must be positive");
  int n = static_cast<int>(m.size()) - 1;
  if (m.back() != 1) throw InvalidArgument("modulus must be monic");
  if (n == 1) return std_field(p, 1);
  FieldPtr sf = std_field(p, n);
  if (sf->modulus == m) return sf;
  auto& R = registry();
  {
    std::lock_guard<std::mutex> lk(R.mu);
    auto it = R.by_modulus.find({p, m});
    if (it != R.by_modulus.end()) return it->second;
  }
  if (!dp_irreducible(m, p)) throw InvalidArgument("modulus is reducible");
  FieldPtr F = make_field(p, m, false);
  std::lock_guard<std::mutex> lk(R.mu);
  return R.by_modulus.emplace(std::make_pair(p, m), F).first->second;
}

Elt embed(const FieldPtr& from, const FieldPtr& to, Elt x) {
  if (from == to) return x;
  if (from->p != to->p || to->n % from->n != 0)
    throw IncompatibleFields("no embedding between fields of these degrees");
  if (from->n == 1) return x;
  if (!from->standard || !to->standard)
    throw IncompatibleFields("embedding requires standard moduli");
  auto& R = registry();
  std::shared_ptr<std::vector<Elt>> tab;
  {
    std::lock_guard<std::mutex> lk(R.mu);
    auto it = R.embeds.find({from->p, from->n, to->n});
    if (it != R.embeds.end()) tab = it->second;
  }
  if (!tab) {
    auto t = std::make_shared<std::vector<Elt>>();
    std::uint64_t k = (to->Q - 1) / (from->Q - 1);
    Elt a = to->pow(to->from_digits({0, 1}), k);
    std::vector<Elt> basis(from->n);
    Elt acc = 1;
    for (int i = 0; i < from->n; ++i) {
      basis[i] = acc;
      acc = to->mul(acc, a);
    }
    if (from->Q <= (1u << 16)) {
      t->resize(from->Q);
      for (Elt y = 0; y < from->Q; ++y) {
        auto d = from->digits(y);
        Elt r = 0;
        for (std::size_t i = 0; i < d.size(); ++i)
          for (int c = 0; c < d[i]; ++c) r = to->add(r, basis[i]);
        (*t)[y] = r;
      }
      std::lock_guard<std::mutex> lk(R.mu);
      R.embeds[{from->p, from->n, to->n}] = t;
      tab = t;
    } else {
      auto d = from->digits(x);
      Elt r = 0;
      for (std::size_t i = 0; i < d.size(); ++i)
        r = to->add(r, to->mul(to->from_int(d[i]), basis[i]));
      return r;
    }
  }
  return (*tab)[x];
}

bool restrict_to(const FieldPtr& big, const FieldPtr& sub, Elt x, Elt& out) {
  if (big == sub) {
    out = x;
    return true;
  }
  if (x == 0) {
    out = 0;
    return true;
  }
  if (big->frob(x, sub->n) != x) return false;
  if (sub->n == 1) {
    out = x;  // prime-field elements have single digit
    return x < static_cast<Elt>(big->p);
  }
  std::uint64_t k = (big->Q - 1) / (sub->Q - 1);
  std::uint32_t l = big->dlog(x);
  if (l % k != 0) return false;
  out = sub->exp_gen(l / k);
  return true;
}

FieldPtr compositum(const FieldPtr& a, const FieldPtr& b) {
  if (a == b) return a;
  if (a->p != b->p) throw IncompatibleFields("different characteristics");
  int n = std::lcm(a->n, b->n);
  if (n == a->n && (a->standard || b->n == 1)) return a;
  if (n == b->n && (b->standard || a->n == 1)) return b;
  if ((!a->standard && a->n > 1) || (!b->standard && b->n > 1))
    throw IncompatibleFields("compositum requires standard moduli");
  return std_field(a->p, n);
}

}  // namespace fcm
