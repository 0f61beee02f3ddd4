// SPDX-License-Identifier: Apache-2.0
#include "fcm/special.hpp"

#include <cmath>

#include "fcm/errors.hpp"

namespace fcm {

FieldPtr base_field(int q) {
  auto pf = prime_factors(static_cast<unsigned long>(q));
  if (pf.size() != 1) throw InvalidArgument("q must be a prime power");
  int p = static_cast<int>(pf[0]);
  int a = 0;
  for (long x = 1; x < q; x *= p) ++a;
  return std_field(p, a);
}

InfElem theta(int q, int e) { return InfElem::theta_pow(base_field(q), q, 1, 1, e); }

InfElem neg_theta_root(int q) { return nth_root(-theta(q), q - 1); }

TateSeries omega_series(int q, int T, std::int64_t N) {
  if (T < 1) throw InvalidArgument("T must be positive");
  FieldPtr F = base_field(q);
  InfElem c = neg_theta_root(q);
  InfElem pref = inverse(pow(c, static_cast<std::uint64_t>(q)));
  const int e = c.e;
  // product coefficients in theta^{-1}, absolute precision M (e = 1)
  std::int64_t M = N + 3;
  std::vector<InfElem> prod(static_cast<std::size_t>(T), InfElem::zero(F, q));
  prod[0] = InfElem::constant(F, q, 1);
  std::int64_t qi = q;
  for (int i = 1; qi < M; ++i, qi *= q) {
    InfElem f = InfElem::theta_pow(F, q, -qi);
    for (int n = std::min(i, T - 1); n >= 1; --n) {
      if (prod[n - 1].exact_zero()) continue;
      prod[n] = (prod[n] - f * prod[n - 1]).truncate(M);
    }
  }
  TateSeries s;
  s.decay = Decay::geometric(Rat(q, q - 1), q, Rat(0));
  for (int n = 0; n < T; ++n) s.a.push_back((pref * prod[n].truncate(M)).truncate(N * e));
  return s;
}

TateMatrix omega_psi(int q, int T, std::int64_t N, int n) {
  TateSeries om = omega_series(q, T, q * N);
  TateSeries pw = om;
  for (int k = 1; k < n; ++k) pw = pw * om;
  pw.decay = Decay::geometric(Rat(static_cast<std::int64_t>(n) * q, q - 1), q, Rat(0), n);
  TateMatrix m = TateMatrix::make(1, 1);
  std::int64_t Nu = N * pw.a[0].e;
  TateSeries comp = twist(pw, -1);
  m.inv_twist = {comp.truncate_prec(Nu)};
  m.at(0, 0) = pw.truncate_prec(Nu);
  return m;
}

InfElem carlitz_period(int q, std::int64_t N) {
  std::int64_t guard = 8;
  for (std::int64_t x = 1; x < N; x *= q) ++guard;
  std::int64_t M = N + guard;
  int T = 1;
  Decay d = Decay::geometric(Rat(q, q - 1), q, Rat(0));
  while (*d.tail_at_theta(T) < Rat(M)) ++T;
  TateSeries om = omega_series(q, T, M);
  InfElem w = eval_theta(om, Rat(M));
  InfElem pi = inverse(w);
  if (pi.N < N * pi.e) throw PrecisionExhausted("guard digits too small for the Carlitz period");
  return pi.truncate(N * pi.e);
}

InfElem pitilde_product(int q, std::int64_t N) {
  FieldPtr F = base_field(q);
  InfElem c = neg_theta_root(q);
  InfElem pref = pow(c, static_cast<std::uint64_t>(q));
  std::int64_t M = N + 4;
  InfElem prod = InfElem::constant(F, q, 1);
  InfElem one = InfElem::constant(F, q, 1);
  for (std::int64_t qi = q; qi - 1 < M; qi *= q) {
    InfElem f = one - InfElem::theta_pow(F, q, 1 - qi);
    prod = (prod * inverse(f, M)).truncate(M);
  }
  return (pref * prod).truncate(N * c.e);
}

InfElem carlitz_D(int q, int i) {
  InfElem th = theta(q);
  InfElem D = InfElem::constant(th.F, q, 1);
  for (int k = 1; k <= i; ++k) D = (frobenius(th, k) - th) * frobenius(D, 1);
  return D;
}

InfElem carlitz_L(int q, int i) {
  InfElem th = theta(q);
  InfElem L = InfElem::constant(th.F, q, 1);
  for (int k = 1; k <= i; ++k) L = (th - frobenius(th, k)) * L;
  return L;
}

namespace {

// x exactly zero or minus a monic polynomial in theta over F_q
bool is_pole(const InfElem& x) {
  if (x.exact_zero()) return true;
  if (!x.exact()) return false;
  InfElem y = -x;
  if (y.end() > 1) return false;
  for (auto& [k, c] : y.terms()) {
    if (k % y.e) return false;
    Elt r;
    if (!restrict_to(y.F, base_field(y.q), c, r)) return false;
  }
  return y.lead_coef() == 1;
}

long qpow(int q, int i) {
  long r = 1;
  for (int k = 0; k < i; ++k) r *= q;
  return r;
}

}  // namespace

GammaResult geometric_gamma(const InfElem& x, std::int64_t N) {
  if (is_pole(x)) throw PoleArgument("Gamma has a pole at this argument");
  if (x.is_zero()) throw PrecisionExhausted("argument is zero at its precision");
  const int q = x.q;
  Rat vx = x.val();
  std::int64_t slack = 4 + 2 * std::max<std::int64_t>(0, -vx.floor());
  for (int attempt = 0; attempt < 6; ++attempt) {
    Rat M(N + slack);
    InfElem P = InfElem::constant(x.F, q, 1, x.e);
    GammaResult res;
    for (int D = 0;; ++D) {
      // valuations of the block terms x^{q^i} / (D_i L_{D-i}^{q^i})
      Rat mn = kInfVal;
      for (int i = 0; i <= D; ++i) {
        long qi = qpow(q, i);
        Rat v = Rat(qi) * vx + Rat(static_cast<std::int64_t>(i) * qi) +
                Rat(qi * q * (qpow(q, D - i) - 1), q - 1);
        mn = std::min(mn, v);
      }
      if (mn > M && mn > Rat(0)) {
        res.degree_reached = D;
        res.tail_bound = mn;
        break;
      }
      if (D > 40) throw PrecisionExhausted("gamma product is not converging");
      std::int64_t Mu = (M * Rat(x.e)).ceil() + 1;
      InfElem blk = InfElem::constant(x.F, q, 1, x.e);
      for (int i = 0; i <= D; ++i) {
        InfElem den = carlitz_D(q, i) * frobenius(carlitz_L(q, D - i), i);
        InfElem num = frobenius(x, i);
        blk = blk + divide(num, den, Mu);
      }
      P = P * blk;
    }
    InfElem g = inverse(x * P);
    std::int64_t want = N * g.e;
    if (g.N >= want) {
      res.value = g.truncate(want);
      return res;
    }
    slack += want - g.N + 4;
  }
  throw PrecisionExhausted("gamma value did not reach the requested precision");
}

InfElem geometric_gamma_enumerated(const InfElem& x, std::int64_t N, int max_degree) {
  if (is_pole(x)) throw PoleArgument("Gamma has a pole at this argument");
  const int q = x.q;
  FieldPtr F = base_field(q);
  std::int64_t Mu = (N + 8) * x.e;
  InfElem P = InfElem::constant(x.F, q, 1, x.e);
  InfElem one = InfElem::constant(x.F, q, 1, x.e);
  for (int D = 0; D <= max_degree; ++D) {
    long count = qpow(q, D);
    for (long idx = 0; idx < count; ++idx) {
      std::vector<Elt> c(static_cast<std::size_t>(D) + 1, 0);
      long t = idx;
      for (int j = 0; j < D; ++j) {
        c[j] = static_cast<Elt>(t % q);
        t /= q;
      }
      c[D] = 1;
      InfElem a = InfElem::from_poly(FPoly(F, c, 't'), q, 1);
      P = (P * (one + divide(x, a, Mu))).truncate(Mu);
    }
  }
  return inverse(x * P).truncate(N * x.e);
}

}  // namespace fcm
