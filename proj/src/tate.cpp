// SPDX-License-Identifier: Apache-2.0
#include "fcm/tate.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fcm/errors.hpp"

namespace fcm {

Rat Decay::bound(std::int64_t i) const {
  switch (kind) {
    case Kind::Linear:
      return A * Rat(i) + B;
    case Kind::Geometric: {
      __int128 p = 1;
      for (std::int64_t k = 0; k < i / stride; ++k) {
        p *= base;
        if (p > (static_cast<__int128>(1) << 36)) return kInfVal;
      }
      return A * Rat(static_cast<std::int64_t>(p)) + B;
    }
    default:
      return -kInfVal;
  }
}

std::optional<Rat> Decay::tail_at_theta(std::int64_t T) const {
  switch (kind) {
    case Kind::Finite:
      return kInfVal;
    case Kind::Linear:
      if (!(A > Rat(1))) return std::nullopt;
      return (A - Rat(1)) * Rat(T) + B;
    case Kind::Geometric: {
      if (!(A > Rat(0)) || base < 2) return std::nullopt;
      Rat best = kInfVal;
      for (std::int64_t i = T; i < T + 200; ++i) {
        Rat b = bound(i);
        if (b >= kInfVal) break;
        best = std::min(best, b - Rat(i));
      }
      return best;
    }
    default:
      return std::nullopt;
  }
}

Decay Decay::twisted(long n, int q) const {
  Decay d = *this;
  if (kind != Kind::Linear && kind != Kind::Geometric) return d;
  Rat s(1);
  for (long k = 0; k < (n < 0 ? -n : n); ++k) s = s * Rat(q);
  if (n < 0) s = Rat(1) / s;
  d.A = A * s;
  d.B = B * s;
  return d;
}

std::string Decay::kind_name() const {
  switch (kind) {
    case Kind::Linear:
      return "linear";
    case Kind::Geometric:
      return "geometric";
    case Kind::Finite:
      return "finite";
    default:
      return "none";
  }
}

TateSeries TateSeries::constant(const InfElem& c) { return poly({c}); }

TateSeries TateSeries::poly(std::vector<InfElem> coeffs) {
  TateSeries s;
  s.a = std::move(coeffs);
  while (s.a.size() > 1 && s.a.back().exact_zero()) s.a.pop_back();
  s.decay = Decay::finite();
  return s;
}

TateSeries TateSeries::zero_like(const InfElem& proto, int T) {
  TateSeries s;
  s.a.assign(static_cast<std::size_t>(T), InfElem::zero(proto.F, proto.q, proto.e));
  s.decay = Decay::finite();
  return s;
}

bool TateSeries::respects_decay() const {
  if (decay.kind != Decay::Kind::Linear && decay.kind != Decay::Kind::Geometric) return true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].exact_zero()) continue;
    Rat b = decay.bound(static_cast<std::int64_t>(i));
    if (a[i].is_zero()) continue;
    if (a[i].val() < b) return false;
  }
  return true;
}

TateSeries TateSeries::truncate_prec(std::int64_t N) const {
  TateSeries s = *this;
  for (auto& x : s.a) x = x.truncate(N);
  return s;
}

namespace {

const InfElem& proto_of(const TateSeries& f, const TateSeries& g) {
  if (!f.a.empty()) return f.a[0];
  if (!g.a.empty()) return g.a[0];
  throw InvalidArgument("empty series");
}

// truncation degree of a binary result
int result_T(const TateSeries& f, const TateSeries& g, int full) {
  if (f.finite() && g.finite()) return full;
  if (f.finite()) return g.T();
  if (g.finite()) return f.T();
  return std::min(f.T(), g.T());
}

}  // namespace

TateSeries operator+(const TateSeries& f, const TateSeries& g) {
  const InfElem& pr = proto_of(f, g);
  int T = result_T(f, g, std::max(f.T(), g.T()));
  TateSeries r;
  r.decay = f.finite() && g.finite() ? Decay::finite() : Decay::none();
  r.a.reserve(static_cast<std::size_t>(T));
  InfElem z = InfElem::zero(pr.F, pr.q, pr.e);
  for (int i = 0; i < T; ++i) {
    const InfElem& x = i < f.T() ? f.a[i] : z;
    const InfElem& y = i < g.T() ? g.a[i] : z;
    r.a.push_back(x + y);
  }
  return r;
}

TateSeries operator-(const TateSeries& f, const TateSeries& g) {
  TateSeries h = g;
  for (auto& x : h.a) x = -x;
  return f + h;
}

TateSeries operator*(const InfElem& s, const TateSeries& f) {
  TateSeries r = f;
  for (auto& x : r.a) x = s * x;
  bool graded = r.decay.kind == Decay::Kind::Linear || r.decay.kind == Decay::Kind::Geometric;
  if (graded && !s.is_zero()) r.decay.B = r.decay.B + s.val();
  return r;
}

TateSeries operator*(const TateSeries& f, const TateSeries& g) {
  const InfElem& pr = proto_of(f, g);
  int T = result_T(f, g, f.T() + g.T() - 1);
  TateSeries r;
  r.decay = f.finite() && g.finite() ? Decay::finite() : Decay::none();
  r.a.assign(static_cast<std::size_t>(T), InfElem::zero(pr.F, pr.q, pr.e));
  for (int i = 0; i < f.T() && i < T; ++i) {
    if (f.a[i].exact_zero()) continue;
    for (int j = 0; j < g.T() && i + j < T; ++j) {
      if (g.a[j].exact_zero()) continue;
      r.a[i + j] = r.a[i + j] + f.a[i] * g.a[j];
    }
  }
  return r;
}

TateSeries twist(const TateSeries& f, long n, std::int64_t cap) {
  TateSeries r;
  r.decay = f.decay.twisted(n, f.a.empty() ? 1 : f.a[0].q);
  r.a.reserve(f.a.size());
  for (auto& x : f.a) r.a.push_back(frobenius(x, n, cap));
  return r;
}

InfElem eval_theta(const TateSeries& f, std::optional<Rat> target) {
  if (f.a.empty()) throw InvalidArgument("empty series");
  auto tail = f.decay.tail_at_theta(f.T());
  if (!tail) throw NoDecay("series has no usable decay descriptor");
  if (target && *tail < *target) throw NoDecay("tail bound " + tail->str() + " below target " + target->str());
  InfElem s = InfElem::zero(f.a[0].F, f.a[0].q, f.a[0].e);
  bool graded = f.decay.kind == Decay::Kind::Linear || f.decay.kind == Decay::Kind::Geometric;
  for (int i = 0; i < f.T(); ++i) {
    InfElem ai = f.a[i];
    if (ai.exact_zero()) continue;
    if (graded && ai.is_zero()) {
      // a zero at its precision is zero up to the declared bound as well
      Rat b = f.decay.bound(i);
      if (b >= kInfVal) continue;
      ai = InfElem::zero(ai.F, ai.q, ai.e, std::max(ai.N, (b * Rat(ai.e)).ceil()));
    }
    s = s + ai.shift(-static_cast<std::int64_t>(i) * ai.e);
  }
  if (*tail < kInfVal) s = s.truncate((*tail * Rat(s.e)).ceil());
  return s;
}

int TateMatrix::T() const {
  int t = -1, fin = 0;
  for (auto& s : e) {
    if (s.finite()) fin = std::max(fin, s.T());
    else t = t < 0 ? s.T() : std::min(t, s.T());
  }
  return t < 0 ? fin : t;
}

TateMatrix operator*(const TateMatrix& A, const TateMatrix& B) {
  if (A.cols != B.rows) throw InvalidArgument("matrix size mismatch");
  TateMatrix C = TateMatrix::make(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < B.cols; ++j) {
      TateSeries acc;
      bool first = true;
      for (int k = 0; k < A.cols; ++k) {
        TateSeries p = A.at(i, k) * B.at(k, j);
        acc = first ? p : acc + p;
        first = false;
      }
      C.at(i, j) = acc;
    }
  return C;
}

TateMatrix twist(const TateMatrix& A, long n, std::int64_t cap) {
  TateMatrix C = TateMatrix::make(A.rows, A.cols);
  for (std::size_t k = 0; k < A.e.size(); ++k) C.e[k] = twist(A.e[k], n, cap);
  return C;
}

TateMatrix transpose(const TateMatrix& A) {
  TateMatrix C = TateMatrix::make(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(j, i) = A.at(i, j);
  return C;
}

InfMatrix eval_theta(const TateMatrix& A, std::optional<Rat> target) {
  InfMatrix M(static_cast<std::size_t>(A.rows));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) M[i].push_back(eval_theta(A.at(i, j), target));
  return M;
}

std::string DiffEqReport::str() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << " residual=" << min_residual.str() << " threshold=" << threshold.str()
     << " window=[" << window_lo << "," << window_hi << "]" << (used_companion ? " companion" : " twisted");
  return os.str();
}

DiffEqReport check_difference_eq(const TateMatrix& Phi, const TateMatrix& Psi, Rat threshold) {
  if (Phi.rows != Phi.cols || Phi.cols != Psi.rows) throw InvalidArgument("difference equation size mismatch");
  DiffEqReport rep;
  rep.threshold = threshold;
  TateMatrix lhs;
  if (!Psi.inv_twist.empty()) {
    lhs = TateMatrix::make(Psi.rows, Psi.cols);
    lhs.e = Psi.inv_twist;
    rep.used_companion = true;
  } else {
    lhs = twist(Psi, -1);
  }
  TateMatrix rhs = Phi * Psi;
  int T = std::min(Psi.T(), lhs.T());
  rep.window_lo = 0;
  rep.window_hi = T - 1;
  Rat best = kInfVal;
  for (int i = 0; i < Psi.rows; ++i)
    for (int j = 0; j < Psi.cols; ++j)
      for (int n = 0; n < T; ++n) {
        const TateSeries& L = lhs.at(i, j);
        const TateSeries& R = rhs.at(i, j);
        InfElem z = InfElem::zero(Psi.at(i, j).a[0].F, Psi.at(i, j).a[0].q);
        InfElem a = n < L.T() ? L.a[n] : z;
        InfElem b = n < R.T() ? R.a[n] : z;
        best = std::min(best, diff_val(a, b));
      }
  rep.min_residual = best;
  rep.pass = best >= threshold;
  return rep;
}

TateSeries det_poly(const TateMatrix& A) {
  int r = A.rows;
  if (r != A.cols) throw InvalidArgument("determinant of a non-square matrix");
  if (r == 1) return A.at(0, 0);
  // expansion along the first row
  TateSeries acc;
  bool first = true;
  for (int j = 0; j < r; ++j) {
    TateMatrix minor = TateMatrix::make(r - 1, r - 1);
    for (int i = 1; i < r; ++i) {
      int cc = 0;
      for (int k = 0; k < r; ++k) {
        if (k == j) continue;
        minor.at(i - 1, cc++) = A.at(i, k);
      }
    }
    TateSeries term = A.at(0, j) * det_poly(minor);
    if (j % 2) term = TateSeries::zero_like(term.a[0], 1) - term;
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

InfMatrix mat_mul(const InfMatrix& A, const InfMatrix& B) {
  std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
  InfMatrix C(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      InfElem s = InfElem::zero(A[i][0].F, A[i][0].q, A[i][0].e);
      for (std::size_t l = 0; l < k; ++l) s = s + A[i][l] * B[l][j];
      C[i].push_back(s);
    }
  return C;
}

namespace {

std::size_t pick_pivot(const InfMatrix& A, std::size_t col, std::size_t from) {
  std::size_t best = A.size();
  for (std::size_t i = from; i < A.size(); ++i) {
    if (A[i][col].is_zero()) continue;
    if (best == A.size() || A[i][col].val() < A[best][col].val()) best = i;
  }
  return best;
}

}  // namespace

InfElem mat_det(InfMatrix A) {
  std::size_t n = A.size();
  InfElem det = InfElem::constant(A[0][0].F, A[0][0].q, 1, A[0][0].e);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = pick_pivot(A, c, c);
    if (p == n) {
      Rat prec = kInfVal;
      for (std::size_t i = c; i < n; ++i) prec = std::min(prec, val_or_prec(A[i][c]));
      InfElem z = InfElem::zero(det.F, det.q, det.e);
      if (prec < kInfVal) z = InfElem::zero(det.F, det.q, det.e, (prec * Rat(det.e)).ceil());
      return det * z;
    }
    if (p != c) {
      std::swap(A[p], A[c]);
      det = -det;
    }
    det = det * A[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (A[i][c].exact_zero()) continue;
      InfElem f = A[i][c] / A[c][c];
      for (std::size_t j = c; j < n; ++j) A[i][j] = A[i][j] - f * A[c][j];
    }
  }
  return det;
}

InfMatrix mat_inverse(const InfMatrix& A0) {
  std::size_t n = A0.size();
  InfMatrix A = A0;
  const InfElem& pr = A0[0][0];
  InfMatrix I(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      I[i].push_back(InfElem::constant(pr.F, pr.q, i == j ? 1 : 0, pr.e));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = pick_pivot(A, c, c);
    if (p == n) throw DivisionByApparentZero("singular matrix at working precision");
    std::swap(A[p], A[c]);
    std::swap(I[p], I[c]);
    InfElem inv = inverse(A[c][c]);
    for (std::size_t j = 0; j < n; ++j) {
      A[c][j] = A[c][j] * inv;
      I[c][j] = I[c][j] * inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || A[i][c].exact_zero()) continue;
      InfElem f = A[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        A[i][j] = A[i][j] - f * A[c][j];
        I[i][j] = I[i][j] - f * I[c][j];
      }
    }
  }
  return I;
}

}  // namespace fcm
