// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcm/inf.hpp"

namespace fcm {

// Lower bound on val(a_i) declared by the producer of a series.
//   Linear:    A*i + B
//   Geometric: A*base^floor(i/stride) + B
//   Finite:    a_i = 0 exactly for i >= T
struct Decay {
  enum class Kind { None, Linear, Geometric, Finite };
  Kind kind = Kind::None;
  Rat A, B;
  int base = 1;
  int stride = 1;

  static Decay none() { return {}; }
  static Decay finite() { return {Kind::Finite, Rat(0), Rat(0), 1, 1}; }
  static Decay linear(Rat A, Rat B) { return {Kind::Linear, A, B, 1, 1}; }
  static Decay geometric(Rat A, int base, Rat B, int stride = 1) { return {Kind::Geometric, A, B, base, stride}; }

  // bound for index i; kInfVal past the end of a finite series
  Rat bound(std::int64_t i) const;
  // min over i >= T of bound(i) - i, or nullopt when unbounded below
  std::optional<Rat> tail_at_theta(std::int64_t T) const;
  Decay twisted(long n, int q) const;
  std::string kind_name() const;
};

struct TateSeries {
  std::vector<InfElem> a;  // a_0 .. a_{T-1}
  Decay decay;

  int T() const { return static_cast<int>(a.size()); }
  bool finite() const { return decay.kind == Decay::Kind::Finite; }
  const InfElem& operator[](std::size_t i) const { return a[i]; }

  static TateSeries constant(const InfElem& c);
  // exact polynomial in t
  static TateSeries poly(std::vector<InfElem> coeffs);
  static TateSeries zero_like(const InfElem& proto, int T);

  // every coefficient respects the declared decay
  bool respects_decay() const;
  TateSeries truncate_prec(std::int64_t N) const;
};

TateSeries operator+(const TateSeries& f, const TateSeries& g);
TateSeries operator-(const TateSeries& f, const TateSeries& g);
TateSeries operator*(const TateSeries& f, const TateSeries& g);
TateSeries operator*(const InfElem& s, const TateSeries& f);

// coefficientwise a -> a^{q^n}; positive n capped at cap (u-units)
TateSeries twist(const TateSeries& f, long n, std::int64_t cap = InfElem::kExact);

// sum a_i theta^i with the tail bounded by the decay descriptor.
// target (valuation units) is required when given; NoDecay otherwise.
InfElem eval_theta(const TateSeries& f, std::optional<Rat> target = std::nullopt);

using InfMatrix = std::vector<std::vector<InfElem>>;

struct TateMatrix {
  int rows = 0, cols = 0;
  std::vector<TateSeries> e;  // row major
  // optional producer-supplied inverse twist of this matrix
  std::vector<TateSeries> inv_twist;

  TateSeries& at(int i, int j) { return e[static_cast<std::size_t>(i) * cols + j]; }
  const TateSeries& at(int i, int j) const { return e[static_cast<std::size_t>(i) * cols + j]; }
  static TateMatrix make(int r, int c) {
    TateMatrix m;
    m.rows = r;
    m.cols = c;
    m.e.resize(static_cast<std::size_t>(r) * c);
    return m;
  }
  int T() const;
};

TateMatrix operator*(const TateMatrix& A, const TateMatrix& B);
TateMatrix twist(const TateMatrix& A, long n, std::int64_t cap = InfElem::kExact);
InfMatrix eval_theta(const TateMatrix& A, std::optional<Rat> target = std::nullopt);
TateMatrix transpose(const TateMatrix& A);

struct DiffEqReport {
  Rat min_residual;  // valuation units
  int window_lo = 0, window_hi = 0;
  Rat threshold;
  bool pass = false;
  bool used_companion = false;
  std::string str() const;
};

// residual of Psi^{(-1)} - Phi*Psi on the t-degree window [0, T-1]
DiffEqReport check_difference_eq(const TateMatrix& Phi, const TateMatrix& Psi, Rat threshold);

// determinant of an exact polynomial matrix, via fraction-free expansion
TateSeries det_poly(const TateMatrix& A);

InfMatrix mat_mul(const InfMatrix& A, const InfMatrix& B);
InfElem mat_det(InfMatrix A);
// Gaussian elimination with minimal-valuation pivots
InfMatrix mat_inverse(const InfMatrix& A);

}  // namespace fcm
