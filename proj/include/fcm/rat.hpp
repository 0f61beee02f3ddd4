// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numeric>
#include <string>

namespace fcm {

struct Rat {
  std::int64_t n = 0, d = 1;
  Rat() = default;
  Rat(std::int64_t num, std::int64_t den = 1) : n(num), d(den) { norm(); }
  void norm() {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
  }
  double dbl() const { return static_cast<double>(n) / static_cast<double>(d); }
  std::int64_t floor() const { return n >= 0 ? n / d : -((-n + d - 1) / d); }
  std::int64_t ceil() const { return n >= 0 ? (n + d - 1) / d : -((-n) / d); }
  std::string str() const { return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d); }
};

inline Rat operator+(Rat a, Rat b) { return Rat(a.n * b.d + b.n * a.d, a.d * b.d); }
inline Rat operator-(Rat a, Rat b) { return Rat(a.n * b.d - b.n * a.d, a.d * b.d); }
inline Rat operator-(Rat a) { return Rat(-a.n, a.d); }
inline Rat operator*(Rat a, Rat b) { return Rat(a.n * b.n, a.d * b.d); }
inline Rat operator/(Rat a, Rat b) { return Rat(a.n * b.d, a.d * b.n); }
inline bool operator==(Rat a, Rat b) { return a.n == b.n && a.d == b.d; }
inline bool operator!=(Rat a, Rat b) { return !(a == b); }
inline bool operator<(Rat a, Rat b) { return a.n * b.d < b.n * a.d; }
inline bool operator>(Rat a, Rat b) { return b < a; }
inline bool operator<=(Rat a, Rat b) { return !(b < a); }
inline bool operator>=(Rat a, Rat b) { return !(a < b); }

// ceil(a / b) for b > 0
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace fcm
