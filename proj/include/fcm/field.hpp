// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace fcm {

using Elt = std::uint32_t;

// F_{p^n}. Elements are indices whose base-p digits are the coordinates in
// the power basis of a root alpha of the modulus.
class Field {
 public:
  enum class Kind { Prime, Table, Poly };

  int p = 0;
  int n = 0;
  std::uint32_t Q = 0;
  std::vector<int> modulus;  // monic, low to high, size n+1
  bool standard = false;
  Kind kind = Kind::Prime;

  Elt add(Elt a, Elt b) const {
    if (kind == Kind::Prime) {
      Elt s = a + b;
      return s >= static_cast<Elt>(p) ? s - p : s;
    }
    if (p == 2) return a ^ b;
    if (!addt_.empty()) return addt_[static_cast<std::size_t>(a) * Q + b];
    return add_slow(a, b);
  }
  Elt neg(Elt a) const {
    if (kind == Kind::Prime) return a == 0 ? 0 : p - a;
    if (p == 2) return a;
    return neg_slow(a);
  }
  Elt sub(Elt a, Elt b) const { return add(a, neg(b)); }
  Elt mul(Elt a, Elt b) const {
    if (a == 0 || b == 0) return 0;
    if (kind == Kind::Prime)
      return static_cast<Elt>(static_cast<std::uint64_t>(a) * b % p);
    if (kind == Kind::Table) return exp_[log_[a] + log_[b]];
    return mul_slow(a, b);
  }
  Elt inv(Elt a) const;
  Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
  Elt pow(Elt a, std::uint64_t k) const;
  // a^(p^k), k any integer
  Elt frob(Elt a, long k) const;

  Elt one() const { return 1; }
  Elt from_int(long v) const;
  Elt gen() const { return gen_; }
  // discrete log with respect to gen(); a != 0
  std::uint32_t dlog(Elt a) const;
  Elt exp_gen(std::uint64_t k) const;

  std::vector<int> digits(Elt a) const;
  Elt from_digits(const std::vector<int>& d) const;
  bool in_prime_field(Elt a) const { return a < static_cast<Elt>(p); }

  // internal, used by the registry
  void build();

 private:
  Elt add_slow(Elt a, Elt b) const;
  Elt neg_slow(Elt a) const;
  Elt mul_slow(Elt a, Elt b) const;

  Elt gen_ = 1;
  std::vector<std::uint32_t> log_;
  std::vector<Elt> exp_;
  std::vector<std::uint16_t> addt_;
};

using FieldPtr = std::shared_ptr<const Field>;

// Standard field of order p^n: its modulus is the least primitive polynomial
// (top coefficients compared first) whose root is norm-compatible with the
// standard roots of every subfield.
FieldPtr std_field(int p, int n);
FieldPtr field_with_modulus(int p, const std::vector<int>& modulus);
FieldPtr prime_field(int p);

bool is_prime(long v);
std::vector<long> prime_factors(unsigned long v);
long ipow(long b, int k);

// Image of x under the standard embedding F_{p^d} -> F_{p^n}.
Elt embed(const FieldPtr& from, const FieldPtr& to, Elt x);
// Preimage in the subfield, if x lies in it.
bool restrict_to(const FieldPtr& big, const FieldPtr& sub, Elt x, Elt& out);
// Smallest standard field containing both.
FieldPtr compositum(const FieldPtr& a, const FieldPtr& b);

// x^{q^n} with q = p^a
inline Elt ff_frobenius(const Field& F, Elt x, long n, int a) {
  return F.frob(x, n * a);
}

}  // namespace fcm
