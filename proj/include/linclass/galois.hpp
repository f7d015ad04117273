#pragma once

// Exact arithmetic in GF(q) for q in {2,3,4,5,7,8,9}.
//
// Elements are small integer indices 0..q-1; index 0 is the zero element and
// index 1 the one element.  For prime q the index is the residue itself.  For
// q = p^e the index encodes the coefficient vector of a polynomial over F_p,
// least significant digit first, reduced modulo a fixed irreducible polynomial:
//
//   GF(4) = F_2[x]/(x^2 + x + 1)
//   GF(8) = F_2[x]/(x^3 + x + 1)
//   GF(9) = F_3[x]/(x^2 + 1)
//
// These moduli are frozen: archive files serialize element indices, so the
// encoding must be stable across builds.

#include <array>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "linclass/errors.hpp"

namespace linclass {

class Field {
 public:
  static constexpr int kMaxQ = 9;

  explicit Field(int q) : q_(q) {
    switch (q) {
      case 2: p_ = 2, e_ = 1; break;
      case 3: p_ = 3, e_ = 1; break;
      case 4: p_ = 2, e_ = 2, modulus_ = {1, 1, 1}; break;
      case 5: p_ = 5, e_ = 1; break;
      case 7: p_ = 7, e_ = 1; break;
      case 8: p_ = 2, e_ = 3, modulus_ = {1, 1, 0, 1}; break;
      case 9: p_ = 3, e_ = 2, modulus_ = {1, 0, 1}; break;
      default:
        throw NotPrimePower("GF(" + std::to_string(q) + ") unsupported: q must be a prime power in [2,9]");
    }
    build_tables();
    build_automorphisms();
    validate();
  }

  int q() const { return q_; }
  int p() const { return p_; }
  int e() const { return e_; }

  uint8_t add(uint8_t a, uint8_t b) const { return add_[a][b]; }
  uint8_t sub(uint8_t a, uint8_t b) const { return add_[a][neg_[b]]; }
  uint8_t mul(uint8_t a, uint8_t b) const { return mul_[a][b]; }
  uint8_t neg(uint8_t a) const { return neg_[a]; }
  uint8_t inv(uint8_t a) const { return inv_[a]; }  // inv(0) == 0 by convention

  // The e Frobenius powers x -> x^(p^i), i = 0..e-1, as permutations of the
  // element indices; automorphism(0) is the identity.
  int num_automorphisms() const { return e_; }
  const std::array<uint8_t, kMaxQ>& automorphism(int i) const { return frob_[i]; }

 private:
  int q_, p_, e_;
  std::vector<uint8_t> modulus_;  // c_0..c_e, monic
  std::array<std::array<uint8_t, kMaxQ>, kMaxQ> add_{};
  std::array<std::array<uint8_t, kMaxQ>, kMaxQ> mul_{};
  std::array<uint8_t, kMaxQ> neg_{};
  std::array<uint8_t, kMaxQ> inv_{};
  std::vector<std::array<uint8_t, kMaxQ>> frob_;

  std::array<uint8_t, 4> digits(int a) const {
    std::array<uint8_t, 4> d{};
    for (int i = 0; i < e_; ++i) {
      d[i] = static_cast<uint8_t>(a % p_);
      a /= p_;
    }
    return d;
  }

  int from_digits(const std::array<uint8_t, 4>& d) const {
    int a = 0;
    for (int i = e_ - 1; i >= 0; --i) a = a * p_ + d[i];
    return a;
  }

  void build_tables() {
    for (int a = 0; a < q_; ++a) {
      for (int b = 0; b < q_; ++b) {
        auto da = digits(a), db = digits(b);
        std::array<uint8_t, 4> sum{};
        for (int i = 0; i < e_; ++i) sum[i] = static_cast<uint8_t>((da[i] + db[i]) % p_);
        add_[a][b] = static_cast<uint8_t>(from_digits(sum));

        // Polynomial product, then reduce modulo the monic modulus.
        std::array<int, 8> prod{};
        for (int i = 0; i < e_; ++i)
          for (int j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        for (int d = 2 * e_ - 2; d >= e_; --d) {
          int c = prod[d];
          if (c == 0) continue;
          prod[d] = 0;
          for (int i = 0; i < e_; ++i)
            prod[d - e_ + i] = ((prod[d - e_ + i] - c * modulus_[i]) % p_ + p_) % p_;
        }
        std::array<uint8_t, 4> red{};
        for (int i = 0; i < e_; ++i) red[i] = static_cast<uint8_t>(prod[i]);
        mul_[a][b] = static_cast<uint8_t>(from_digits(red));
      }
    }
    for (int a = 0; a < q_; ++a) {
      for (int b = 0; b < q_; ++b) {
        if (add_[a][b] == 0) neg_[a] = static_cast<uint8_t>(b);
        if (a != 0 && mul_[a][b] == 1) inv_[a] = static_cast<uint8_t>(b);
      }
    }
    inv_[0] = 0;
  }

  void build_automorphisms() {
    frob_.resize(e_);
    for (int i = 0; i < e_; ++i) {
      // x -> x^(p^i)
      for (int a = 0; a < q_; ++a) {
        int v = a;
        int reps = 1;
        for (int t = 0; t < i; ++t) reps *= p_;
        int acc = a;
        for (int t = 1; t < reps; ++t) acc = mul_[acc][v];
        frob_[i][a] = static_cast<uint8_t>(a == 0 ? 0 : acc);
      }
    }
  }

  void validate() const {
    for (int a = 0; a < q_; ++a) {
      if (add_[a][0] != a || mul_[a][1] != a || mul_[a][0] != 0)
        throw Error("field table identity check failed");
      if (a != 0 && mul_[a][inv_[a]] != 1) throw Error("field inverse check failed");
      for (int b = 0; b < q_; ++b) {
        if (add_[a][b] != add_[b][a] || mul_[a][b] != mul_[b][a])
          throw Error("field commutativity check failed");
        for (int c = 0; c < q_; ++c) {
          if (add_[add_[a][b]][c] != add_[a][add_[b][c]]) throw Error("field associativity (+) failed");
          if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]]) throw Error("field associativity (*) failed");
          if (mul_[a][add_[b][c]] != add_[mul_[a][b]][mul_[a][c]])
            throw Error("field distributivity failed");
        }
      }
    }
    for (int i = 0; i < e_; ++i) {
      const auto& f = frob_[i];
      if (f[0] != 0 || f[1] != 1) throw Error("field automorphism fixes 0/1 failed");
      for (int a = 0; a < q_; ++a)
        for (int b = 0; b < q_; ++b) {
          if (f[add_[a][b]] != add_[f[a]][f[b]]) throw Error("field automorphism additivity failed");
          if (f[mul_[a][b]] != mul_[f[a]][f[b]]) throw Error("field automorphism multiplicativity failed");
        }
    }
  }
};

// Shared immutable field instances; safe to use across threads.
inline const Field& field(int q) {
  static std::mutex mu;
  static std::array<const Field*, Field::kMaxQ + 1> cache{};
  if (q < 2 || q > Field::kMaxQ)
    throw NotPrimePower("GF(" + std::to_string(q) + ") unsupported: q must be a prime power in [2,9]");
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[q]) cache[q] = new Field(q);  // leaked intentionally, process-lifetime
  return *cache[q];
}

}  // namespace linclass
