#pragma once

// MacWilliams transform and binomial power-moment checks, in exact rational
// arithmetic.  Feasibility arguments built on these identities break down
// under any rounding, so no floating point is used anywhere here.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "linclass/code.hpp"
#include "linclass/errors.hpp"

namespace linclass {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct DualWeightDistribution {
  std::vector<BigRat> b;  // b[j] = number of dual codewords of weight j

  int n() const { return static_cast<int>(b.size()) - 1; }
  bool integral() const {
    for (const auto& x : b)
      if (denominator(x) != 1) return false;
    return true;
  }
};

namespace detail {

inline BigInt binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  BigInt v = 1;
  for (int i = 0; i < r; ++i) {
    v *= (n - i);
    v /= (i + 1);
  }
  return v;
}

inline BigInt ipow(BigInt base, int e) {
  BigInt v = 1;
  while (e-- > 0) v *= base;
  return v;
}

// Krawtchouk polynomial K_j(i) for parameters (n, q).
inline BigInt krawtchouk(int j, int i, int n, int q) {
  BigInt sum = 0;
  for (int s = 0; s <= j; ++s) {
    BigInt term = ipow(q - 1, j - s) * binomial(i, s) * binomial(n - i, j - s);
    if (s & 1)
      sum -= term;
    else
      sum += term;
  }
  return sum;
}

}  // namespace detail

// Dual weight distribution: B_j = q^{-k} * sum_i A_i K_j(i).
inline DualWeightDistribution macwilliams_transform(const WeightEnumerator& we, int q, int k) {
  const int n = we.n();
  BigInt qk = detail::ipow(q, k);
  BigInt total = 0;
  for (uint64_t ai : we.a) total += ai;
  if (total != qk) throw InconsistentInput("sum of A_i does not equal q^k");
  DualWeightDistribution dual;
  dual.b.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    BigInt s = 0;
    for (int i = 0; i <= n; ++i) {
      if (we.a[i] == 0) continue;
      s += BigInt(we.a[i]) * detail::krawtchouk(j, i, n, q);
    }
    dual.b[j] = BigRat(s, qk);
  }
  return dual;
}

// The first `count` binomial power moments:
//   sum_i C(n-i, v) A_i  ==  q^{k-v} * sum_{j<=v} C(n-j, v-j) B_j,  v = 0..count-1.
// Returns true iff all hold exactly.
inline bool power_moments_hold(const WeightEnumerator& we, const DualWeightDistribution& dual,
                               int q, int k, int count = 4) {
  const int n = we.n();
  for (int v = 0; v < count; ++v) {
    BigRat lhs = 0;
    for (int i = 0; i <= n; ++i)
      if (we.a[i]) lhs += BigRat(BigInt(we.a[i]) * detail::binomial(n - i, v));
    BigRat rhs = 0;
    for (int j = 0; j <= v && j <= n; ++j) rhs += dual.b[j] * BigRat(detail::binomial(n - j, v - j));
    if (k - v >= 0)
      rhs *= BigRat(detail::ipow(q, k - v));
    else
      rhs /= BigRat(detail::ipow(q, v - k));
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace linclass
