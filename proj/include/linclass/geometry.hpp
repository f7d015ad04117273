#pragma once

// Points and hyperplanes of PG(k-1, F_q).
//
// A point is the 1-dimensional span of a nonzero vector in F_q^k, represented
// by the unique vector whose first nonzero coordinate equals 1.  Vectors are
// packed into integer codes with c_1 as the most significant base-q digit, so
// the fixed point enumeration (lexicographic on coordinate vectors) coincides
// with increasing code order.  Hyperplanes are indexed by their normal vector
// through the same enumeration of the dual space, so |points| == |hyperplanes|
// and point i of PG(k-1,q) is incident with hyperplane j iff the coordinate
// dot product of representatives i and j vanishes.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "linclass/errors.hpp"
#include "linclass/galois.hpp"

namespace linclass {

class Geometry {
 public:
  static constexpr uint64_t kMaxSpace = uint64_t{1} << 22;

  Geometry(const Field& f, int k) : field_(&f), k_(k) {
    if (k < 1) throw DimensionMismatch("PG dimension k must be >= 1");
    uint64_t space = 1;
    for (int i = 0; i < k; ++i) space *= static_cast<uint64_t>(f.q());
    if (space > kMaxSpace) throw ScaleExceeded("PG(k-1,q) too large: q^k exceeds cap");
    space_ = static_cast<uint32_t>(space);
    build();
  }

  const Field& field() const { return *field_; }
  int q() const { return field_->q(); }
  int k() const { return k_; }
  uint32_t space_size() const { return space_; }
  int num_points() const { return static_cast<int>(codes_.size()); }

  uint32_t code_of(int point) const { return codes_[point]; }
  std::span<const uint8_t> coords_of(int point) const {
    return {coords_.data() + static_cast<size_t>(point) * k_, static_cast<size_t>(k_)};
  }

  // Index of the span of an arbitrary nonzero code (normalization included).
  int point_of_code(uint32_t code) const { return point_by_code_[code]; }

  int point_of_coords(std::span<const uint8_t> v) const {
    uint32_t c = 0;
    for (int i = 0; i < k_; ++i) c = c * field_->q() + v[i];
    if (c == 0) throw ZeroColumn("zero vector has no projective span");
    return point_by_code_[c];
  }

  uint32_t pack(std::span<const uint8_t> v) const {
    uint32_t c = 0;
    for (int i = 0; i < k_; ++i) c = c * field_->q() + v[i];
    return c;
  }

  void unpack(uint32_t code, uint8_t* out) const {
    for (int i = k_ - 1; i >= 0; --i) {
      out[i] = static_cast<uint8_t>(code % field_->q());
      code /= field_->q();
    }
  }

  // e_i for 1 <= i <= k.
  int unit_point(int i) const { return unit_points_[i - 1]; }

  // Componentwise sum / scalar multiple of packed vectors.
  uint32_t add_codes(uint32_t a, uint32_t b) const {
    if (q() == 2) return a ^ b;
    uint32_t r = 0, mult = 1;
    for (int i = 0; i < k_; ++i) {
      r += mult * field_->add(static_cast<uint8_t>(a % q()), static_cast<uint8_t>(b % q()));
      a /= q(), b /= q();
      mult *= q();
    }
    return r;
  }

  uint32_t scale_code(uint32_t a, uint8_t lambda) const {
    if (q() == 2) return a;
    uint32_t r = 0, mult = 1;
    for (int i = 0; i < k_; ++i) {
      r += mult * field_->mul(static_cast<uint8_t>(a % q()), lambda);
      a /= q();
      mult *= q();
    }
    return r;
  }

  uint32_t apply_automorphism_code(uint32_t a, int aut) const {
    const auto& f = field_->automorphism(aut);
    uint32_t r = 0, mult = 1;
    for (int i = 0; i < k_; ++i) {
      r += mult * f[a % q()];
      a /= q();
      mult *= q();
    }
    return r;
  }

  uint8_t dot(int point, int hyperplane) const {
    if (q() == 2) {
      return static_cast<uint8_t>(__builtin_parity(codes_[point] & codes_[hyperplane]));
    }
    auto a = coords_of(point), b = coords_of(hyperplane);
    uint8_t s = 0;
    for (int i = 0; i < k_; ++i) s = field_->add(s, field_->mul(a[i], b[i]));
    return s;
  }

  bool incident(int point, int hyperplane) const { return dot(point, hyperplane) == 0; }

  // Image of `pt` under the projection F_q^k -> F_q^k / <center>, expressed as
  // a point index of `sub` (= PG(k-2,q)); -1 when pt == center.
  int project_index(int center, int pt, const Geometry& sub) const {
    if (pt == center) return -1;
    if (sub.k() != k_ - 1 || sub.q() != q()) throw DimensionMismatch("projection target mismatch");
    auto c = coords_of(center), v = coords_of(pt);
    int lead = 0;
    while (c[lead] == 0) ++lead;  // c[lead] == 1 by normalization
    uint8_t t = v[lead];
    uint8_t img[32];
    int j = 0;
    for (int i = 0; i < k_; ++i) {
      if (i == lead) continue;
      img[j++] = field_->sub(v[i], field_->mul(t, c[i]));
    }
    uint32_t code = 0;
    for (int i = 0; i < k_ - 1; ++i) code = code * q() + img[i];
    if (code == 0) return -1;  // pt spans the center
    return sub.point_of_code(code);
  }

 private:
  const Field* field_;
  int k_;
  uint32_t space_;
  std::vector<uint32_t> codes_;
  std::vector<uint8_t> coords_;
  std::vector<int32_t> point_by_code_;
  std::vector<int> unit_points_;

  void build() {
    const int q = field_->q();
    point_by_code_.assign(space_, -1);
    std::vector<uint8_t> v(k_);
    for (uint32_t code = 1; code < space_; ++code) {
      unpack(code, v.data());
      int lead = 0;
      while (v[lead] == 0) ++lead;
      if (v[lead] != 1) continue;  // not the normalized representative
      int idx = static_cast<int>(codes_.size());
      codes_.push_back(code);
      coords_.insert(coords_.end(), v.begin(), v.end());
      point_by_code_[code] = idx;
      if (q > 2) {
        // All other representatives of the same span resolve to idx.
        for (int lam = 2; lam < q; ++lam) point_by_code_[scale_code(code, static_cast<uint8_t>(lam))] = idx;
      }
    }
    unit_points_.resize(k_);
    for (int i = 1; i <= k_; ++i) {
      uint32_t code = 1;
      for (int t = 0; t < k_ - i; ++t) code *= q;
      unit_points_[i - 1] = point_by_code_[code];
    }
  }
};

// Cached immutable geometries, keyed by (q, k).
inline const Geometry& geometry(const Field& f, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Geometry>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(f.q(), k);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Geometry>(f, k)).first;
  return *it->second;
}

}  // namespace linclass
