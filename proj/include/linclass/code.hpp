#pragma once

// The linear code data model: a multiset of points of PG(k-1,q) with
// multiplicities m(P), plus the invariants computed from it.  The multiset
// view quotients away column order and column scalings; generator matrices
// are only one serialization of it.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "linclass/errors.hpp"
#include "linclass/galois.hpp"
#include "linclass/geometry.hpp"

namespace linclass {

struct PointMult {
  uint32_t point;  // point index in Geometry(q, k)
  uint16_t mult;
  friend bool operator==(const PointMult&, const PointMult&) = default;
};

namespace detail {

// Rank over GF(q) of the representative vectors of the given points.
inline int rank_of_points(const Geometry& g, std::span<const PointMult> pts) {
  const Field& f = g.field();
  const int k = g.k();
  std::vector<std::vector<uint8_t>> pivot_row(k);  // pivot_row[c]: row with pivot 1 at column c
  int rank = 0;
  std::vector<uint8_t> v(k);
  for (const auto& pm : pts) {
    auto c = g.coords_of(pm.point);
    std::copy(c.begin(), c.end(), v.begin());
    for (int col = 0; col < k; ++col) {
      if (v[col] == 0) continue;
      if (pivot_row[col].empty()) {
        uint8_t piv = f.inv(v[col]);
        for (int i = col; i < k; ++i) v[i] = f.mul(v[i], piv);
        pivot_row[col] = v;
        ++rank;
        break;
      }
      uint8_t t = v[col];
      for (int i = col; i < k; ++i) v[i] = f.sub(v[i], f.mul(t, pivot_row[col][i]));
    }
    if (rank == k) return k;
  }
  return rank;
}

}  // namespace detail

class LinearCode {
 public:
  LinearCode(const Field& f, int k, std::vector<PointMult> mult) : field_(&f), k_(k) {
    if (k < 1) throw DimensionMismatch("code dimension must be >= 1");
    std::sort(mult.begin(), mult.end(),
              [](const PointMult& a, const PointMult& b) { return a.point < b.point; });
    for (const auto& pm : mult) {
      if (pm.mult == 0) continue;
      if (!mult_.empty() && mult_.back().point == pm.point)
        mult_.back().mult = static_cast<uint16_t>(mult_.back().mult + pm.mult);
      else
        mult_.push_back(pm);
    }
    const Geometry& g = geom();
    n_ = 0;
    min_mult_ = 0xffff;
    max_mult_ = 0;
    for (const auto& pm : mult_) {
      if (pm.point >= static_cast<uint32_t>(g.num_points()))
        throw DimensionMismatch("point index out of range");
      n_ += pm.mult;
      min_mult_ = std::min<int>(min_mult_, pm.mult);
      max_mult_ = std::max<int>(max_mult_, pm.mult);
    }
    if (detail::rank_of_points(g, mult_) != k_)
      throw RankDeficient("support does not span F_q^k");
  }

  const Field& field() const { return *field_; }
  const Geometry& geom() const { return geometry(*field_, k_); }
  int q() const { return field_->q(); }
  int k() const { return k_; }
  int n() const { return n_; }
  int min_col_mult() const { return min_mult_; }
  int max_col_mult() const { return max_mult_; }
  std::span<const PointMult> support() const { return mult_; }

  uint16_t mult_at(uint32_t point) const {
    auto it = std::lower_bound(mult_.begin(), mult_.end(), point,
                               [](const PointMult& a, uint32_t p) { return a.point < p; });
    return (it != mult_.end() && it->point == point) ? it->mult : 0;
  }

  friend bool operator==(const LinearCode& a, const LinearCode& b) {
    return a.q() == b.q() && a.k_ == b.k_ && a.mult_ == b.mult_;
  }

 private:
  const Field* field_;
  int k_;
  int n_;
  std::vector<PointMult> mult_;
  int min_mult_, max_mult_;
};

struct GeneratorMatrix {
  int q = 0;
  std::vector<std::vector<uint8_t>> rows;

  int k() const { return static_cast<int>(rows.size()); }
  int n() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
};

struct WeightEnumerator {
  std::vector<uint64_t> a;  // a[i] = number of codewords of weight i

  int n() const { return static_cast<int>(a.size()) - 1; }
  uint64_t total() const { return std::accumulate(a.begin(), a.end(), uint64_t{0}); }

  friend bool operator==(const WeightEnumerator&, const WeightEnumerator&) = default;
  friend bool operator<(const WeightEnumerator& x, const WeightEnumerator& y) {
    return std::lexicographical_compare(x.a.begin(), x.a.end(), y.a.begin(), y.a.end());
  }
};

inline LinearCode from_generator_matrix(const Field& f, const GeneratorMatrix& gm) {
  const int k = gm.k();
  if (k < 1) throw DimensionMismatch("generator matrix needs at least one row");
  const int n = gm.n();
  for (const auto& r : gm.rows)
    if (static_cast<int>(r.size()) != n) throw DimensionMismatch("ragged generator matrix");
  if (n < 1) throw DimensionMismatch("generator matrix needs at least one column");
  const Geometry& g = geometry(f, k);
  std::vector<uint16_t> mult(g.num_points(), 0);
  std::vector<uint8_t> col(k);
  for (int j = 0; j < n; ++j) {
    bool zero = true;
    for (int i = 0; i < k; ++i) {
      col[i] = gm.rows[i][j];
      if (col[i] >= f.q()) throw ParseError("matrix entry out of field range");
      if (col[i]) zero = false;
    }
    if (zero) throw ZeroColumn("generator matrix has a zero column");
    ++mult[g.point_of_coords(col)];
  }
  std::vector<PointMult> pm;
  for (uint32_t p = 0; p < mult.size(); ++p)
    if (mult[p]) pm.push_back({p, mult[p]});
  return LinearCode(f, k, std::move(pm));  // throws RankDeficient if rank < k
}

// Deterministic systematic form (I_k | R): a greedy independent basis of
// support points is mapped to the unit vectors and emitted first; the
// remaining columns follow in the transformed point order, each point
// repeated according to its multiplicity.
inline GeneratorMatrix to_systematic_generator_matrix(const LinearCode& code) {
  const Field& f = code.field();
  const Geometry& g = code.geom();
  const int k = code.k();

  // Greedy independent basis from the support, preferring unit points in
  // index order so that codes already containing the standard frame are fixed
  // points (serialize/parse round trips reproduce the same matrix).
  std::vector<int> scan;
  for (int i = 1; i <= k; ++i)
    if (code.mult_at(g.unit_point(i))) scan.push_back(g.unit_point(i));
  for (const auto& pm : code.support())
    if (std::find(scan.begin(), scan.end(), static_cast<int>(pm.point)) == scan.end())
      scan.push_back(static_cast<int>(pm.point));

  std::vector<int> basis;
  {
    std::vector<std::vector<uint8_t>> rows;  // reduced echelon rows with pivot map
    std::vector<int> pivot_col;
    for (int pt : scan) {
      auto c = g.coords_of(pt);
      std::vector<uint8_t> v(c.begin(), c.end());
      for (size_t r = 0; r < rows.size(); ++r) {
        uint8_t t = v[pivot_col[r]];
        if (!t) continue;
        for (int i = 0; i < k; ++i) v[i] = f.sub(v[i], f.mul(t, rows[r][i]));
      }
      int lead = 0;
      while (lead < k && v[lead] == 0) ++lead;
      if (lead == k) continue;
      uint8_t piv = f.inv(v[lead]);
      for (int i = 0; i < k; ++i) v[i] = f.mul(v[i], piv);
      rows.push_back(v);
      pivot_col.push_back(lead);
      basis.push_back(pt);
      if (static_cast<int>(rows.size()) == k) break;
    }
  }

  // T = B^{-1}, where B has the basis representatives as columns; computed by
  // Gauss-Jordan on (B | I).
  std::vector<std::vector<uint8_t>> aug(k, std::vector<uint8_t>(2 * k, 0));
  for (int j = 0; j < k; ++j) {
    auto c = g.coords_of(basis[j]);
    for (int i = 0; i < k; ++i) aug[i][j] = c[i];
    aug[j][k + j] = 1;
  }
  for (int col = 0; col < k; ++col) {
    int piv = col;
    while (aug[piv][col] == 0) ++piv;
    std::swap(aug[col], aug[piv]);
    uint8_t s = f.inv(aug[col][col]);
    for (int j = 0; j < 2 * k; ++j) aug[col][j] = f.mul(aug[col][j], s);
    for (int i = 0; i < k; ++i) {
      if (i == col || aug[i][col] == 0) continue;
      uint8_t t = aug[i][col];
      for (int j = 0; j < 2 * k; ++j) aug[i][j] = f.sub(aug[i][j], f.mul(t, aug[col][j]));
    }
  }

  auto apply = [&](std::span<const uint8_t> v) {
    std::vector<uint8_t> r(k, 0);
    for (int i = 0; i < k; ++i) {
      uint8_t s = 0;
      for (int j = 0; j < k; ++j) s = f.add(s, f.mul(aug[i][k + j], v[j]));
      r[i] = s;
    }
    return r;
  };

  // Transformed multiset.
  std::vector<PointMult> image;
  image.reserve(code.support().size());
  for (const auto& pm : code.support()) {
    auto v = apply(g.coords_of(pm.point));
    image.push_back({static_cast<uint32_t>(g.point_of_coords(v)), pm.mult});
  }
  std::sort(image.begin(), image.end(),
            [](const PointMult& a, const PointMult& b) { return a.point < b.point; });

  GeneratorMatrix gm;
  gm.q = f.q();
  gm.rows.assign(k, {});
  auto push_col = [&](std::span<const uint8_t> v) {
    for (int i = 0; i < k; ++i) gm.rows[i].push_back(v[i]);
  };
  std::vector<uint8_t> unit(k, 0);
  for (int i = 1; i <= k; ++i) {
    std::fill(unit.begin(), unit.end(), 0);
    unit[i - 1] = 1;
    push_col(unit);
  }
  for (auto& pm : image) {
    uint16_t reps = pm.mult;
    for (int i = 1; i <= k; ++i)
      if (pm.point == static_cast<uint32_t>(g.unit_point(i))) --reps;
    auto c = g.coords_of(pm.point);
    for (int t = 0; t < reps; ++t) push_col(c);
  }
  return gm;
}

// Weight enumerator via hyperplane section sums: a codeword class attached to
// hyperplane H has weight n - sum_{P <= H} m(P), and contributes q-1 words.
inline WeightEnumerator weight_enumerator(const LinearCode& code) {
  const Geometry& g = code.geom();
  WeightEnumerator we;
  we.a.assign(code.n() + 1, 0);
  we.a[0] = 1;
  const int nh = g.num_points();
  const uint64_t scale = static_cast<uint64_t>(code.q() - 1);
  for (int h = 0; h < nh; ++h) {
    int s = 0;
    for (const auto& pm : code.support())
      if (g.incident(pm.point, h)) s += pm.mult;
    we.a[code.n() - s] += scale;
  }
  return we;
}

// Geometric quotient by <point>: every support point other than the center is
// projected to PG(k-2,q) with multiplicities added up; occurrences of the
// center itself are dropped.  Length n - m(point), dimension k-1.
inline LinearCode residual_subcode(const LinearCode& code, uint32_t point) {
  if (code.k() < 2) throw DimensionMismatch("residual needs k >= 2");
  const Geometry& g = code.geom();
  const Geometry& sub = geometry(code.field(), code.k() - 1);
  std::vector<uint16_t> mult(sub.num_points(), 0);
  for (const auto& pm : code.support()) {
    if (pm.point == point) continue;
    int img = g.project_index(static_cast<int>(point), static_cast<int>(pm.point), sub);
    mult[img] = static_cast<uint16_t>(mult[img] + pm.mult);
  }
  std::vector<PointMult> pm;
  for (uint32_t p = 0; p < mult.size(); ++p)
    if (mult[p]) pm.push_back({p, mult[p]});
  try {
    return LinearCode(code.field(), code.k() - 1, std::move(pm));
  } catch (const RankDeficient&) {
    throw RankCollapse("projected multiset does not span");
  }
}

inline bool is_divisible(const WeightEnumerator& we, int delta) {
  if (delta < 1) throw InconsistentInput("divisor must be >= 1");
  for (int i = 1; i <= we.n(); ++i)
    if (we.a[i] != 0 && i % delta != 0) return false;
  return true;
}

inline bool is_divisible(const LinearCode& code, int delta) {
  return is_divisible(weight_enumerator(code), delta);
}

inline bool is_projective(const LinearCode& code) { return code.max_col_mult() == 1; }

namespace detail {

struct Mask128 {
  uint64_t lo = 0, hi = 0;
  void set(int i) { (i < 64 ? lo : hi) |= uint64_t{1} << (i & 63); }
  bool subset_of(const Mask128& o) const { return (lo & ~o.lo) == 0 && (hi & ~o.hi) == 0; }
  friend bool operator==(const Mask128&, const Mask128&) = default;
};

}  // namespace detail

// Number of minimal codewords: nonzero codewords whose support contains no
// other nonzero codeword's support, where codewords proportional to each
// other are not held against one another (for q = 2 this caveat is vacuous;
// the count is over codewords, so each minimal projective class contributes
// q-1 of them).
inline uint64_t minimal_codewords_count(const LinearCode& code, int k_cap = 24) {
  const int k = code.k(), n = code.n();
  if (k > k_cap) throw DimensionTooLarge("dimension above minimal-codeword cap");
  if (n > 128) throw ScaleExceeded("length above 128 in minimal-codeword scan");
  const Field& f = code.field();
  GeneratorMatrix gm = to_systematic_generator_matrix(code);

  struct Word {
    detail::Mask128 mask;
    int weight;
  };
  std::vector<Word> words;
  std::vector<uint8_t> acc(n, 0);

  // Enumerate one codeword per projective class: coefficient vectors whose
  // first nonzero entry is 1.
  auto emit = [&]() {
    Word w{{}, 0};
    for (int j = 0; j < n; ++j)
      if (acc[j]) {
        w.mask.set(j);
        ++w.weight;
      }
    words.push_back(w);
  };
  auto add_row = [&](int row, uint8_t coef, int sign) {
    uint8_t c = sign > 0 ? coef : f.neg(coef);
    if (!c) return;
    for (int j = 0; j < n; ++j) acc[j] = f.add(acc[j], f.mul(c, gm.rows[row][j]));
  };
  auto rec = [&](auto&& self, int row, bool lead) -> void {
    if (row == k) {
      if (lead) emit();
      return;
    }
    self(self, row + 1, lead);  // coefficient 0
    const int hi = lead ? f.q() : 2;
    for (int c = 1; c < hi; ++c) {
      add_row(row, static_cast<uint8_t>(c), +1);
      self(self, row + 1, true);
      add_row(row, static_cast<uint8_t>(c), -1);
    }
  };
  rec(rec, 0, false);

  std::sort(words.begin(), words.end(),
            [](const Word& a, const Word& b) { return a.weight < b.weight; });
  uint64_t minimal = 0;
  for (size_t i = 0; i < words.size(); ++i) {
    bool ok = true;
    for (size_t j = 0; j < words.size() && words[j].weight <= words[i].weight; ++j) {
      if (j == i) continue;
      if (words[j].mask.subset_of(words[i].mask)) {
        ok = false;
        break;
      }
    }
    if (ok) ++minimal;
  }
  return minimal * static_cast<uint64_t>(f.q() - 1);
}

}  // namespace linclass
