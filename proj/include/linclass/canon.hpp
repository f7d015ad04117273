#pragma once

// Exact equivalence handling for linear codes under linear isometry
// (coordinate permutations, column scalings, field automorphisms), which on
// the multiset side is the stabilizer action of PGammaL(k,q).
//
// The canonical form is a minimal-image search: over every field automorphism
// and every ordered basis of support points (with all per-vector scalings,
// global scalars quotiented), relabel the multiset and keep the minimum of a
// composite comparison sequence.  The sequence interleaves the multiplicity
// vector, revealed subspace block by subspace block, with an equivariant
// refinement tag per level (the histogram of hyperplane section sums over the
// hyperplanes through the chosen flag).  Branches whose next segment exceeds
// the best known sequence are cut; ties are all explored, so the number of
// minimizing leaves equals the order of the stabilizer.
//
// Exploring every tie is intractable for highly symmetric codes, so pairs of
// minimizing leaves are turned into stabilizer elements: two labelings with
// the same image differ by an automorphism of the multiset.  At a node whose
// prefix is fixed pointwise by already-discovered automorphisms, sibling
// branches in one orbit have isomorphic subtrees; only an orbit
// representative is explored and its leaf count is credited to the skipped
// members.  This keeps both the image and the leaf count exact.
//
// Two codes receive the same image iff they are isometric: the image is a
// complete description of the relabeled multiset, and the winning labeling is
// determined by the class alone.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "linclass/code.hpp"
#include "linclass/errors.hpp"
#include "linclass/galois.hpp"
#include "linclass/geometry.hpp"

namespace linclass {

struct CanonicalSignature {
  int32_t q = 0, k = 0, n = 0;
  std::vector<uint8_t> image;  // canonical multiplicity vector over the point enumeration

  friend auto operator<=>(const CanonicalSignature&, const CanonicalSignature&) = default;
};

struct InvariantKey {
  int32_t q = 0, k = 0, n = 0;
  std::vector<uint64_t> we;
  std::vector<uint16_t> mults;                     // sorted column multiplicities
  std::vector<std::vector<uint64_t>> residual_wes;  // sorted, at min-multiplicity points

  friend auto operator<=>(const InvariantKey&, const InvariantKey&) = default;
};

namespace detail {

class CanonSearch {
 public:
  explicit CanonSearch(const LinearCode& code)
      : f_(code.field()), g_(code.geom()), q_(code.q()), k_(code.k()), n_(code.n()),
        npts_(g_.num_points()) {
    if (n_ > 255) throw ScaleExceeded("canonical form capped at n <= 255");
    if (npts_ > 65535) throw ScaleExceeded("canonical form capped at 65535 points");
    base_mult_.assign(npts_, 0);
    for (const auto& pm : code.support()) base_mult_[pm.point] = pm.mult;
    in_span_.assign(g_.space_size(), 0);
  }

  void run() {
    for (int aut = 0; aut < f_.num_automorphisms(); ++aut) {
      prepare(aut);
      span_vecs_.assign(1, 0);
      in_span_[0] = 1;
      hstack_.clear();
      hstack_.reserve(k_ + 1);  // references into hstack_ stay valid during dfs
      hstack_.emplace_back(npts_);
      auto& all = hstack_.back();
      for (int h = 0; h < npts_; ++h) all[h] = h;
      dfs(1, 0);
      in_span_[0] = 0;
      hstack_.clear();
    }
  }

  std::vector<uint8_t> image() const {
    std::vector<uint8_t> img;
    img.reserve(npts_);
    size_t pos = 0;
    uint32_t block = 1;
    for (int t = 1; t <= k_; ++t) {
      for (uint32_t m = 0; m < block; ++m) img.push_back(static_cast<uint8_t>(best_[pos + m]));
      pos += block;
      if (t < k_) pos += n_ + 1;  // skip the refinement tag
      block *= q_;
    }
    return img;
  }

  uint64_t leaf_count() const { return leaves_; }

 private:
  const Field& f_;
  const Geometry& g_;
  int q_, k_, n_, npts_;
  std::vector<uint16_t> base_mult_;

  // state for the current automorphism
  std::vector<uint16_t> mult_;     // transformed multiplicities by point index
  std::vector<uint16_t> hsum_;     // hyperplane section sums
  std::vector<uint32_t> supp_;     // support point codes (normalized representatives)
  std::vector<uint32_t> span_vecs_;  // all vectors of the chosen flag, in code layout
  std::vector<uint8_t> in_span_;
  std::vector<std::vector<int32_t>> hstack_;  // hyperplanes through the chosen flag, per level

  std::vector<int32_t> best_;
  bool have_best_ = false;
  uint64_t leaves_ = 0;
  uint64_t epoch_ = 0;  // bumped on every strict improvement of best_

  // Stabilizer elements discovered from pairs of minimizing leaves, as point
  // permutations (q = 2 only, where the field automorphism is trivial and
  // branches carry no scalings).
  static constexpr size_t kMaxGens = 64;
  std::vector<std::vector<int32_t>> gens_;
  std::vector<int32_t> ref_fwd_;  // labeling of the reference minimizing leaf
  uint64_t ref_epoch_ = ~uint64_t{0};
  std::vector<int32_t> chosen_points_;

  void prepare(int aut) {
    mult_.assign(npts_, 0);
    supp_.clear();
    std::vector<int> supp_idx;
    for (int p = 0; p < npts_; ++p) {
      if (!base_mult_[p]) continue;
      int ip = g_.point_of_code(g_.apply_automorphism_code(g_.code_of(p), aut));
      mult_[ip] = base_mult_[p];
    }
    for (int p = 0; p < npts_; ++p)
      if (mult_[p]) {
        supp_.push_back(g_.code_of(p));
        supp_idx.push_back(p);
      }
    hsum_.assign(npts_, 0);
    for (int h = 0; h < npts_; ++h) {
      int s = 0;
      for (int p : supp_idx)
        if (g_.incident(p, h)) s += mult_[p];
      hsum_[h] = static_cast<uint16_t>(s);
    }
  }

  uint8_t dot_code(uint32_t vcode, int hyp) const {
    if (q_ == 2) return static_cast<uint8_t>(__builtin_parity(vcode & g_.code_of(hyp)));
    uint8_t vc[32];
    g_.unpack(vcode, vc);
    auto hc = g_.coords_of(hyp);
    uint8_t s = 0;
    for (int i = 0; i < k_; ++i) s = f_.add(s, f_.mul(vc[i], hc[i]));
    return s;
  }

  struct Branch {
    uint32_t vcode;
    std::vector<int32_t> key;
  };

  // Compares `key` against best_ starting at `pos`.  Returns false when the
  // branch is dominated; otherwise best_ is extended/overwritten as needed.
  bool admit(const std::vector<int32_t>& key, size_t pos) {
    for (size_t i = 0; i < key.size(); ++i) {
      if (pos + i == best_.size()) {
        best_.insert(best_.end(), key.begin() + i, key.end());
        return true;
      }
      if (key[i] < best_[pos + i]) {
        best_.resize(pos + i);
        best_.insert(best_.end(), key.begin() + i, key.end());
        leaves_ = 0;
        ++epoch_;
        return true;
      }
      if (key[i] > best_[pos + i]) return false;
    }
    return true;
  }

  // Labeling of the completed flag: label[point] = its index in the new
  // coordinates.  `last` extends the stored span by the final basis vector.
  std::vector<int32_t> leaf_labels(uint32_t last) const {
    std::vector<int32_t> fwd(npts_, -1);
    const size_t sz = span_vecs_.size();
    for (size_t m = 1; m < sz; ++m)
      fwd[g_.point_of_code(span_vecs_[m])] = static_cast<int32_t>(m);
    for (size_t m = 0; m < sz; ++m)
      fwd[g_.point_of_code(g_.add_codes(last, span_vecs_[m]))] = static_cast<int32_t>(sz + m);
    return fwd;
  }

  // Two minimizing leaves with labelings A (reference) and B yield the
  // stabilizer element p -> B^{-1}(A(p)).
  void record_automorphism(uint32_t last) {
    if (q_ != 2) return;
    std::vector<int32_t> fwd = leaf_labels(last);
    if (ref_epoch_ != epoch_) {
      ref_fwd_ = std::move(fwd);
      ref_epoch_ = epoch_;
      return;
    }
    if (gens_.size() >= kMaxGens) return;
    std::vector<int32_t> inv(2 * span_vecs_.size(), -1);
    for (int p = 0; p < npts_; ++p)
      if (fwd[p] >= 0) inv[fwd[p]] = p;
    std::vector<int32_t> phi(npts_);
    for (int p = 0; p < npts_; ++p) phi[p] = ref_fwd_[p] >= 0 ? inv[ref_fwd_[p]] : p;
    for (int p = 0; p < npts_; ++p)
      if (mult_[phi[p]] != mult_[p]) throw Error("internal: stabilizer candidate rejected");
    gens_.push_back(std::move(phi));
  }

  struct Explored {
    uint32_t point;
    size_t branch;
    uint64_t delta, epoch;
  };

  // Orbit of the branch point under the discovered stabilizer elements that
  // fix the chosen prefix pointwise; returns the index of an explored sibling
  // in the same orbit, or -1.
  int orbit_match(uint32_t start, const std::vector<Explored>& explored) const {
    std::vector<const std::vector<int32_t>*> apply;
    for (const auto& gen : gens_) {
      bool fix = true;
      for (int32_t cp : chosen_points_) fix = fix && gen[cp] == cp;
      if (fix) apply.push_back(&gen);
    }
    if (apply.empty()) return -1;
    std::vector<uint32_t> seen{start};
    for (size_t i = 0; i < seen.size(); ++i) {
      for (const auto* gen : apply) {
        uint32_t img = static_cast<uint32_t>((*gen)[seen[i]]);
        if (std::find(seen.begin(), seen.end(), img) != seen.end()) continue;
        for (size_t e = 0; e < explored.size(); ++e)
          if (explored[e].point == img) return static_cast<int>(e);
        seen.push_back(img);
      }
    }
    return -1;
  }

  void dfs(int t, size_t pos) {
    const auto& hprev = hstack_.back();
    const size_t span_size = span_vecs_.size();  // q^(t-1)
    std::vector<Branch> branches;
    for (uint32_t rep : supp_) {
      if (in_span_[rep]) continue;
      const int max_scale = (t == 1 || q_ == 2) ? 1 : q_ - 1;
      for (int lam = 1; lam <= max_scale; ++lam) {
        Branch br;
        br.vcode = g_.scale_code(rep, static_cast<uint8_t>(lam));
        br.key.reserve(span_size + (t < k_ ? n_ + 1 : 0));
        for (size_t m = 0; m < span_size; ++m) {
          uint32_t c = g_.add_codes(br.vcode, span_vecs_[m]);
          br.key.push_back(mult_[g_.point_of_code(c)]);
        }
        if (t < k_) {
          int32_t hist[256] = {0};
          for (int32_t h : hprev)
            if (dot_code(br.vcode, h) == 0) ++hist[hsum_[h]];
          br.key.insert(br.key.end(), hist, hist + n_ + 1);
        }
        branches.push_back(std::move(br));
      }
    }
    std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) {
      if (a.key != b.key) return a.key < b.key;
      return a.vcode < b.vcode;
    });

    std::vector<Explored> explored;
    for (size_t bi = 0; bi < branches.size(); ++bi) {
      const Branch& br = branches[bi];
      if (have_best_ && !admit(br.key, pos)) break;  // sorted: later branches only larger
      if (!have_best_) best_.insert(best_.end(), br.key.begin(), br.key.end());

      const uint32_t bpoint = static_cast<uint32_t>(g_.point_of_code(br.vcode));
      if (q_ == 2 && !gens_.empty() && !explored.empty()) {
        int match = orbit_match(bpoint, explored);
        if (match >= 0) {
          if (branches[explored[match].branch].key != br.key)
            throw Error("internal: orbit members with unequal keys");
          if (explored[match].epoch == epoch_) leaves_ += explored[match].delta;
          continue;
        }
      }

      const uint64_t leaves_before = leaves_, epoch_before = epoch_;
      if (t == k_) {
        have_best_ = true;
        record_automorphism(br.vcode);
        ++leaves_;
      } else {
        const size_t old_size = span_vecs_.size();
        for (int d = 1; d < q_; ++d) {
          uint32_t dv = g_.scale_code(br.vcode, static_cast<uint8_t>(d));
          for (size_t m = 0; m < old_size; ++m) {
            uint32_t c = g_.add_codes(dv, span_vecs_[m]);
            span_vecs_.push_back(c);
            in_span_[c] = 1;
          }
        }
        hstack_.emplace_back();
        auto& hnext = hstack_.back();
        for (int32_t h : hprev)
          if (dot_code(br.vcode, h) == 0) hnext.push_back(h);
        chosen_points_.push_back(static_cast<int32_t>(bpoint));

        dfs(t + 1, pos + br.key.size());

        chosen_points_.pop_back();
        hstack_.pop_back();
        for (size_t m = old_size; m < span_vecs_.size(); ++m) in_span_[span_vecs_[m]] = 0;
        span_vecs_.resize(old_size);
      }
      const uint64_t delta = epoch_ == epoch_before ? leaves_ - leaves_before : leaves_;
      explored.push_back({bpoint, bi, delta, epoch_});
    }
  }
};

}  // namespace detail

inline CanonicalSignature canonical_form(const LinearCode& code) {
  detail::CanonSearch search(code);
  search.run();
  CanonicalSignature sig;
  sig.q = code.q();
  sig.k = code.k();
  sig.n = code.n();
  sig.image = search.image();
  return sig;
}

// Order of the group of linear isometries stabilizing the code, reported as
// the stabilizer of the point multiset under PGammaL(k,q): scalar factors are
// quotiented and coordinate permutations among equal columns are not counted.
// For projective codes over F_2 this equals the permutation automorphism
// group order.
inline uint64_t automorphism_order(const LinearCode& code) {
  detail::CanonSearch search(code);
  search.run();
  return search.leaf_count();
}

// Reconstructs the canonically labeled representative from a signature.
inline LinearCode code_from_signature(const CanonicalSignature& sig) {
  std::vector<PointMult> pm;
  for (uint32_t i = 0; i < sig.image.size(); ++i)
    if (sig.image[i]) pm.push_back({i, sig.image[i]});
  return LinearCode(field(sig.q), sig.k, std::move(pm));
}

inline InvariantKey invariant_key(const LinearCode& code) {
  InvariantKey key;
  key.q = code.q();
  key.k = code.k();
  key.n = code.n();
  key.we = weight_enumerator(code).a;
  for (const auto& pm : code.support()) key.mults.push_back(pm.mult);
  std::sort(key.mults.begin(), key.mults.end());
  if (code.k() >= 2) {
    for (const auto& pm : code.support())
      if (pm.mult == code.min_col_mult())
        key.residual_wes.push_back(weight_enumerator(residual_subcode(code, pm.point)).a);
    std::sort(key.residual_wes.begin(), key.residual_wes.end());
  }
  return key;
}

// Bucket by cheap invariants, canonicalize within buckets, and emit one
// canonically labeled representative per isometry class, sorted by signature.
inline std::vector<LinearCode> dedupe(const std::vector<LinearCode>& codes) {
  std::map<InvariantKey, std::map<CanonicalSignature, LinearCode>> buckets;
  for (const auto& c : codes) {
    auto key = invariant_key(c);
    auto& bucket = buckets[key];
    auto sig = canonical_form(c);
    if (!bucket.contains(sig)) bucket.emplace(sig, code_from_signature(sig));
  }
  std::map<CanonicalSignature, LinearCode> merged;
  for (auto& [key, bucket] : buckets)
    for (auto& [sig, code] : bucket) merged.emplace(sig, std::move(code));
  std::vector<LinearCode> out;
  out.reserve(merged.size());
  for (auto& [sig, code] : merged) out.push_back(std::move(code));
  return out;
}

}  // namespace linclass
