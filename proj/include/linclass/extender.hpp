#pragma once

// Lengthening of an [n,k]_q code to [n+r,k+1]_q codes with prescribed weights.
//
// The candidate children of a parent multiset are the integer points of a
// polyhedron: one variable x_P per point of PG(k,q), fiber equations tying
// each parent point u to its q lifts (u|lambda) plus the forced x_{e_{k+1}} =
// r, unit lower bounds at a basis of the parent support, and for every
// hyperplane H of PG(k,q) the membership of sum_{P <= H} x_P in the target
// set {(n+r) - w : w in the weight envelope}.
//
// Hyperplanes split into two kinds.  Those whose normal lives in the parent
// space contain whole fibers; their sums are constants determined by the
// parent and are checked once at build time (they restate that the parent's
// weights lie in the envelope).  The remaining q^k "oblique" hyperplanes pick
// exactly one lift per fiber and drive the search: the enumerator assigns
// fibers depth first and prunes on running interval bounds per oblique sum.
//
// Children are filtered by canonical lengthening (minimum column multiplicity
// must equal r) and lexicographical lengthening (the parent's weight
// enumerator must be lexicographically minimal among the residual enumerators
// at multiplicity-r points).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "linclass/canon.hpp"
#include "linclass/code.hpp"
#include "linclass/errors.hpp"
#include "linclass/geometry.hpp"

namespace linclass {

struct WeightSpec {
  std::vector<int> weights;  // sorted, distinct, >= 1
  int delta = 1, a = 1, b = 1;

  static WeightSpec make(std::vector<int> w) {
    WeightSpec ws;
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    if (w.empty() || w.front() < 1) throw InconsistentInput("weight set must be nonempty and positive");
    ws.weights = std::move(w);
    ws.delta = 0;
    for (int x : ws.weights) ws.delta = std::gcd(ws.delta, x);
    ws.a = ws.weights.front() / ws.delta;
    ws.b = ws.weights.back() / ws.delta;
    return ws;
  }

  bool contains(int w) const { return std::binary_search(weights.begin(), weights.end(), w); }
  bool envelope_contains(int w) const { return w % delta == 0 && w / delta >= a && w / delta <= b; }
  bool full_envelope() const { return static_cast<int>(weights.size()) == b - a + 1; }
};

struct ExtensionProblem {
  const LinearCode* parent = nullptr;
  int r = 1;
  WeightSpec weights;
  bool canonical = true;  // canonical lengthening: unit bounds raised to r, min-mult filter
  bool lex = true;        // lexicographical lengthening filter
  int max_mult = 0;       // optional cap on every x_P (0 = uncapped)
  uint64_t budget_nodes = 10'000'000;
};

struct ExtensionSolution {
  std::vector<PointMult> x;  // nonzero multiplicities over PG(k,q)

  friend bool operator<(const ExtensionSolution& a, const ExtensionSolution& b) {
    return std::lexicographical_compare(
        a.x.begin(), a.x.end(), b.x.begin(), b.x.end(), [](const PointMult& l, const PointMult& r) {
          return l.point != r.point ? l.point < r.point : l.mult < r.mult;
        });
  }
};

struct ConstraintSystem {
  const LinearCode* parent = nullptr;
  int r = 0;
  int k_child = 0, n_child = 0;
  WeightSpec weights;
  int max_mult = 0;

  int min_target = 0, max_target = 0;
  std::vector<char> target_ok;  // indexed by section sum 0..n_child

  struct Fiber {
    uint32_t parent_point;             // index in PG(k-1,q)
    int c;                             // fiber sum
    std::vector<uint32_t> points;      // child point of (u|lambda), lambda in field order
    std::vector<int> lower, upper;     // per-slot bounds
    std::vector<int> max_contrib, min_contrib;  // per-slot, given the sibling bounds
  };
  std::vector<Fiber> fibers;  // active fibers (c > 0), DFS order
  uint32_t unit_point = 0;    // e_{k+1} in PG(k,q); x there is fixed to r

  int num_vertical = 0;                   // constraints resolved at build time
  std::vector<std::vector<uint8_t>> select;  // oblique h -> per-fiber selected slot
  bool infeasible = false;                // detected while building
};

inline ConstraintSystem build_constraints(const ExtensionProblem& prob) {
  const LinearCode& parent = *prob.parent;
  const Field& f = parent.field();
  const Geometry& gpar = parent.geom();
  const Geometry& gch = geometry(f, parent.k() + 1);
  const int q = f.q(), k = parent.k(), r = prob.r, n = parent.n();
  if (r < 1) throw InconsistentInput("extension multiplicity r must be >= 1");

  ConstraintSystem cs;
  cs.parent = &parent;
  cs.r = r;
  cs.k_child = k + 1;
  cs.n_child = n + r;
  cs.weights = prob.weights;
  cs.max_mult = prob.max_mult;
  cs.unit_point = static_cast<uint32_t>(gch.unit_point(k + 1));

  // Target set: section sums realizing envelope weights.
  cs.target_ok.assign(cs.n_child + 1, 0);
  cs.min_target = cs.n_child + 1;
  cs.max_target = -1;
  for (int i = prob.weights.a; i <= prob.weights.b; ++i) {
    int s = cs.n_child - i * prob.weights.delta;
    if (s < 0) continue;
    cs.target_ok[s] = 1;
    cs.min_target = std::min(cs.min_target, s);
    cs.max_target = std::max(cs.max_target, s);
  }
  if (cs.max_target < 0) {
    cs.infeasible = true;  // every admissible weight exceeds the child length
    return cs;
  }

  // Vertical constraints: for a parent-space normal h, the child sum is
  // s_parent(h) + r, i.e. the parent weight n - s_parent(h) must lie in the
  // envelope.
  cs.num_vertical = gpar.num_points();
  for (int h = 0; h < gpar.num_points(); ++h) {
    int s = 0;
    for (const auto& pm : parent.support())
      if (gpar.incident(pm.point, h)) s += pm.mult;
    if (!prob.weights.envelope_contains(n - s))
      throw EnvelopeViolation("parent weight outside the envelope");
  }

  // Unit lower bounds at a greedy basis of the parent support (a relabeling
  // of the systematic form's unit columns).
  std::vector<uint32_t> basis;
  {
    std::vector<std::vector<uint8_t>> pivot_row(k);
    std::vector<uint8_t> v(k);
    for (const auto& pm : parent.support()) {
      auto c = gpar.coords_of(pm.point);
      std::copy(c.begin(), c.end(), v.begin());
      for (int col = 0; col < k; ++col) {
        if (v[col] == 0) continue;
        if (pivot_row[col].empty()) {
          uint8_t piv = f.inv(v[col]);
          for (int i = col; i < k; ++i) v[i] = f.mul(v[i], piv);
          pivot_row[col] = v;
          basis.push_back(pm.point);
          break;
        }
        uint8_t t = v[col];
        for (int i = col; i < k; ++i) v[i] = f.sub(v[i], f.mul(t, pivot_row[col][i]));
      }
      if (static_cast<int>(basis.size()) == k) break;
    }
  }
  const int unit_lower = prob.canonical ? r : 1;

  // Fibers over the parent support, largest first.
  for (const auto& pm : parent.support()) {
    ConstraintSystem::Fiber fib;
    fib.parent_point = pm.point;
    fib.c = pm.mult;
    uint32_t base = gpar.code_of(pm.point) * q;
    for (int lam = 0; lam < q; ++lam) {
      fib.points.push_back(static_cast<uint32_t>(gch.point_of_code(base + lam)));
      fib.lower.push_back(0);
      fib.upper.push_back(prob.max_mult ? std::min(fib.c, prob.max_mult) : fib.c);
    }
    if (std::find(basis.begin(), basis.end(), pm.point) != basis.end()) fib.lower[0] = unit_lower;
    cs.fibers.push_back(std::move(fib));
  }
  std::stable_sort(cs.fibers.begin(), cs.fibers.end(),
                   [](const auto& a, const auto& b) { return a.c > b.c; });

  for (auto& fib : cs.fibers) {
    int lower_sum = std::accumulate(fib.lower.begin(), fib.lower.end(), 0);
    int upper_sum = std::accumulate(fib.upper.begin(), fib.upper.end(), 0);
    if (lower_sum > fib.c || upper_sum < fib.c) cs.infeasible = true;
    for (int s = 0; s < q; ++s) {
      fib.max_contrib.push_back(std::min(fib.upper[s], fib.c - (lower_sum - fib.lower[s])));
      fib.min_contrib.push_back(std::max(fib.lower[s], fib.c - (upper_sum - fib.upper[s])));
    }
  }
  if (prob.max_mult && r > prob.max_mult) cs.infeasible = true;

  // Oblique constraints: one per vector h in F_q^k; the hyperplane with
  // normal (h|1) meets the fiber over u exactly in (u | -u.h).
  uint32_t hcount = 1;
  for (int i = 0; i < k; ++i) hcount *= q;
  cs.select.resize(hcount);
  std::vector<uint8_t> hv(k);
  for (uint32_t h = 0; h < hcount; ++h) {
    uint32_t code = h;
    for (int i = k - 1; i >= 0; --i) {
      hv[i] = static_cast<uint8_t>(code % q);
      code /= q;
    }
    auto& sel = cs.select[h];
    sel.resize(cs.fibers.size());
    for (size_t fi = 0; fi < cs.fibers.size(); ++fi) {
      auto u = gpar.coords_of(cs.fibers[fi].parent_point);
      uint8_t d = 0;
      for (int i = 0; i < k; ++i) d = f.add(d, f.mul(u[i], hv[i]));
      sel[fi] = f.neg(d);
    }
  }
  return cs;
}

struct EnumerationResult {
  std::vector<ExtensionSolution> solutions;
  bool complete = true;
  uint64_t nodes = 0;
};

namespace detail {

class FiberDfs {
 public:
  FiberDfs(const ConstraintSystem& cs, uint64_t budget) : cs_(cs), budget_(budget) {
    const size_t no = cs.select.size();
    sum_.assign(no, 0);
    rem_max_.assign(no, 0);
    rem_min_.assign(no, 0);
    for (size_t h = 0; h < no; ++h)
      for (size_t fi = 0; fi < cs.fibers.size(); ++fi) {
        rem_max_[h] += cs.fibers[fi].max_contrib[cs.select[h][fi]];
        rem_min_[h] += cs.fibers[fi].min_contrib[cs.select[h][fi]];
      }
    assign_.resize(cs.fibers.size());
    // nearest admissible target at/above and at/below s; prunes hard when the
    // target set has divisibility gaps
    const int top = cs.n_child + 1;
    next_target_.assign(top + 1, top + 1);
    for (int s = cs.n_child; s >= 0; --s)
      next_target_[s] = cs.target_ok[s] ? s : next_target_[s + 1];
    prev_target_.assign(top + 1, -1);
    if (!cs.target_ok.empty() && cs.target_ok[0]) prev_target_[0] = 0;
    for (int s = 1; s <= top; ++s)
      prev_target_[s] = (s <= cs.n_child && cs.target_ok[s]) ? s : prev_target_[s - 1];

    // every child point off the new unit lies on exactly q^(k-1) oblique
    // hyperplanes, so the oblique sums total q^(k-1) * n whatever the
    // assignment; the per-constraint target brackets must sum around that
    int n_parent = cs.n_child - cs.r;
    oblique_total_ = static_cast<int64_t>(no) / (cs.parent ? cs.parent->q() : 1) * n_parent;
    lo_t_.assign(no, 0);
    hi_t_.assign(no, 0);
    sum_lo_t_ = sum_hi_t_ = 0;
    for (size_t h = 0; h < no; ++h) {
      lo_t_[h] = next_target_[rem_min_[h]];
      hi_t_[h] = prev_target_[std::min<int>(rem_max_[h], cs.n_child)];
      sum_lo_t_ += lo_t_[h];
      sum_hi_t_ += hi_t_[h];
    }
  }

  EnumerationResult run() {
    if (!cs_.infeasible) rec(0);
    res_.complete = !aborted_;
    res_.nodes = nodes_;
    std::sort(res_.solutions.begin(), res_.solutions.end());
    return std::move(res_);
  }

 private:
  const ConstraintSystem& cs_;
  uint64_t budget_, nodes_ = 0;
  bool aborted_ = false;
  std::vector<int32_t> sum_, rem_max_, rem_min_;
  std::vector<int32_t> next_target_, prev_target_;
  std::vector<int32_t> lo_t_, hi_t_;
  int64_t sum_lo_t_ = 0, sum_hi_t_ = 0, oblique_total_ = 0;
  std::vector<std::vector<int>> assign_;
  EnumerationResult res_;

  void emit() {
    ExtensionSolution sol;
    for (size_t fi = 0; fi < cs_.fibers.size(); ++fi)
      for (int s = 0; s < static_cast<int>(cs_.fibers[fi].points.size()); ++s)
        if (assign_[fi][s])
          sol.x.push_back({cs_.fibers[fi].points[s], static_cast<uint16_t>(assign_[fi][s])});
    sol.x.push_back({cs_.unit_point, static_cast<uint16_t>(cs_.r)});
    std::sort(sol.x.begin(), sol.x.end(),
              [](const PointMult& a, const PointMult& b) { return a.point < b.point; });
    res_.solutions.push_back(std::move(sol));
  }

  void refresh_targets(size_t h) {
    sum_lo_t_ -= lo_t_[h];
    sum_hi_t_ -= hi_t_[h];
    lo_t_[h] = next_target_[sum_[h] + rem_min_[h]];
    hi_t_[h] = prev_target_[std::min<int>(sum_[h] + rem_max_[h], cs_.n_child)];
    sum_lo_t_ += lo_t_[h];
    sum_hi_t_ += hi_t_[h];
  }

  // Applies fiber fi's assignment to all oblique sums; returns the number of
  // constraints updated before a prune fired (all, when admissible).  A
  // branch survives only while every oblique interval
  // [sum + remMin, sum + remMax] contains an admissible target and the
  // per-constraint target brackets can still add up to the fixed total.
  size_t apply(size_t fi, const std::vector<int>& x, bool& ok) {
    const auto& fib = cs_.fibers[fi];
    ok = true;
    for (size_t h = 0; h < cs_.select.size(); ++h) {
      int s = cs_.select[h][fi];
      sum_[h] += x[s];
      rem_max_[h] -= fib.max_contrib[s];
      rem_min_[h] -= fib.min_contrib[s];
      refresh_targets(h);
      if (lo_t_[h] > sum_[h] + rem_max_[h]) {
        ok = false;
        return h + 1;
      }
    }
    if (sum_lo_t_ > oblique_total_ || sum_hi_t_ < oblique_total_) ok = false;
    return cs_.select.size();
  }

  void undo(size_t fi, const std::vector<int>& x, size_t upto) {
    const auto& fib = cs_.fibers[fi];
    for (size_t h = 0; h < upto; ++h) {
      int s = cs_.select[h][fi];
      sum_[h] -= x[s];
      rem_max_[h] += fib.max_contrib[s];
      rem_min_[h] += fib.min_contrib[s];
      refresh_targets(h);
    }
  }

  void rec(size_t fi) {
    if (aborted_) return;
    if (fi == cs_.fibers.size()) {
      for (size_t h = 0; h < cs_.select.size(); ++h)
        if (!cs_.target_ok[sum_[h]]) return;
      emit();
      return;
    }
    const auto& fib = cs_.fibers[fi];
    std::vector<int> x(fib.points.size(), 0);
    compose(fi, 0, fib.c, x);
  }

  // Enumerates slot values lexicographically: x[slot] from low to high.
  void compose(size_t fi, size_t slot, int remaining, std::vector<int>& x) {
    if (aborted_) return;
    const auto& fib = cs_.fibers[fi];
    const size_t q = fib.points.size();
    if (slot + 1 == q) {
      if (remaining < fib.lower[slot] || remaining > fib.upper[slot]) return;
      x[slot] = remaining;
      if (++nodes_ > budget_) {
        aborted_ = true;
        return;
      }
      bool ok;
      size_t upto = apply(fi, x, ok);
      if (ok) {
        assign_[fi] = x;
        rec(fi + 1);
      }
      undo(fi, x, upto);
      x[slot] = 0;
      return;
    }
    int tail_lower = 0, tail_upper = 0;
    for (size_t s = slot + 1; s < q; ++s) {
      tail_lower += fib.lower[s];
      tail_upper += fib.upper[s];
    }
    int lo = std::max(fib.lower[slot], remaining - tail_upper);
    int hi = std::min(fib.upper[slot], remaining - tail_lower);
    for (int v = lo; v <= hi; ++v) {
      x[slot] = v;
      compose(fi, slot + 1, remaining - v, x);
    }
    x[slot] = 0;
  }
};

}  // namespace detail

inline EnumerationResult enumerate_solutions(const ConstraintSystem& cs, uint64_t budget_nodes) {
  return detail::FiberDfs(cs, budget_nodes).run();
}

// Turns solutions into [n+r,k+1]_q codes and drops children with a weight
// inside the envelope but outside W.
inline std::vector<LinearCode> solutions_to_codes(const LinearCode& parent,
                                                  const std::vector<ExtensionSolution>& sols,
                                                  const WeightSpec& ws) {
  std::vector<LinearCode> out;
  out.reserve(sols.size());
  const bool filter = !ws.full_envelope();
  for (const auto& sol : sols) {
    LinearCode child(parent.field(), parent.k() + 1, sol.x);
    if (filter) {
      WeightEnumerator we = weight_enumerator(child);
      bool keep = true;
      for (int i = 1; i <= we.n() && keep; ++i)
        if (we.a[i] && !ws.contains(i)) keep = false;
      if (!keep) continue;
    }
    out.push_back(std::move(child));
  }
  return out;
}

inline bool canonical_filter(const LinearCode&, int r, const LinearCode& child) {
  return child.min_col_mult() == r;
}

// Accepts the child iff the parent's weight enumerator is the lexicographic
// minimum among the residual enumerators at multiplicity-r support points.
// Points whose residual loses rank are excluded; with no eligible point the
// child is rejected (it is produced in the branch matching its own minimum
// multiplicity).
inline bool lexicographic_filter(const LinearCode& parent, int r, const LinearCode& child,
                                 const WeightEnumerator* parent_we = nullptr,
                                 std::vector<std::vector<uint64_t>>* residuals_out = nullptr) {
  WeightEnumerator pwe = parent_we ? *parent_we : weight_enumerator(parent);
  bool any = false;
  bool minimal = true;
  for (const auto& pm : child.support()) {
    if (pm.mult != r) continue;
    WeightEnumerator rwe;
    try {
      rwe = weight_enumerator(residual_subcode(child, pm.point));
    } catch (const RankCollapse&) {
      continue;
    }
    any = true;
    if (residuals_out) residuals_out->push_back(rwe.a);
    if (rwe < pwe) minimal = false;
  }
  return any && minimal;
}

struct ExtendResult {
  std::vector<LinearCode> children;
  bool complete = true;
  uint64_t nodes = 0;
};

inline ExtendResult extend(const ExtensionProblem& prob) {
  ConstraintSystem cs = build_constraints(prob);
  EnumerationResult en = enumerate_solutions(cs, prob.budget_nodes);
  ExtendResult res;
  res.complete = en.complete;
  res.nodes = en.nodes;
  WeightEnumerator pwe = weight_enumerator(*prob.parent);
  for (auto& child : solutions_to_codes(*prob.parent, en.solutions, prob.weights)) {
    if (prob.canonical && !canonical_filter(*prob.parent, prob.r, child)) continue;
    if (prob.lex && !lexicographic_filter(*prob.parent, prob.r, child, &pwe)) continue;
    res.children.push_back(std::move(child));
  }
  return res;
}

}  // namespace linclass
