#pragma once

// Dimension-by-dimension classification driver.  Dimension 1 is seeded with
// the repetition codes [w,1] for w in W; each further dimension is generated
// by extending every archived [n',k-1] parent with every admissible r,
// filtering, and deduplicating per (n,k) cell by canonical signature.
//
// With canonical lengthening on, a parent is only extended with r up to its
// minimum column multiplicity, and a child whose minimum column multiplicity
// differs from r is discarded; with lexicographical lengthening on, a child is
// kept only when the parent realizes the lexicographic minimum among the
// residual enumerators at multiplicity-r points.  Together these make the
// accepted (parent class, r) pair an invariant of the child, which is also
// why parents may be sharded by weight enumerator: children of parents with
// different enumerators cannot collide.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "linclass/archive.hpp"
#include "linclass/canon.hpp"
#include "linclass/code.hpp"
#include "linclass/extender.hpp"

namespace linclass {

struct ClassificationTask {
  int q = 2;
  std::vector<int> weights;
  int nmax = 0;
  int kmax = 0;
  bool projective = false;  // shorthand for max_mult = 1
  int max_mult = 0;         // 0 = uncapped
  int max_redundancy = -1;  // < 0 = uncapped; else require n - k <= max_redundancy
  bool canonical = true;
  bool lex = true;
  int shards = 1;
  uint64_t budget_nodes = 10'000'000;
  bool count_only = false;
  std::string outdir;  // empty = keep archives in memory only

  int effective_max_mult() const { return projective ? 1 : max_mult; }

  std::string fingerprint() const {
    std::ostringstream s;
    s << "q=" << q << ";W=";
    for (int w : weights) s << w << ',';
    s << ";nmax=" << nmax << ";kmax=" << kmax << ";mm=" << effective_max_mult()
      << ";rho=" << max_redundancy << ";canon=" << canonical << ";lex=" << lex;
    std::ostringstream hex;
    hex << std::hex << fnv1a64(s.str());
    return hex.str();
  }
};

inline std::vector<int> weights_for_min_distance(int d, int nmax, int divisor = 1) {
  std::vector<int> w;
  for (int i = d; i <= nmax; ++i)
    if (i % divisor == 0) w.push_back(i);
  return w;
}

struct CellKey {
  int n = 0, k = 0;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct Cell {
  std::vector<LinearCode> codes;  // sorted by canonical signature
  uint64_t count = 0;
  bool complete = true;
  bool codes_dropped = false;  // count-only mode released them
};

struct ClassificationResult {
  std::map<CellKey, Cell> cells;

  uint64_t count(int n, int k) const {
    auto it = cells.find({n, k});
    return it == cells.end() ? 0 : it->second.count;
  }
  bool complete(int n, int k) const {
    auto it = cells.find({n, k});
    return it == cells.end() ? true : it->second.complete;
  }
  bool all_complete() const {
    for (const auto& [key, cell] : cells)
      if (!cell.complete) return false;
    return true;
  }
};

// Partition parent indices so that parents with equal weight enumerators land
// in the same bucket.
inline std::vector<std::vector<size_t>> shard_parents(const std::vector<LinearCode>& parents,
                                                      int shards) {
  std::map<std::vector<uint64_t>, std::vector<size_t>> groups;
  for (size_t i = 0; i < parents.size(); ++i) groups[weight_enumerator(parents[i]).a].push_back(i);
  std::vector<std::vector<size_t>> buckets(std::max(1, shards));
  size_t g = 0;
  for (auto& [we, idxs] : groups) {
    auto& b = buckets[g % buckets.size()];
    b.insert(b.end(), idxs.begin(), idxs.end());
    ++g;
  }
  return buckets;
}

namespace detail {

struct ShardOutput {
  std::map<CellKey, std::map<CanonicalSignature, LinearCode>> cells;
  std::set<CellKey> partial;
};

}  // namespace detail

inline ClassificationResult classify(const ClassificationTask& task) {
  if (task.kmax < 1 || task.nmax < task.kmax) throw InconsistentInput("need nmax >= kmax >= 1");
  if (task.nmax > 255) throw ScaleExceeded("classification capped at nmax <= 255");
  {
    // fail before any work if the top dimension would overrun the canonical
    // form or geometry caps
    uint64_t space = 1;
    for (int i = 0; i < task.kmax; ++i) {
      space *= static_cast<uint64_t>(task.q);
      if (space > Geometry::kMaxSpace)
        throw ScaleExceeded("kmax exceeds the PG(k-1,q) size cap");
    }
    if ((space - 1) / (task.q - 1) > 65535)
      throw ScaleExceeded("kmax exceeds the canonical form point cap");
  }
  WeightSpec ws = WeightSpec::make(task.weights);
  const Field& f = field(task.q);
  const int mm = task.effective_max_mult();
  const std::string fp = task.fingerprint();
  const bool use_dir = !task.outdir.empty();
  if (use_dir) std::filesystem::create_directories(task.outdir);

  ClassificationResult result;
  for (int k = 1; k <= task.kmax; ++k)
    for (int n = k; n <= task.nmax; ++n)
      if (task.max_redundancy < 0 || n - k <= task.max_redundancy) result.cells[{n, k}];

  auto cell_path = [&](CellKey key) {
    return std::filesystem::path(task.outdir) /
           ("cell_n" + std::to_string(key.n) + "_k" + std::to_string(key.k) + ".txt");
  };
  auto try_load = [&](CellKey key, Cell& cell) {
    if (!use_dir) return false;
    auto path = cell_path(key);
    if (!std::filesystem::exists(path)) return false;
    try {
      CodeArchive ar = read_archive(path);
      if (!ar.complete || ar.task_fingerprint != fp || ar.n != key.n || ar.k != key.k) return false;
      cell.codes.clear();
      for (auto& c : ar.codes) {
        auto sig = canonical_form(c);
        cell.codes.push_back(code_from_signature(sig));
      }
      cell.count = cell.codes.size();
      cell.complete = true;
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  auto store = [&](CellKey key, Cell& cell) {
    if (!use_dir) return;
    CodeArchive ar;
    ar.q = task.q;
    ar.n = key.n;
    ar.k = key.k;
    ar.codes = cell.codes;
    ar.complete = cell.complete;
    ar.task_fingerprint = fp;
    write_archive(cell_path(key), ar);
  };

  // Dimension 1: one repetition code per admissible weight.
  for (auto& [key, cell] : result.cells) {
    if (key.k != 1) continue;
    if (try_load(key, cell)) continue;
    if (ws.contains(key.n) && !(mm && key.n > mm))
      cell.codes.push_back(LinearCode(f, 1, {{0, static_cast<uint16_t>(key.n)}}));
    cell.count = cell.codes.size();
    store(key, cell);
  }

  for (int k = 2; k <= task.kmax; ++k) {
    std::map<CellKey, std::map<CanonicalSignature, LinearCode>> pending;
    std::set<CellKey> partial;
    std::set<CellKey> loaded;
    for (auto& [key, cell] : result.cells)
      if (key.k == k && try_load(key, cell)) loaded.insert(key);

    for (auto& [pkey, pcell] : result.cells) {
      if (pkey.k != k - 1) continue;
      int rmax = task.nmax - pkey.n;
      if (task.max_redundancy >= 0) rmax = std::min(rmax, task.max_redundancy - pkey.n + k);
      if (rmax < 1) continue;

      // A partial parent cell taints everything reachable from it, even when
      // the budget left it empty.
      if (!pcell.complete)
        for (int r = 1; r <= rmax; ++r)
          if (result.cells.count({pkey.n + r, k})) partial.insert({pkey.n + r, k});
      if (pcell.codes.empty()) continue;

      auto buckets = shard_parents(pcell.codes, task.shards);
      std::vector<detail::ShardOutput> outputs(buckets.size());
      auto work = [&](size_t bi) {
        auto& out = outputs[bi];
        for (size_t pi : buckets[bi]) {
          const LinearCode& parent = pcell.codes[pi];
          int top = task.canonical ? std::min(parent.min_col_mult(), rmax) : rmax;
          for (int r = 1; r <= top; ++r) {
            CellKey ck{pkey.n + r, k};
            if (!result.cells.count(ck) || loaded.count(ck)) continue;
            if (mm && r > mm) continue;
            ExtensionProblem prob;
            prob.parent = &parent;
            prob.r = r;
            prob.weights = ws;
            prob.canonical = task.canonical;
            prob.lex = task.lex;
            prob.max_mult = mm;
            prob.budget_nodes = task.budget_nodes;
            ExtendResult ext = extend(prob);
            if (!ext.complete) out.partial.insert(ck);
            auto& sink = out.cells[ck];
            for (auto& child : ext.children) {
              auto sig = canonical_form(child);
              if (!sink.contains(sig)) sink.emplace(std::move(sig), code_from_signature(sig));
            }
          }
        }
      };
      if (buckets.size() > 1) {
        std::vector<std::thread> threads;
        for (size_t bi = 0; bi < buckets.size(); ++bi) threads.emplace_back(work, bi);
        for (auto& t : threads) t.join();
      } else {
        work(0);
      }
      for (auto& out : outputs) {
        for (auto& [ck, sink] : out.cells) {
          auto& agg = pending[ck];
          for (auto& [sig, code] : sink) agg.emplace(sig, std::move(code));
        }
        partial.insert(out.partial.begin(), out.partial.end());
      }
    }

    for (auto& [key, cell] : result.cells) {
      if (key.k != k || loaded.count(key)) continue;
      auto it = pending.find(key);
      if (it != pending.end()) {
        cell.codes.reserve(it->second.size());
        for (auto& [sig, code] : it->second) cell.codes.push_back(std::move(code));
      }
      cell.count = cell.codes.size();
      cell.complete = !partial.count(key);
      store(key, cell);
    }

    if (task.count_only) {
      for (auto& [key, cell] : result.cells)
        if (key.k == k - 1 && !cell.codes.empty()) {
          cell.codes.clear();
          cell.codes.shrink_to_fit();
          cell.codes_dropped = true;
        }
    }
  }
  return result;
}

// ceil(sqrt((n-4)(n-3)(2n-7)/6)), the closed count of [n,2,3]_2 classes.
inline uint64_t k2_closed_formula(int n) {
  if (n < 5) return 0;
  uint64_t m = static_cast<uint64_t>(n - 4) * static_cast<uint64_t>(n - 3) *
               static_cast<uint64_t>(2 * n - 7) / 6;
  uint64_t s = static_cast<uint64_t>(std::sqrt(static_cast<double>(m)));
  while (s * s > m) --s;
  while ((s + 1) * (s + 1) <= m) ++s;
  return s * s == m ? s : s + 1;
}

struct K2Report {
  struct Row {
    int n;
    uint64_t classified, formula;
    bool match;
  };
  std::vector<Row> rows;
  bool all_match = true;
};

inline K2Report verify_k2_formula(const ClassificationResult& result, int nmin, int nmax) {
  K2Report rep;
  for (int n = nmin; n <= nmax; ++n) {
    uint64_t c = result.count(n, 2), e = k2_closed_formula(n);
    rep.rows.push_back({n, c, e, c == e});
    rep.all_match = rep.all_match && c == e;
  }
  return rep;
}

struct MinimalCodewordsTable {
  std::map<CellKey, uint64_t> values;  // cells with at least one projective code
  bool complete = true;
};

// m_q(n,k): cell-wise minimum of the minimal-codeword count over projective
// [n,k]_q codes.  Classifies all [n,k,{1..nmax}]_q codes (residual parents of
// projective codes are in general not projective, so generation cannot be
// capped) and evaluates the projective ones.
inline MinimalCodewordsTable min_minimal_codewords_table(int q, int nmax, int kmax,
                                                         uint64_t budget_nodes = 10'000'000,
                                                         int shards = 1) {
  ClassificationTask task;
  task.q = q;
  task.weights = weights_for_min_distance(1, nmax);
  task.nmax = nmax;
  task.kmax = kmax;
  task.budget_nodes = budget_nodes;
  task.shards = shards;
  ClassificationResult result = classify(task);
  MinimalCodewordsTable table;
  table.complete = result.all_complete();
  for (const auto& [key, cell] : result.cells) {
    uint64_t best = 0;
    bool any = false;
    for (const auto& code : cell.codes) {
      if (!is_projective(code)) continue;
      uint64_t m = minimal_codewords_count(code);
      if (!any || m < best) best = m;
      any = true;
    }
    if (any) table.values[key] = best;
  }
  return table;
}

}  // namespace linclass
