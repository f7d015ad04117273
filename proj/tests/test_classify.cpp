#include <catch2/catch_amalgamated.hpp>

#include "linclass/classify.hpp"
#include "oracles.hpp"

using namespace linclass;

namespace {

ClassificationTask d3_task(int nmax, int kmax) {
  ClassificationTask task;
  task.q = 2;
  task.weights = weights_for_min_distance(3, nmax);
  task.nmax = nmax;
  task.kmax = kmax;
  return task;
}

}  // namespace

TEST_CASE("seeding dimension one", "[classify]") {
  ClassificationTask task;
  task.q = 2;
  task.weights = {4, 6};
  task.nmax = 6;
  task.kmax = 1;
  ClassificationResult r = classify(task);
  CHECK(r.count(4, 1) == 1);
  CHECK(r.count(6, 1) == 1);
  CHECK(r.count(5, 1) == 0);

  ClassificationTask none;
  none.q = 2;
  none.weights = {3};
  none.nmax = 2;
  none.kmax = 1;
  ClassificationResult rn = classify(none);
  for (const auto& [key, cell] : rn.cells) CHECK(cell.count == 0);
}

TEST_CASE("projective cap empties k=1 seeds", "[classify]") {
  ClassificationTask task;
  task.q = 2;
  task.weights = weights_for_min_distance(3, 5);
  task.nmax = 5;
  task.kmax = 1;
  task.projective = true;
  ClassificationResult r = classify(task);
  for (int n = 1; n <= 5; ++n) CHECK(r.count(n, 1) == 0);
}

TEST_CASE("binary d=3 table, small rows", "[classify]") {
  ClassificationResult r = classify(d3_task(9, 9));
  REQUIRE(r.all_complete());
  struct Row {
    int n;
    std::vector<uint64_t> counts;  // k = 1..
  };
  const std::vector<Row> expect = {
      {3, {1}}, {4, {1}}, {5, {1, 1}}, {6, {1, 3, 1}}, {7, {1, 4, 4, 1}},
      {8, {1, 6, 10, 5}}, {9, {1, 8, 23, 23, 5}},
  };
  for (const auto& row : expect)
    for (int k = 1; k <= 9; ++k) {
      uint64_t want = k <= static_cast<int>(row.counts.size()) ? row.counts[k - 1] : 0;
      INFO("n=" << row.n << " k=" << k);
      REQUIRE(r.count(row.n, k) == want);
    }
}

TEST_CASE("hamming [7,4,3] is unique", "[classify]") {
  ClassificationResult r = classify(d3_task(7, 4));
  REQUIRE(r.count(7, 4) == 1);
}

TEST_CASE("k2 closed formula", "[classify]") {
  ClassificationResult r = classify(d3_task(12, 2));
  K2Report rep = verify_k2_formula(r, 5, 12);
  for (const auto& row : rep.rows) {
    INFO("n=" << row.n << " classified=" << row.classified << " formula=" << row.formula);
    REQUIRE(row.match);
  }
  CHECK(k2_closed_formula(7) == 4);
  CHECK(k2_closed_formula(10) == 10);
  CHECK(k2_closed_formula(5) == 1);
}

TEST_CASE("classification matches brute force", "[classify]") {
  ClassificationResult r = classify(d3_task(7, 3));
  for (int n = 3; n <= 7; ++n)
    for (int k = 1; k <= 3; ++k) {
      if (static_cast<uint64_t>(k) * n > 21) continue;
      INFO("n=" << n << " k=" << k);
      REQUIRE(r.count(n, k) == oracles::count_codes_bruteforce(n, k, 3));
    }
}

TEST_CASE("filters do not change counts", "[classify]") {
  ClassificationTask on = d3_task(8, 3);
  ClassificationTask off = d3_task(8, 3);
  off.canonical = false;
  off.lex = false;
  ClassificationResult ron = classify(on);
  ClassificationResult roff = classify(off);
  for (const auto& [key, cell] : ron.cells) {
    INFO("n=" << key.n << " k=" << key.k);
    REQUIRE(cell.count == roff.count(key.n, key.k));
  }
}

TEST_CASE("shard invariance", "[classify]") {
  ClassificationResult base = classify(d3_task(9, 4));
  for (int shards : {2, 8}) {
    ClassificationTask task = d3_task(9, 4);
    task.shards = shards;
    ClassificationResult r = classify(task);
    for (const auto& [key, cell] : base.cells) {
      REQUIRE(r.count(key.n, key.k) == cell.count);
    }
    // identical representatives, not just counts
    for (const auto& [key, cell] : base.cells) {
      const auto& other = r.cells.at(key);
      REQUIRE(other.codes.size() == cell.codes.size());
      for (size_t i = 0; i < cell.codes.size(); ++i) REQUIRE(other.codes[i] == cell.codes[i]);
    }
  }
}

TEST_CASE("shard_parents groups equal enumerators", "[classify]") {
  ClassificationResult r = classify(d3_task(8, 3));
  const auto& parents = r.cells.at({8, 3}).codes;
  auto buckets = shard_parents(parents, 3);
  size_t total = 0;
  for (const auto& b : buckets) total += b.size();
  REQUIRE(total == parents.size());
  for (size_t b1 = 0; b1 < buckets.size(); ++b1)
    for (size_t b2 = b1 + 1; b2 < buckets.size(); ++b2)
      for (size_t i : buckets[b1])
        for (size_t j : buckets[b2])
          REQUIRE(weight_enumerator(parents[i]).a != weight_enumerator(parents[j]).a);
  // identity partition
  auto one = shard_parents(parents, 1);
  REQUIRE(one.size() == 1);
  REQUIRE(one[0].size() == parents.size());
}

TEST_CASE("archived codes are closed under residuals", "[classify]") {
  ClassificationResult r = classify(d3_task(8, 4));
  for (const auto& [key, cell] : r.cells) {
    if (key.k < 2) continue;
    for (const auto& code : cell.codes) {
      for (const auto& pm : code.support()) {
        if (pm.mult != code.min_col_mult()) continue;
        LinearCode res = residual_subcode(code, pm.point);
        auto sig = canonical_form(res);
        const auto& parents = r.cells.at({res.n(), res.k()}).codes;
        bool found = false;
        for (const auto& p : parents) found = found || canonical_form(p) == sig;
        REQUIRE(found);
      }
    }
  }
}

TEST_CASE("projectivity cap keeps archives projective", "[classify]") {
  ClassificationTask task;
  task.q = 2;
  task.weights = weights_for_min_distance(1, 6);
  task.nmax = 6;
  task.kmax = 6;
  task.projective = true;
  ClassificationResult r = classify(task);
  for (const auto& [key, cell] : r.cells)
    for (const auto& code : cell.codes) REQUIRE(is_projective(code));
}

TEST_CASE("redundancy cap matches the plain run on surviving cells", "[classify]") {
  ClassificationTask capped = d3_task(9, 7);
  capped.max_redundancy = 3;
  ClassificationResult rc = classify(capped);
  ClassificationResult rf = classify(d3_task(9, 7));
  for (const auto& [key, cell] : rc.cells) {
    REQUIRE(key.n - key.k <= 3);
    REQUIRE(cell.count == rf.count(key.n, key.k));
  }
}

TEST_CASE("count-only drops archives but keeps counts", "[classify]") {
  ClassificationTask task = d3_task(8, 4);
  task.count_only = true;
  ClassificationResult r = classify(task);
  REQUIRE(r.count(8, 3) == 10);
  REQUIRE(r.cells.at({8, 3}).codes_dropped);
  REQUIRE(r.cells.at({8, 4}).codes.size() == 5);  // last dimension is retained
}

TEST_CASE("ternary k=2 counts equal a partition count", "[classify]") {
  // PGL(2,3) permutes the 4 points of PG(1,3) as the full symmetric group, so
  // [n,2]_3 classes with unrestricted weights are partitions of n into 2..4
  // parts.
  auto partitions = [](int n) {
    uint64_t c = 0;
    for (int a = 1; a <= n; ++a)
      for (int b = a; a + b <= n; ++b)
        for (int d = b; a + b + d <= n; ++d) {
          int e = n - a - b - d;
          if (e == 0 || e >= d) ++c;  // 3- or 4-part, descending
        }
    for (int a = 1; 2 * a <= n; ++a) ++c;  // 2-part
    return c;
  };
  ClassificationTask task;
  task.q = 3;
  task.weights = weights_for_min_distance(1, 9);
  task.nmax = 9;
  task.kmax = 2;
  ClassificationResult r = classify(task);
  for (int n = 2; n <= 9; ++n) {
    INFO("n=" << n);
    REQUIRE(r.count(n, 2) == partitions(n));
  }
}

TEST_CASE("quaternary k=2 counts equal a partition count", "[classify]") {
  // PGammaL(2,4) acts on the 5 points of PG(1,4) as the full symmetric group
  // (the Frobenius supplies the odd permutations), so [n,2]_4 classes with
  // unrestricted weights are partitions of n into 2..5 parts.  Multiplicity
  // patterns with trivial stabilizer, e.g. (4,3,2,1) at n = 10, would split
  // into two classes without the field automorphism.
  auto partitions = [](int n) {
    uint64_t c = 0;
    for (int a = 1; a <= n; ++a)
      for (int b = a; a + b <= n; ++b)
        for (int d = b; a + b + d <= n; ++d)
          for (int e = d; a + b + d + e <= n; ++e) {
            int f = n - a - b - d - e;
            if (f == 0 || f >= e) ++c;  // 4- or 5-part, descending
          }
    for (int a = 1; a <= n; ++a)
      for (int b = a; a + b <= n; ++b)
        if (n - a - b == 0 || n - a - b >= b) ++c;  // 2- or 3-part
    return c;
  };
  ClassificationTask task;
  task.q = 4;
  task.weights = weights_for_min_distance(1, 10);
  task.nmax = 10;
  task.kmax = 2;
  ClassificationResult r = classify(task);
  for (int n = 2; n <= 10; ++n) {
    INFO("n=" << n);
    REQUIRE(r.count(n, 2) == partitions(n));
  }
}

TEST_CASE("ternary 9-divisible spot checks", "[classify]") {
  ClassificationTask task;
  task.q = 3;
  task.weights = {9, 18, 27, 36};
  task.nmax = 36;
  task.kmax = 2;
  ClassificationResult r = classify(task);
  REQUIRE(r.all_complete());
  CHECK(r.count(36, 2) == 4);
  CHECK(r.count(9, 1) == 1);
  CHECK(r.count(10, 1) == 0);
}

TEST_CASE("scale caps are validated before any work", "[classify]") {
  ClassificationTask task = d3_task(30, 26);
  CHECK_THROWS_AS(classify(task), ScaleExceeded);
  ClassificationTask wide = d3_task(255, 2);
  wide.nmax = 256;
  CHECK_THROWS_AS(classify(wide), ScaleExceeded);
}

TEST_CASE("budget exhaustion taints dependent cells", "[classify]") {
  ClassificationTask task = d3_task(8, 3);
  task.budget_nodes = 1;
  ClassificationResult r = classify(task);
  CHECK_FALSE(r.all_complete());
  CHECK_FALSE(r.complete(5, 2));
  // cells above an empty-but-partial cell are tainted too
  CHECK_FALSE(r.complete(6, 3));
  CHECK_FALSE(r.complete(8, 3));
}

TEST_CASE("minimal codeword table small", "[classify]") {
  MinimalCodewordsTable t = min_minimal_codewords_table(2, 5, 5);
  REQUIRE(t.complete);
  CHECK(t.values.at({3, 2}) == 3);
  CHECK(t.values.at({3, 3}) == 3);
  CHECK(t.values.at({4, 3}) == 4);
  CHECK(t.values.at({4, 4}) == 4);
  CHECK(t.values.at({5, 3}) == 6);
  CHECK(t.values.at({5, 4}) == 5);
  CHECK(t.values.at({5, 5}) == 5);
  CHECK_FALSE(t.values.count({4, 2}));  // no projective [4,2]_2 code
}
