// Acceptance suite: reproduces the bundled reference tables and worked
// examples end to end, one pass/fail line per criterion.  Exits nonzero if
// anything fails.  Run from the repository root (reads data/).

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "linclass/linclass.hpp"
#include "oracles.hpp"

using namespace linclass;

namespace {

int failures = 0;
std::vector<std::string> notes;

void note(const std::string& s) { notes.push_back(s); }

void report(int idx, const std::string& name, bool pass, double seconds) {
  std::cout << "[" << idx << "/9] " << std::left << std::setw(34) << name
            << (pass ? "PASS" : "FAIL") << "  (" << std::fixed << std::setprecision(1) << seconds
            << "s)\n";
  for (const auto& s : notes) std::cout << "        " << s << '\n';
  notes.clear();
  if (!pass) ++failures;
}

template <typename F>
void criterion(int idx, const std::string& name, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  try {
    pass = body();
  } catch (const std::exception& e) {
    note(std::string("exception: ") + e.what());
  }
  auto t1 = std::chrono::steady_clock::now();
  report(idx, name, pass, std::chrono::duration<double>(t1 - t0).count());
}

std::map<std::pair<int, int>, uint64_t> read_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::map<std::pair<int, int>, uint64_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int n, k;
    uint64_t v;
    if (ss >> n >> k >> v) out[{n, k}] = v;
  }
  return out;
}

ClassificationTask d3_task(int nmax, int kmax) {
  ClassificationTask task;
  task.q = 2;
  task.weights = weights_for_min_distance(3, nmax);
  task.nmax = nmax;
  task.kmax = kmax;
  return task;
}

bool check_count(const ClassificationResult& r, int n, int k, uint64_t expect) {
  uint64_t got = r.count(n, k);
  if (got != expect || !r.complete(n, k)) {
    std::ostringstream ss;
    ss << "[" << n << "," << k << "] expected " << expect << " got " << got
       << (r.complete(n, k) ? "" : " (partial)");
    note(ss.str());
    return false;
  }
  return true;
}

}  // namespace

int main() {
  criterion(1, "table of [n,k,3]_2 counts, n<=12", [] {
    ClassificationResult r = classify(d3_task(12, 12));
    auto expect = read_counts("data/table1_small.tsv");
    bool ok = r.all_complete();
    for (const auto& [nk, v] : expect) ok = check_count(r, nk.first, nk.second, v) && ok;
    return ok;
  });

  criterion(2, "closed formula for k=2, n<=16", [] {
    ClassificationResult r = classify(d3_task(16, 2));
    K2Report rep = verify_k2_formula(r, 5, 16);
    for (const auto& row : rep.rows)
      if (!row.match) {
        std::ostringstream ss;
        ss << "n=" << row.n << " classified " << row.classified << " formula " << row.formula;
        note(ss.str());
      }
    return rep.all_match && r.all_complete();
  });

  criterion(3, "worked lengthening example", [] {
    LinearCode six(field(2), 1, {{0, 6}});
    ExtensionProblem prob;
    prob.parent = &six;
    prob.r = 1;
    prob.weights = WeightSpec::make({4, 6});
    ExtendResult res = extend(prob);
    if (!res.complete || res.children.size() != 1) {
      note("expected exactly one child of the [6,1] code");
      return false;
    }
    GeneratorMatrix direct;
    direct.q = 2;
    direct.rows = {{1, 0, 1, 1, 1, 1, 1}, {0, 1, 0, 0, 1, 1, 1}};
    bool isometric = canonical_form(res.children[0]) ==
                     canonical_form(from_generator_matrix(field(2), direct));
    if (!isometric) note("child not isometric to the reference [7,2,{4,6}] code");

    LinearCode four(field(2), 1, {{0, 4}});
    prob.parent = &four;
    prob.r = 3;
    ExtendResult res2 = extend(prob);
    if (!res2.complete || !res2.children.empty()) {
      note("expected no surviving children of the [4,1] code with r=3");
      return false;
    }
    return isometric;
  });

  criterion(4, "hamming code uniqueness", [] {
    ClassificationResult r7 = classify(d3_task(7, 4));
    bool ok = check_count(r7, 7, 4, 1);
    // only cells with n-k <= 4 can reach [15,11]: redundancy never decreases
    // along a lengthening chain, so the cap loses no ancestors
    ClassificationTask task = d3_task(15, 11);
    task.max_redundancy = 4;
    ClassificationResult r15 = classify(task);
    ok = check_count(r15, 15, 11, 1) && ok;
    return ok;
  });

  criterion(5, "9-divisible ternary counts", [] {
    ClassificationTask task;
    task.q = 3;
    task.weights = {9, 18, 27, 36, 45, 54};
    task.nmax = 45;
    task.kmax = 3;
    ClassificationResult r = classify(task);
    bool ok = r.all_complete();
    auto expect = read_counts("data/table4_k2.tsv");
    for (const auto& [nk, v] : expect) ok = check_count(r, nk.first, nk.second, v) && ok;
    ok = check_count(r, 41, 1, 0) && check_count(r, 41, 2, 0) && check_count(r, 41, 3, 0) && ok;
    return ok;
  });

  criterion(6, "minimal codeword minima, n<=10", [] {
    MinimalCodewordsTable table = min_minimal_codewords_table(2, 10, 10);
    bool ok = table.complete;
    auto expect = read_counts("data/table5_small.tsv");
    for (const auto& [nk, v] : expect) {
      auto it = table.values.find({nk.first, nk.second});
      uint64_t got = it == table.values.end() ? 0 : it->second;
      if (got != v) {
        std::ostringstream ss;
        ss << "m(" << nk.first << "," << nk.second << ") expected " << v << " got " << got;
        note(ss.str());
        ok = false;
      }
    }
    for (const auto& [key, v] : table.values) {
      if (key.n < 3 || key.k < 2) continue;
      if (!expect.count({key.n, key.k})) {
        std::ostringstream ss;
        ss << "unexpected projective cell m(" << key.n << "," << key.k << ") = " << v;
        note(ss.str());
        ok = false;
      }
    }
    return ok;
  });

  criterion(7, "[24,14,6]_2 invariants", [] {
    CodeArchive ar = read_archive("data/code_24_14_6.txt");
    if (ar.codes.size() != 1) return false;
    const LinearCode& code = ar.codes[0];
    WeightEnumerator we = weight_enumerator(code);
    std::vector<uint64_t> expect(25, 0);
    expect[0] = 1;
    expect[6] = 336;
    expect[8] = 1335;
    expect[10] = 3888;
    expect[12] = 5264;
    expect[14] = 3888;
    expect[16] = 1335;
    expect[18] = 336;
    expect[24] = 1;
    if (we.a != expect) {
      note("weight enumerator mismatch");
      return false;
    }
    uint64_t aut = automorphism_order(code);
    if (aut != 96) {
      std::ostringstream ss;
      ss << "automorphism order expected 96 got " << aut;
      note(ss.str());
      return false;
    }
    return true;
  });

  criterion(8, "macwilliams feasibility point", [] {
    std::vector<uint64_t> a(71, 0);
    a[0] = 1;
    a[45] = 588;
    a[54] = 140;
    WeightEnumerator we{a};
    DualWeightDistribution dual = macwilliams_transform(we, 3, 6);
    bool ok = dual.integral() && dual.b[1] == 0 && dual.b[2] == 0 && dual.b[3] == 280;
    if (!ok) note("dual distribution mismatch");
    if (!power_moments_hold(we, dual, 3, 6)) {
      note("power moments violated");
      ok = false;
    }
    // 20*m0 - 2*m1 + m2/10 eliminates A_45 and A_54 and equals 3^k/6
    auto moment = [&](int v) {
      BigRat lhs = 0;
      for (int i = 0; i <= 70; ++i)
        if (we.a[i]) lhs += BigRat(BigInt(we.a[i]) * detail::binomial(70 - i, v));
      return lhs;
    };
    BigRat combo = BigRat(20) * moment(0) - BigRat(2) * moment(1) + moment(2) / BigRat(10);
    if (combo != BigRat(detail::ipow(3, 6), 6)) {
      note("moment combination does not equal 3^6/6");
      ok = false;
    }
    if (combo < BigRat(243, 2)) {
      note("moment combination below the dimension bound constant");
      ok = false;
    }
    return ok;
  });

  criterion(9, "property suites", [] {
    bool ok = true;

    // (a) filter safety: identical counts with and without the two filters
    {
      ClassificationResult on = classify(d3_task(10, 4));
      ClassificationTask off_task = d3_task(10, 4);
      off_task.canonical = false;
      off_task.lex = false;
      ClassificationResult off = classify(off_task);
      for (const auto& [key, cell] : on.cells)
        if (cell.count != off.count(key.n, key.k)) {
          std::ostringstream ss;
          ss << "filter safety: [" << key.n << "," << key.k << "] on=" << cell.count
             << " off=" << off.count(key.n, key.k);
          note(ss.str());
          ok = false;
        }
    }

    // (b) pipeline counts equal exhaustive generator-matrix enumeration
    {
      ClassificationResult r = classify(d3_task(7, 3));
      for (int n = 3; n <= 7; ++n)
        for (int k = 1; k <= std::min(n, 3); ++k) {
          uint64_t brute = oracles::count_codes_bruteforce(n, k, 3);
          if (r.count(n, k) != brute) {
            std::ostringstream ss;
            ss << "oracle: [" << n << "," << k << "] pipeline=" << r.count(n, k)
               << " bruteforce=" << brute;
            note(ss.str());
            ok = false;
          }
        }
    }

    // (c) shard invariance
    {
      ClassificationResult base = classify(d3_task(12, 5));
      for (int shards : {2, 8}) {
        ClassificationTask task = d3_task(12, 5);
        task.shards = shards;
        ClassificationResult r = classify(task);
        for (const auto& [key, cell] : base.cells) {
          if (r.count(key.n, key.k) != cell.count) {
            std::ostringstream ss;
            ss << "shards=" << shards << ": [" << key.n << "," << key.k << "] differs";
            note(ss.str());
            ok = false;
          }
          const auto& codes = r.cells.at(key).codes;
          for (size_t i = 0; i < cell.codes.size(); ++i)
            if (!(codes[i] == cell.codes[i])) {
              note("shard archives differ");
              ok = false;
              break;
            }
        }
      }
    }

    // (d) invariance of every reported invariant under 100 random isometries
    {
      std::mt19937 rng(2024);
      for (int q : {2, 3, 4}) {
        const Field& f = field(q);
        const Geometry& g = geometry(f, 3);
        LinearCode base = [&] {
          while (true) {
            std::vector<uint16_t> mult(g.num_points(), 0);
            for (int i = 0; i < 9; ++i) ++mult[rng() % g.num_points()];
            std::vector<PointMult> pm;
            for (uint32_t p = 0; p < mult.size(); ++p)
              if (mult[p]) pm.push_back({p, mult[p]});
            try {
              return LinearCode(f, 3, pm);
            } catch (const RankDeficient&) {
            }
          }
        }();
        auto we = weight_enumerator(base);
        auto sig = canonical_form(base);
        auto mc = minimal_codewords_count(base);
        for (int t = 0; t < 100; ++t) {
          LinearCode other = oracles::random_isometry(base, rng);
          bool same = weight_enumerator(other).a == we.a &&
                      other.min_col_mult() == base.min_col_mult() &&
                      other.max_col_mult() == base.max_col_mult() &&
                      is_projective(other) == is_projective(base) &&
                      is_divisible(other, 2) == is_divisible(base, 2) &&
                      minimal_codewords_count(other) == mc && canonical_form(other) == sig;
          if (!same) {
            std::ostringstream ss;
            ss << "isometry invariance broken at q=" << q << " trial " << t;
            note(ss.str());
            ok = false;
            break;
          }
        }
      }
    }
    return ok;
  });

  if (failures == 0)
    std::cout << "acceptance: all 9 criteria passed\n";
  else
    std::cout << "acceptance: " << failures << " criteria FAILED\n";
  return failures == 0 ? 0 : 1;
}
