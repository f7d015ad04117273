#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "linclass/canon.hpp"
#include "linclass/classify.hpp"
#include "oracles.hpp"

using namespace linclass;

namespace {

GeneratorMatrix gm_from(std::initializer_list<std::vector<uint8_t>> rows, int q = 2) {
  GeneratorMatrix gm;
  gm.q = q;
  gm.rows.assign(rows.begin(), rows.end());
  return gm;
}

LinearCode random_code(int q, int k, int n, std::mt19937& rng) {
  const Field& f = field(q);
  const Geometry& g = geometry(f, k);
  while (true) {
    std::vector<uint16_t> mult(g.num_points(), 0);
    for (int i = 0; i < n; ++i) ++mult[rng() % g.num_points()];
    std::vector<PointMult> pm;
    for (uint32_t p = 0; p < mult.size(); ++p)
      if (mult[p]) pm.push_back({p, mult[p]});
    try {
      return LinearCode(f, k, pm);
    } catch (const RankDeficient&) {
    }
  }
}

}  // namespace

TEST_CASE("three presentations of the [7,2,{4,6}] code share one class", "[canon]") {
  auto a = from_generator_matrix(field(2),
                                  gm_from({{1, 1, 1, 1, 0, 0, 0}, {1, 1, 1, 0, 1, 1, 1}}));
  auto b = from_generator_matrix(field(2),
                                  gm_from({{1, 0, 0, 0, 1, 1, 1}, {0, 1, 1, 1, 1, 1, 1}}));
  auto c = from_generator_matrix(field(2),
                                  gm_from({{1, 0, 1, 1, 1, 1, 1}, {0, 1, 0, 0, 1, 1, 1}}));
  auto sa = canonical_form(a), sb = canonical_form(b), sc = canonical_form(c);
  CHECK(sa == sb);
  CHECK(sb == sc);
  CHECK(code_from_signature(sc).n() == 7);
}

TEST_CASE("the three [6,2,3]_2 classes are distinct", "[canon]") {
  const Geometry& g = geometry(field(2), 2);
  auto mk = [&](int m1, int m2, int m3) {
    std::vector<PointMult> pm;
    if (m1) pm.push_back({static_cast<uint32_t>(g.unit_point(1)), static_cast<uint16_t>(m1)});
    if (m2) pm.push_back({static_cast<uint32_t>(g.unit_point(2)), static_cast<uint16_t>(m2)});
    if (m3) pm.push_back({static_cast<uint32_t>(g.point_of_code(3)), static_cast<uint16_t>(m3)});
    return LinearCode(field(2), 2, pm);
  };
  auto a = canonical_form(mk(3, 3, 0));
  auto b = canonical_form(mk(3, 2, 1));
  auto c = canonical_form(mk(2, 2, 2));
  CHECK(a != b);
  CHECK(a != c);
  CHECK(b != c);
  // permuted multiplicities stay in class
  CHECK(b == canonical_form(mk(1, 2, 3)));
  CHECK(a == canonical_form(mk(0, 3, 3)));
}

TEST_CASE("signatures are isometry invariant", "[canon]") {
  std::mt19937 rng(97);
  for (int q : {2, 3, 4}) {
    for (int base_trial = 0; base_trial < 3; ++base_trial) {
      int k = 2 + static_cast<int>(rng() % 2);
      int n = k + 2 + static_cast<int>(rng() % 5);
      LinearCode base = random_code(q, k, n, rng);
      auto sig = canonical_form(base);
      for (int t = 0; t < 20; ++t)
        REQUIRE(canonical_form(oracles::random_isometry(base, rng)) == sig);
    }
  }
}

TEST_CASE("signature equality matches permutation equivalence", "[canon]") {
  // full population of [n,k,{1..n}]_2 codes for n <= 7, k <= 3
  ClassificationTask task;
  task.q = 2;
  task.weights = weights_for_min_distance(1, 7);
  task.nmax = 7;
  task.kmax = 3;
  ClassificationResult result = classify(task);
  std::vector<LinearCode> population;
  for (const auto& [key, cell] : result.cells)
    for (const auto& code : cell.codes) population.push_back(code);
  REQUIRE(population.size() > 20);

  for (size_t i = 0; i < population.size(); ++i)
    for (size_t j = i + 1; j < population.size(); ++j) {
      const auto& a = population[i];
      const auto& b = population[j];
      if (a.n() != b.n() || a.k() != b.k()) continue;
      bool sig_eq = canonical_form(a) == canonical_form(b);
      bool perm_eq = oracles::equivalent_by_permutation(a, b);
      REQUIRE(sig_eq == perm_eq);
    }
  // representatives of one class always collide
  std::mt19937 rng(3);
  for (const auto& code : population) {
    LinearCode isom = oracles::random_isometry(code, rng);
    REQUIRE(canonical_form(isom) == canonical_form(code));
    REQUIRE(oracles::equivalent_by_permutation(isom, code));
  }
}

TEST_CASE("automorphism orders", "[canon]") {
  // simplex on the 3 points of PG(1,2)
  LinearCode simplex2(field(2), 2, {{0, 1}, {1, 1}, {2, 1}});
  CHECK(automorphism_order(simplex2) == 6);
  CHECK(oracles::permutation_automorphisms(simplex2) == 6);

  LinearCode ham = from_generator_matrix(field(2), gm_from({{1, 0, 0, 0, 0, 1, 1},
                                                            {0, 1, 0, 0, 1, 0, 1},
                                                            {0, 0, 1, 0, 1, 1, 0},
                                                            {0, 0, 0, 1, 1, 1, 1}}));
  CHECK(automorphism_order(ham) == 168);
  CHECK(oracles::permutation_automorphisms(ham) == 168);

  // simplex [7,3]: the full point set of PG(2,2) is stabilized by all of GL(3,2)
  std::vector<PointMult> pm;
  for (uint32_t p = 0; p < 7; ++p) pm.push_back({p, 1});
  CHECK(automorphism_order(LinearCode(field(2), 3, pm)) == 168);
}

TEST_CASE("multiset stabilizer lifts to permutation automorphisms", "[canon]") {
  // for q=2: |perm aut| = |multiset stabilizer| * prod m(P)!
  std::mt19937 rng(55);
  auto factorial = [](int m) {
    uint64_t r = 1;
    for (int i = 2; i <= m; ++i) r *= i;
    return r;
  };
  for (int trial = 0; trial < 8; ++trial) {
    int k = 2 + static_cast<int>(rng() % 2);
    int n = k + 1 + static_cast<int>(rng() % (7 - k));
    LinearCode code = random_code(2, k, n, rng);
    uint64_t lift = automorphism_order(code);
    for (const auto& pm : code.support()) lift *= factorial(pm.mult);
    REQUIRE(lift == oracles::permutation_automorphisms(code));
  }
}

TEST_CASE("dedupe", "[canon]") {
  std::mt19937 rng(123);
  LinearCode base = random_code(2, 3, 7, rng);
  std::vector<LinearCode> many;
  for (int i = 0; i < 100; ++i) many.push_back(oracles::random_isometry(base, rng));
  auto reps = dedupe(many);
  REQUIRE(reps.size() == 1);
  CHECK(canonical_form(reps[0]) == canonical_form(base));

  // invariant keys agree inside a class and split across enumerators
  CHECK(invariant_key(many[0]) == invariant_key(many[1]));
}

TEST_CASE("dedupe is input order independent", "[canon]") {
  std::mt19937 rng(321);
  std::vector<LinearCode> pop;
  for (int t = 0; t < 6; ++t) {
    LinearCode c = random_code(2, 3, 8, rng);
    for (int i = 0; i < 5; ++i) pop.push_back(oracles::random_isometry(c, rng));
  }
  auto a = dedupe(pop);
  std::shuffle(pop.begin(), pop.end(), rng);
  auto b = dedupe(pop);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
}

TEST_CASE("scale caps", "[canon]") {
  CHECK_THROWS_AS(canonical_form(LinearCode(field(2), 1, {{0, 300}})), ScaleExceeded);
}
