#include <doctest.h>

#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "girthlab/cayley.hpp"
#include "girthlab/error.hpp"
#include "girthlab/modmat.hpp"
#include "girthlab/spectral.hpp"

using namespace girthlab;

namespace {

// Straightforward oracle: std::map enumeration, then shortest cycle through
// every vertex by plain BFS.
struct Oracle {
  std::uint64_t order = 0;
  int girth = 0;
  int diameter = 0;
};

Oracle oracle(const std::vector<ModMatrix>& gens) {
  std::set<ModMatrix> sym;
  for (const auto& g : gens) {
    if (!g.is_identity()) sym.insert(g);
    if (!inverse(g).is_identity()) sym.insert(inverse(g));
  }
  std::vector<ModMatrix> s(sym.begin(), sym.end());
  const ModMatrix id = ModMatrix::identity(gens[0].dim(), gens[0].modulus());
  std::map<ModMatrix, int> index{{id, 0}};
  std::vector<ModMatrix> elems{id};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : s) {
      ModMatrix h = elems[i] * g;
      if (index.emplace(h, static_cast<int>(elems.size())).second) elems.push_back(h);
    }
  std::vector<std::vector<int>> adj(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : s) adj[i].push_back(index.at(elems[i] * g));

  Oracle out;
  out.order = elems.size();
  out.girth = 1 << 30;
  for (std::size_t root = 0; root < elems.size(); ++root) {
    std::vector<int> dist(elems.size(), -1), parent(elems.size(), -1);
    std::queue<int> q;
    dist[root] = 0;
    q.push(static_cast<int>(root));
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
          parent[static_cast<std::size_t>(v)] = u;
          q.push(v);
        } else if (parent[static_cast<std::size_t>(u)] != v) {
          out.girth = std::min(out.girth, dist[static_cast<std::size_t>(u)] + dist[static_cast<std::size_t>(v)] + 1);
        }
      }
    }
    if (root == 0) out.diameter = *std::max_element(dist.begin(), dist.end());
  }
  return out;
}

std::vector<ModMatrix> s3() { return {ModMatrix(2, {{1, 1}, {0, 1}}), ModMatrix(2, {{1, 0}, {1, 1}})}; }

std::vector<ModMatrix> klein() {
  return {ModMatrix(3, {{2, 0}, {0, 1}}), ModMatrix(3, {{1, 0}, {0, 2}}), ModMatrix(3, {{2, 0}, {0, 2}})};
}

ModMatrix cyclic_shift(int n, std::uint64_t m) {
  ModMatrix p(n, m);
  for (int i = 0; i < n; ++i) p.set(i, (i + 1) % n, 1);
  return p;
}

}  // namespace

TEST_SUITE("cayley") {

TEST_CASE("closure examples") {
  CHECK(closure(family_generators({2, 1, 2, 2}, 5)) == 120);
  CHECK(closure(family_generators({3, 4, 4, 2}, 3)) == 5616);
  std::vector<ModMatrix> id{ModMatrix::identity(3, 7)};
  CHECK(closure(id) == 1);
  CHECK(closure(s3()) == 6);
}

TEST_CASE("closure of elementary matrices gives the full group") {
  std::vector<ModMatrix> elem;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) {
        ModMatrix e = ModMatrix::identity(3, 3);
        e.set(i, j, 1);
        elem.push_back(e);
      }
  CHECK(closure(elem) == group_order_sl(3, 3).get_ui());
}

TEST_CASE("girth and diameter examples") {
  CHECK(girth(family_generators({2, 1, 2, 2}, 3)) == 3);
  CHECK(girth(s3()) == 6);
  CHECK(diameter(s3()) == 3);
  CHECK(diameter(klein()) == 1);
  CHECK(girth(klein()) == 3);

  auto gens = family_generators({2, 1, 2, 2}, 3);
  const int d = diameter(gens);
  CHECK(d == oracle(gens).diameter);
  CHECK(d >= std::log(23.0 / 4.0) / std::log(3.0));
}

TEST_CASE("girth at p=1009 respects the spectral bound") {
  auto gens = family_generators({2, 1, 2, 2}, 1009);
  const int g = girth(gens);
  CHECK(g >= girth_lower_bound({2, 1, 2, 2}, 1009).bound_reported);
  CHECK(g > 8);
}

TEST_CASE("BFS agrees with the map-based oracle") {
  std::vector<std::vector<ModMatrix>> cases{s3(), klein()};
  for (std::uint64_t p : {3u, 5u, 7u, 11u}) cases.push_back(family_generators({2, 1, 2, 2}, p));
  cases.push_back(family_generators({2, 1, 3, 5}, 7));
  cases.push_back(family_generators({2, 1, 1, 1}, 4));
  cases.push_back(family_generators({2, 1, 1, 1}, 6));
  for (const auto& gens : cases) {
    Oracle o = oracle(gens);
    Exploration e = explore(SymmetricGenerators(gens, true));
    CHECK(e.order == o.order);
    REQUIRE(e.girth.has_value());
    CHECK(*e.girth == o.girth);
    CHECK(e.diameter == o.diameter);
    CHECK(girth(gens) == o.girth);
  }
}

TEST_CASE("girth and diameter table for a=b=2") {
  // Frozen from an independent single-root BFS over 2x2 tuples.
  struct Row {
    std::uint64_t p, order;
    int girth, diameter;
  };
  const Row frozen[] = {{3, 24, 3, 4},       {5, 120, 5, 6},      {7, 336, 6, 8},      {11, 1320, 9, 9},
                        {13, 2184, 10, 9},   {17, 4896, 10, 11},  {19, 6840, 10, 10},  {23, 12144, 12, 11},
                        {29, 24360, 10, 13}, {31, 29760, 14, 12}, {61, 226920, 16, 15}};
  for (const Row& r : frozen) {
    Exploration e = explore(SymmetricGenerators(family_generators({2, 1, 2, 2}, r.p), true));
    CHECK(e.order == r.order);
    CHECK(e.girth == r.girth);
    CHECK(e.diameter == r.diameter);
  }
}

TEST_CASE("degenerate generator sets are rejected") {
  std::vector<ModMatrix> with_id{ModMatrix::identity(2, 5), ModMatrix(5, {{1, 1}, {0, 1}})};
  CHECK_THROWS_AS(girth(with_id), DegenerateSpecError);
  std::vector<ModMatrix> equal{ModMatrix(5, {{1, 1}, {0, 1}}), ModMatrix(5, {{1, 1}, {0, 1}})};
  CHECK_THROWS_AS(girth(equal), DegenerateSpecError);
  std::vector<ModMatrix> inverse_pair{ModMatrix(5, {{1, 1}, {0, 1}}), ModMatrix(5, {{1, 4}, {0, 1}})};
  CHECK_THROWS_AS(girth(inverse_pair), DegenerateSpecError);
  CHECK_THROWS_AS(girth(family_generators({2, 1, 2, 2}, 2)), DegenerateSpecError);
  std::vector<ModMatrix> mixed{ModMatrix(5, {{1, 1}, {0, 1}}), ModMatrix(7, {{1, 1}, {0, 1}})};
  CHECK_THROWS_AS(closure(mixed), ParameterError);
}

TEST_CASE("single cyclic generator: hash and byte-keyed stores") {
  // n=4 mod 17 needs 128-bit codes; n=5 mod 2^31-1 needs byte keys.
  std::vector<ModMatrix> u128{cyclic_shift(4, 17)};
  CHECK(closure(u128) == 4);
  CHECK(girth(u128) == 4);
  CHECK(diameter(u128) == 2);

  std::vector<ModMatrix> unip{family_generators({4, 1, 1, 1}, 17)[0]};
  CHECK(closure(unip) == 17);

  std::vector<ModMatrix> bytes{cyclic_shift(5, 2147483647)};
  CHECK(closure(bytes) == 5);
  CHECK(girth(bytes) == 5);
  CHECK(diameter(bytes) == 2);
}

TEST_CASE("hashed visited set matches the group order") {
  for (std::uint64_t p : {67u, 101u}) CHECK(closure(family_generators({2, 1, 2, 2}, p)) == p * (p * p - 1));
}

TEST_CASE("composite moduli") {
  CHECK(closure(family_generators({2, 1, 1, 1}, 4)) == 48);
  CayleyStats s = cayley_stats(family_generators({2, 1, 1, 1}, 4));
  CHECK(s.ok());
  CHECK(!s.modulus_prime);
  CHECK(!s.generated_full);
  CHECK(s.order == 48);
}

TEST_CASE("budget exhaustion reports progress") {
  ExploreOptions tiny;
  tiny.memory_budget = 4096;
  try {
    closure(family_generators({2, 1, 2, 2}, 101), tiny);
    FAIL("expected a budget error");
  } catch (const BudgetExceeded& e) {
    CHECK(e.visited() > 0);
    CHECK(e.depth_reached() >= 0);
  }
  CHECK_THROWS_AS(cayley_stats(family_generators({2, 1, 2, 2}, 101), tiny), BudgetExceeded);
  std::vector<std::uint64_t> primes{101};
  auto rows = dg_table({2, 1, 2, 2}, primes, tiny);
  REQUIRE(rows.size() == 1);
  CHECK(!rows[0].ok());
  CHECK(rows[0].partial);
  CHECK(rows[0].modulus == 101);
}

TEST_CASE("thread count does not change results") {
  ExploreOptions one, four;
  one.threads = 1;
  four.threads = 4;
  for (std::uint64_t p : {31u, 61u}) {
    auto gens = family_generators({2, 1, 2, 2}, p);
    Exploration x = explore(SymmetricGenerators(gens, true), one);
    Exploration y = explore(SymmetricGenerators(gens, true), four);
    CHECK(x.order == y.order);
    CHECK(x.girth == y.girth);
    CHECK(x.diameter == y.diameter);
    CHECK(x.sphere_sizes == y.sphere_sizes);
  }
}

TEST_CASE("dg_table examples") {
  std::vector<std::uint64_t> primes{5, 7, 11, 13};
  auto rows = dg_table({2, 1, 2, 2}, primes);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.ok());
    CHECK(r.generated_full);
  }

  std::vector<std::uint64_t> three{3};
  rows = dg_table({3, 4, 4, 2}, three);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].order == 5616);

  CHECK(dg_table({2, 1, 2, 2}, std::vector<std::uint64_t>{}).empty());
}

TEST_CASE("dg_table records per-row errors") {
  std::vector<std::uint64_t> primes{2, 5};
  auto rows = dg_table({2, 1, 2, 2}, primes);
  REQUIRE(rows.size() == 2);
  CHECK(!rows[0].ok());
  CHECK(rows[1].ok());
}

TEST_CASE("dg_table invariants") {
  std::vector<std::uint64_t> primes{3, 5, 7, 11, 13, 17, 19, 23, 29};
  auto rows = dg_table({2, 1, 2, 2}, primes);
  auto again = dg_table({2, 1, 2, 2}, primes);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    REQUIRE(r.ok());
    const std::uint64_t full = group_order_sl(2, r.modulus).get_ui();
    CHECK(r.order <= full);
    CHECK(r.generated_full == (r.order == full));
    CHECK(r.degree == 4);
    if (r.order >= 5) CHECK(4.0 * std::pow(3.0, r.diameter) >= static_cast<double>(r.order - 1));
    REQUIRE(r.girth.has_value());
    CHECK(*r.girth >= girth_lower_bound({2, 1, 2, 2}, r.modulus).bound_reported);
    CHECK(std::isfinite(r.dg_ratio()));

    CHECK(again[i].order == r.order);
    CHECK(again[i].girth == r.girth);
    CHECK(again[i].diameter == r.diameter);
    CHECK(again[i].peak_bytes == r.peak_bytes);
  }
}

TEST_CASE("group enumeration and DOT export") {
  GroupEnumeration g = enumerate_group(SymmetricGenerators(s3(), false), 100);
  CHECK(g.elements.size() == 6);
  CHECK(g.degree == 2);
  CHECK(g.neighbours.size() == 12);
  CHECK(std::is_sorted(g.elements.begin(), g.elements.end()));
  CHECK_THROWS_AS(enumerate_group(SymmetricGenerators(s3(), false), 5), ParameterError);

  std::string dot = export_dot(s3());
  CHECK(dot.rfind("graph", 0) == 0);
  std::size_t edges = 0;
  for (std::size_t pos = 0; (pos = dot.find(" -- ", pos)) != std::string::npos; ++pos) ++edges;
  CHECK(edges == 6);
  CHECK_THROWS_AS(export_dot(family_generators({2, 1, 2, 2}, 31)), ParameterError);
}

TEST_CASE("symmetric generator sets collapse duplicates") {
  SymmetricGenerators s(s3(), true);
  CHECK(s.degree() == 2);
  for (int i = 0; i < s.degree(); ++i) CHECK(s.elements()[static_cast<std::size_t>(s.inverse_of(i))] == inverse(s.elements()[static_cast<std::size_t>(i)]));
  SymmetricGenerators f(family_generators({2, 1, 2, 2}, 7), true);
  CHECK(f.degree() == 4);
}

}
