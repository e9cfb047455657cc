#include <doctest.h>

#include <random>

#include "girthlab/error.hpp"
#include "girthlab/exactmat.hpp"
#include "girthlab/modmat.hpp"

using namespace girthlab;

namespace {

// Counts determinant-one matrices by brute force.
std::uint64_t count_sl(int n, std::uint64_t p) {
  const std::size_t cells = static_cast<std::size_t>(n * n);
  std::vector<long> e(cells, 0);
  std::uint64_t count = 0;
  for (;;) {
    ModMatrix m(n, p);
    for (std::size_t i = 0; i < cells; ++i) m.set(static_cast<int>(i) / n, static_cast<int>(i) % n, e[i]);
    if (m.determinant() == 1) ++count;
    std::size_t k = 0;
    while (k < cells && ++e[k] == static_cast<long>(p)) e[k++] = 0;
    if (k == cells) break;
  }
  return count;
}

ModMatrix random_matrix(std::mt19937_64& rng, int n, std::uint64_t p) {
  std::uniform_int_distribution<long> d(0, static_cast<long>(p) - 1);
  ModMatrix m(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.set(i, j, d(rng));
  return m;
}

}  // namespace

TEST_SUITE("modmat") {

TEST_CASE("reduction of exact matrices") {
  ExactMatrix m{{1, 8, 24}, {0, 1, 8}, {0, 0, 1}};
  CHECK(reduce(m, 3) == ModMatrix(3, {{1, 2, 0}, {0, 1, 2}, {0, 0, 1}}));
  CHECK(reduce(ExactMatrix{{-1, 5}, {-7, 0}}, 5) == ModMatrix(5, {{4, 0}, {3, 0}}));
  CHECK(ModMatrix(7, {{-1, 0}, {0, -8}}) == ModMatrix(7, {{6, 0}, {0, 6}}));
  CHECK_THROWS_AS(ModMatrix(1, {{0}}), ParameterError);
}

TEST_CASE("reduction is a ring homomorphism") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-1000, 1000);
  for (std::uint64_t p : {2u, 3u, 7u, 101u, 65521u}) {
    for (int trial = 0; trial < 50; ++trial) {
      ExactMatrix x(3), y(3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          x(i, j) = d(rng);
          y(i, j) = d(rng);
        }
      CHECK(reduce(x * y, p) == reduce(x, p) * reduce(y, p));
    }
  }
}

TEST_CASE("inverse and power") {
  ModMatrix a(5, {{1, 2}, {0, 1}});
  CHECK(inverse(a) == ModMatrix(5, {{1, 3}, {0, 1}}));
  CHECK(power(a, 5).is_identity());
  CHECK(power(a, -2) == ModMatrix(5, {{1, 1}, {0, 1}}));
  CHECK(power(a, 0).is_identity());

  std::mt19937_64 rng(9);
  for (std::uint64_t p : {3u, 7u, 13u, 4294967291u}) {
    for (int trial = 0; trial < 40; ++trial) {
      ModMatrix m = random_matrix(rng, 3, p);
      if (m.determinant() == 0) continue;
      CHECK((inverse(m) * m).is_identity());
      CHECK(power(m, 7) * power(m, -3) == power(m, 4));
    }
  }
  CHECK_THROWS_AS(inverse(ModMatrix(5, {{1, 2}, {2, 4}})), ParameterError);
}

TEST_CASE("inverse over a composite modulus") {
  ModMatrix m(4, {{1, 1}, {0, 1}});
  CHECK(inverse(m) == ModMatrix(4, {{1, 3}, {0, 1}}));
  CHECK_THROWS(inverse(ModMatrix(4, {{2, 0}, {0, 2}})));
}

TEST_CASE("determinant") {
  CHECK(ModMatrix(7, {{2, 3}, {1, 4}}).determinant() == 5);
  CHECK(ModMatrix(3, {{0, 0, 2}, {0, 1, 0}, {1, 0, 0}}).determinant() == 1);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    ModMatrix x = random_matrix(rng, 4, 11), y = random_matrix(rng, 4, 11);
    CHECK((x * y).determinant() == (x.determinant() * y.determinant()) % 11);
  }
}

TEST_CASE("group order formula against enumeration") {
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    CHECK(group_order_sl(2, p) == static_cast<unsigned long>(count_sl(2, p)));
    CHECK(group_order_sl(2, p) == static_cast<unsigned long>(p * (p * p - 1)));
  }
  CHECK(group_order_sl(3, 2) == static_cast<unsigned long>(count_sl(3, 2)));
  CHECK(group_order_sl(3, 3) == static_cast<unsigned long>(count_sl(3, 3)));
  CHECK(group_order_sl(3, 3) == 5616);
  CHECK(group_order_sl(4, 3) == 12130560);
  CHECK(group_order_sl(5, 2) == 9999360);
  CHECK_THROWS_AS(group_order_sl(2, 4), ParameterError);
}

TEST_CASE("element codes round-trip") {
  CHECK(code_fits_u64(4, 13));
  CHECK(!code_fits_u64(4, 17));
  CHECK(code_fits(4, 17));
  CHECK(!code_fits(5, 2147483647));
  CHECK(!code_fits(3, 1000003));
  CHECK(code_space(2, 5) == 625);

  std::mt19937_64 rng(11);
  struct Case {
    int n;
    std::uint64_t p;
  };
  for (Case c : {Case{2, 3}, Case{3, 5}, Case{4, 17}, Case{2, 4294967291u}, Case{3, 1000003}}) {
    for (int trial = 0; trial < 2000; ++trial) {
      ModMatrix m = random_matrix(rng, c.n, c.p);
      if (code_fits(c.n, c.p)) CHECK(decode(encode(m), c.n, c.p) == m);
      CHECK(decode_bytes(encode_bytes(m), c.n, c.p) == m);
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    ModMatrix m = random_matrix(rng, 5, 2147483647);
    CHECK(decode_bytes(encode_bytes(m), 5, 2147483647) == m);
  }
  CHECK_THROWS_AS(encode(ModMatrix(5, 2147483647)), UnsupportedError);
}

TEST_CASE("codes are injective and order-preserving on entries") {
  ModMatrix a(3, {{1, 0}, {0, 1}}), b(3, {{2, 0}, {0, 1}});
  CHECK(encode(a) != encode(b));
  CHECK(encode(ModMatrix(3, {{0, 0}, {0, 0}})) == 0);
  CHECK(to_decimal(encode(ModMatrix(3, {{2, 2}, {2, 2}}))) == "80");
  ElementCode big = 1;
  big <<= 100;
  CHECK(to_decimal(big) == "1267650600228229401496703205376");
}

}
