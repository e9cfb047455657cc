#pragma once

// Parameter regimes for the generator pair (A^l, B^l) and the base-q
// exponent machinery built on Lucas' theorem.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace girthlab {

enum class Regime { Dim2, Dim3, DimGeneral };

enum class Guarantee { Freeness, Generation, GirthBound };

struct GuaranteeFlag {
  Guarantee kind;
  std::string clause;  ///< e.g. "I.n>=4", "II.n=3", "III.n=2"
};

struct GraphSpec {
  int n = 0;
  std::int64_t l = 1;
  long a = 0;
  long b = 0;
  Regime regime = Regime::Dim2;
  std::optional<std::uint64_t> q;   ///< auxiliary prime, n ≥ 3
  std::optional<int> t;             ///< q^t ≤ n < q^{t+1}, n ≥ 4
  std::vector<std::uint64_t> alternative_q;  ///< other primes dividing n-1
  std::vector<GuaranteeFlag> guarantees;

  bool has(Guarantee g) const;
};

const char* to_string(Regime r);
const char* to_string(Guarantee g);

/// Evaluates the parameter rules. A tuple outside every proven regime comes
/// back with an empty guarantee list; only n < 2, l < 1 or a, b < 2 throw.
GraphSpec validate(int n, std::int64_t l, long a, long b);

/// C(alpha, beta) mod q as the product of digitwise binomials in base q.
std::uint64_t lucas_binom_mod(std::uint64_t alpha, std::uint64_t beta, std::uint64_t q);

/// Largest t with q^t ≤ n.
int base_exponent(std::uint64_t n, std::uint64_t q);

/// The first `count` exponents k = q^j + 1 (j ≥ t+1) with k ≥ 3(n-1) and
/// C(k, i) ≡ 0 (mod q) for 2 ≤ i ≤ n-1; each satisfies A^k ≡ A (mod q)
/// when a ≡ 1 (mod q). Requires n ≡ 1 (mod q) and q prime.
std::vector<std::uint64_t> admissible_exponents(int n, std::uint64_t q, int count);

}  // namespace girthlab
