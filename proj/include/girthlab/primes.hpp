#pragma once

#include <cstdint>
#include <vector>

namespace girthlab {

/// Deterministic Miller–Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Which primes to iterate: an explicit list, or the closed range [lo, hi].
struct PrimeSelector {
  std::vector<std::uint64_t> explicit_list;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  /// Skip p dividing any of these (the degenerate reductions a, b ≡ 0).
  std::vector<long> skip_divisors_of;
  /// Optionally skip p with value ≡ 1 (mod p) for any listed value.
  std::vector<long> skip_congruent_one;
};

/// Ascending, duplicate-free primes matching the selector. An explicit list
/// containing a non-prime throws ParameterError; an empty result is allowed.
std::vector<std::uint64_t> prime_iter(const PrimeSelector& selector);

}  // namespace girthlab
