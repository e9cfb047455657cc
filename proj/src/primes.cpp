#include "girthlab/primes.hpp"

#include <algorithm>

#include "girthlab/error.hpp"

namespace girthlab {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_iter(const PrimeSelector& sel) {
  std::vector<std::uint64_t> candidates;
  if (!sel.explicit_list.empty()) {
    for (std::uint64_t p : sel.explicit_list) {
      if (!is_prime(p)) throw ParameterError("not a prime: " + std::to_string(p));
      candidates.push_back(p);
    }
  } else {
    if (sel.lo < 2 || sel.hi < 2) throw ParameterError("prime range bounds must be at least 2");
    for (std::uint64_t p = sel.lo; p <= sel.hi; ++p)
      if (is_prime(p)) candidates.push_back(p);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto residue = [](long v, std::uint64_t p) {
    const long long r = static_cast<long long>(v) % static_cast<long long>(p);
    return r < 0 ? r + static_cast<long long>(p) : r;
  };
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : candidates) {
    bool keep = true;
    for (long v : sel.skip_divisors_of)
      if (residue(v, p) == 0) keep = false;
    for (long v : sel.skip_congruent_one)
      if (residue(v, p) == 1) keep = false;
    if (keep) out.push_back(p);
  }
  return out;
}

}  // namespace girthlab
