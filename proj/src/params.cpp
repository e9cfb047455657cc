#include "girthlab/params.hpp"

#include <algorithm>

#include "girthlab/error.hpp"
#include "girthlab/primes.hpp"

namespace girthlab {

namespace {

long mod_pos(long v, long m) {
  long r = v % m;
  return r < 0 ? r + m : r;
}

bool is_power_of(std::int64_t value, std::int64_t base, int min_exp) {
  if (value < 1) return false;
  int e = 0;
  while (value % base == 0) {
    value /= base;
    ++e;
  }
  return value == 1 && e >= min_exp;
}

// l = q^{k+shift} + 1 for some k ≥ t.
bool in_power_family(std::int64_t l, std::uint64_t q, int t, int shift) {
  return l >= 2 && is_power_of(l - 1, static_cast<std::int64_t>(q), t + shift);
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

}  // namespace

bool GraphSpec::has(Guarantee g) const {
  return std::any_of(guarantees.begin(), guarantees.end(),
                     [g](const GuaranteeFlag& f) { return f.kind == g; });
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Dim2: return "dim2";
    case Regime::Dim3: return "dim3";
    case Regime::DimGeneral: return "dimGeneral";
  }
  return "?";
}

const char* to_string(Guarantee g) {
  switch (g) {
    case Guarantee::Freeness: return "freeness";
    case Guarantee::Generation: return "generation";
    case Guarantee::GirthBound: return "girth-bound";
  }
  return "?";
}

int base_exponent(std::uint64_t n, std::uint64_t q) {
  if (q < 2 || n < 1) throw ParameterError("base exponent needs q ≥ 2 and n ≥ 1");
  int t = 0;
  std::uint64_t power = 1;
  while (power <= n / q) {
    power *= q;
    ++t;
  }
  return t;
}

GraphSpec validate(int n, std::int64_t l, long a, long b) {
  if (n < 2) throw ParameterError("dimension must be at least 2");
  if (l < 1) throw ParameterError("power l must be at least 1");
  if (a < 2 || b < 2) throw ParameterError("a and b must be at least 2");

  GraphSpec spec;
  spec.n = n;
  spec.l = l;
  spec.a = a;
  spec.b = b;
  auto flag = [&](Guarantee g, const char* clause) { spec.guarantees.push_back({g, clause}); };

  if (n == 2) {
    spec.regime = Regime::Dim2;
    if (l == 1) {
      flag(Guarantee::Freeness, "I.n=2");
      flag(Guarantee::Generation, "II.n=2");
      flag(Guarantee::GirthBound, "III.n=2");
    }
    return spec;
  }

  if (n == 3) {
    spec.regime = Regime::Dim3;
    spec.q = 3;
    const bool free = l >= 4;
    const bool congruent = mod_pos(a, 3) == 1 && mod_pos(b, 3) == 2;
    const bool power_of_four = is_power_of(l, 4, 1);
    if (free) flag(Guarantee::Freeness, "I.n=3");
    if (congruent && power_of_four) {
      flag(Guarantee::Generation, "II.n=3");
      if (free) flag(Guarantee::GirthBound, "III.n=3");
    }
    return spec;
  }

  spec.regime = Regime::DimGeneral;
  const auto divisors = prime_divisors(static_cast<std::uint64_t>(n - 1));
  std::uint64_t chosen = divisors.front();
  for (std::uint64_t q : divisors) {
    if (mod_pos(a, static_cast<long>(q)) == 1 && mod_pos(b, static_cast<long>(q)) == 1) {
      chosen = q;
      break;
    }
  }
  spec.q = chosen;
  for (std::uint64_t q : divisors)
    if (q != chosen) spec.alternative_q.push_back(q);
  const int t = base_exponent(static_cast<std::uint64_t>(n), chosen);
  spec.t = t;

  const bool free = l >= 3 * static_cast<std::int64_t>(n - 1);
  const bool congruent = mod_pos(a, static_cast<long>(chosen)) == 1 &&
                         mod_pos(b, static_cast<long>(chosen)) == 1;
  if (free) flag(Guarantee::Freeness, "I.n>=4");
  if (congruent && (l == 1 || in_power_family(l, chosen, t, 1)))
    flag(Guarantee::Generation, "II.n>=4");
  const int girth_shift = chosen == 2 ? 2 : 1;
  if (congruent && free && in_power_family(l, chosen, t, girth_shift))
    flag(Guarantee::GirthBound, "III.n>=4");
  return spec;
}

std::uint64_t lucas_binom_mod(std::uint64_t alpha, std::uint64_t beta, std::uint64_t q) {
  if (!is_prime(q)) throw ParameterError("Lucas' theorem needs a prime modulus");
  std::uint64_t result = 1;
  while (alpha || beta) {
    const std::uint64_t da = alpha % q;
    const std::uint64_t db = beta % q;
    if (db > da) return 0;
    // C(da, db) mod q with da < q: multiplicative formula with inverses.
    std::uint64_t num = 1;
    std::uint64_t den = 1;
    for (std::uint64_t i = 0; i < db; ++i) {
      num = static_cast<std::uint64_t>(static_cast<unsigned __int128>(num) * (da - i) % q);
      den = static_cast<std::uint64_t>(static_cast<unsigned __int128>(den) * (i + 1) % q);
    }
    // den^{q-2} is the inverse modulo the prime q.
    std::uint64_t inv = 1;
    std::uint64_t base = den;
    std::uint64_t e = q - 2;
    while (e) {
      if (e & 1) inv = static_cast<std::uint64_t>(static_cast<unsigned __int128>(inv) * base % q);
      base = static_cast<std::uint64_t>(static_cast<unsigned __int128>(base) * base % q);
      e >>= 1;
    }
    const std::uint64_t digit = static_cast<std::uint64_t>(static_cast<unsigned __int128>(num) * inv % q);
    result = static_cast<std::uint64_t>(static_cast<unsigned __int128>(result) * digit % q);
    alpha /= q;
    beta /= q;
  }
  return result % q;
}

std::vector<std::uint64_t> admissible_exponents(int n, std::uint64_t q, int count) {
  if (!is_prime(q)) throw ParameterError("q must be prime");
  if (n < 2) throw ParameterError("dimension must be at least 2");
  if (count < 1) throw ParameterError("count must be at least 1");
  if ((static_cast<std::uint64_t>(n) - 1) % q != 0) throw ParameterError("n must be ≡ 1 (mod q)");

  const int t = base_exponent(static_cast<std::uint64_t>(n), q);
  const std::uint64_t floor = 3 * static_cast<std::uint64_t>(n - 1);
  std::vector<std::uint64_t> out;
  std::uint64_t qj = 1;
  for (int j = 0; j <= t; ++j) qj *= q;
  while (static_cast<int>(out.size()) < count) {
    const std::uint64_t k = qj + 1;
    bool ok = k >= floor && k % q == 1 % q;
    for (int i = 2; ok && i <= n - 1; ++i) ok = lucas_binom_mod(k, static_cast<std::uint64_t>(i), q) == 0;
    if (ok) out.push_back(k);
    if (static_cast<int>(out.size()) == count) break;
    if (qj > (std::uint64_t{1} << 62) / q) throw ParameterError("admissible exponent overflows 64 bits");
    qj *= q;
  }
  return out;
}

}  // namespace girthlab
