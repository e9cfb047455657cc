// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <gmpxx.h>

#include "girthlab/cayley.hpp"
#include "girthlab/error.hpp"
#include "girthlab/exactmat.hpp"
#include "girthlab/modmat.hpp"
#include "girthlab/params.hpp"
#include "girthlab/primes.hpp"
#include "girthlab/report.hpp"
#include "girthlab/spectral.hpp"
#include "girthlab/words.hpp"

using namespace girthlab;

namespace {

struct Check {
  std::ostringstream notes;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Check&)>& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!c.ok) ++failures;
  std::printf("%s %d %s (%.1fs)%s\n", c.ok ? "PASS" : "FAIL", id, name.c_str(), secs, c.notes.str().c_str());
  std::fflush(stdout);
}

ExactMatrix a_power(int n, long a, std::int64_t l) { return power_closed_form(unitriangular_pair(n, a, 1).first, l); }
ExactMatrix b_power(int n, long b, std::int64_t l) { return power_closed_form(unitriangular_pair(n, 1, b).second, l); }

bool coeffs(const std::vector<BigInt>& c, std::initializer_list<const char*> expected) {
  if (c.size() != expected.size()) return false;
  std::size_t i = 0;
  for (const char* e : expected)
    if (c[i++] != BigInt(e)) return false;
  return true;
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = lo; p <= hi; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

}  // namespace

int main() {
  criterion(1, "Gram spectra and reference spectral bounds", [](Check& c) {
    const ExactMatrix x3 = a_power(3, 2, 4), y3 = b_power(3, 4, 4);
    const ExactMatrix x4 = a_power(4, 4, 10), y4 = b_power(4, 7, 10);
    c.expect(coeffs(gram_char_poly(x3), {"-1", "707", "-1731", "1"}), "char poly n=3 a=2");
    c.expect(coeffs(gram_char_poly(y3), {"-1", "9731", "-26115", "1"}), "char poly n=3 b=4");
    c.expect(coeffs(gram_char_poly(x4), {"1", "-60024004", "45502704006", "-199800004", "1"}), "char poly n=4 a=4");
    c.expect(coeffs(gram_char_poly(y4), {"1", "-1703884354", "3949339922331", "-5708752354", "1"}),
             "char poly n=4 b=7");
    const double lam3 = gram_lambda_max(x3), beta3 = gram_lambda_max(y3);
    const double lam4 = gram_lambda_max(x4), beta4 = gram_lambda_max(y4);
    c.expect(std::abs(lam3 - 704.54) <= 0.01, "lambda_max 704.54");
    c.expect(std::abs(beta3 - 9728.31) <= 0.01, "beta_max 9728.31");
    c.expect(std::sqrt(lam3) < 27 && std::sqrt(beta3) < 99, "sqrt bounds 27, 99");
    c.expect(std::sqrt(lam4) < 10957 && std::sqrt(beta4) < 58376, "sqrt bounds 10957, 58376");
    c.notes << " lambda=" << format_double(lam3) << " beta=" << format_double(beta3)
            << " sqrt(lambda4)=" << format_double(std::sqrt(lam4)) << " sqrt(beta4)=" << format_double(std::sqrt(beta4));
  });

  criterion(2, "generation by closure order", [](Check& c) {
    for (std::uint64_t p : primes_between(3, 61)) {
      const std::uint64_t order = closure(family_generators({2, 1, 2, 2}, p));
      c.expect(order == p * (p * p - 1), "n=2 p=" + std::to_string(p));
    }
    c.expect(closure(family_generators({3, 4, 4, 2}, 3)) == 5616, "n=3 p=3 order 5616");
    for (std::uint64_t p : {5u, 7u}) {
      const std::uint64_t order = closure(family_generators({3, 4, 4, 2}, p));
      const std::uint64_t full = group_order_sl(3, p).get_ui();
      c.notes << " n=3,p=" << p << ": " << order << (order == full ? " (full)" : " (proper subgroup, reported)");
    }
  });

  criterion(3, "girth agrees with shortest identity word and the spectral bound", [](Check& c) {
    const FamilySpec spec{2, 1, 2, 2};
    for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
      const int g = girth(family_generators(spec, p));
      const auto w = identity_word_length_mod_p(spec, p, 14);
      const int bound = girth_lower_bound(spec, p).bound_reported;
      c.expect(w.has_value() && *w == g, "word length at p=" + std::to_string(p));
      c.expect(g >= bound, "spectral bound at p=" + std::to_string(p));
      c.notes << " p" << p << ":g=" << g << ",b=" << bound;
    }
  });

  criterion(4, "diameter-by-girth ratio is finite, girth grows with log p", [](Check& c) {
    const auto rows = dg_table({2, 1, 2, 2}, primes_between(3, 61));
    double worst = 0.0, min_girth_log = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      c.expect(r.ok() && r.girth.has_value(), "row p=" + std::to_string(r.modulus));
      if (!r.ok() || !r.girth) continue;
      c.expect(std::isfinite(r.dg_ratio()), "finite ratio p=" + std::to_string(r.modulus));
      worst = std::max(worst, r.dg_ratio());
      min_girth_log = std::min(min_girth_log, *r.girth / std::log(static_cast<double>(r.modulus)));
    }
    c.expect(min_girth_log > 0.0, "positive girth/log p");
    c.notes << " max_ratio=" << format_double(worst) << " min_girth_over_log_p=" << format_double(min_girth_log);
  });

  criterion(5, "freeness scans", [](Check& c) {
    struct Case {
      int n;
      std::int64_t l;
      long a, b;
      int len;
    };
    for (Case k : {Case{2, 1, 2, 2, 12}, Case{3, 4, 4, 2, 10}, Case{4, 10, 4, 7, 8}}) {
      const FreenessReport r = freeness_scan(k.n, k.l, k.a, k.b, k.len);
      c.expect(r.free_up_to_bound(), "free n=" + std::to_string(k.n));
      c.notes << " n=" << k.n << ":" << r.words_checked << " words";
    }
    const FreenessReport one = freeness_scan(2, 1, 1, 1, 12);
    c.expect(!one.violations.empty(), "relator for a=b=1");
    if (!one.violations.empty()) c.notes << " relator " << one.violations.front().str();
  });

  criterion(6, "generation recipes replay", [](Check& c) {
    const RecipeReport sl3 = replay_recipe_sl3_mod3(4, 2);
    for (const auto& s : sl3.steps) c.expect(s.matches, "sl3 step " + s.label);
    c.expect(sl3.full(), "sl3 closure");
    for (auto [q, t] : {std::pair<std::uint64_t, int>{3, 1}, {2, 2}}) {
      const RecipeReport r = replay_recipe_qt(q, t);
      for (const auto& s : r.steps) c.expect(s.matches, "qt step " + s.label);
      c.expect(r.full(), "qt closure q=" + std::to_string(q));
      c.notes << " q=" << q << ",t=" << t << ": " << r.closure_order << (r.closure_partial ? " partial" : "");
    }
  });

  criterion(7, "Lucas digits and admissible exponents", [](Check& c) {
    for (unsigned long q : {2ul, 3ul, 5ul, 7ul})
      for (unsigned long alpha = 0; alpha <= 200; ++alpha)
        for (unsigned long beta = 0; beta <= alpha; ++beta) {
          mpz_class direct;
          mpz_bin_uiui(direct.get_mpz_t(), alpha, beta);
          if (lucas_binom_mod(alpha, beta, q) != mpz_class(direct % q).get_ui()) {
            c.expect(false, "Lucas at (" + std::to_string(alpha) + "," + std::to_string(beta) + ")");
            return;
          }
        }
    const auto ks = admissible_exponents(4, 3, 3);
    c.expect(ks == std::vector<std::uint64_t>{10, 28, 82}, "exponents (10, 28, 82)");
    const auto [a, b] = unitriangular_pair(4, 4, 7);
    const ModMatrix unit = reduce(unitriangular_pair(4, 1, 1).first, 3);
    for (auto k : ks) c.expect(reduce(power_closed_form(a, static_cast<std::int64_t>(k)), 3) == unit, "A^k mod 3");
  });

  criterion(8, "index-m subgroups give 2(m+1)-regular variants", [](Check& c) {
    for (int m = 1; m <= 6; ++m) {
      const SubgroupGenerators g = schreier_generators(m);
      c.expect(g.rank == m + 1, "rank at m=" + std::to_string(m));
      c.expect(stallings_index(g.generators) == m, "index at m=" + std::to_string(m));
    }
    const auto base = family_generators({2, 1, 2, 2}, 13);
    std::vector<ModMatrix> images;
    for (const Word& w : schreier_generators(2).generators) images.push_back(eval_word_mod(w, base[0], base[1]));
    const CayleyStats s = cayley_stats(images);
    c.expect(s.ok() && s.order == 2184, "order 2184");
    c.expect(s.degree == 6, "6-regular");
    c.expect(s.girth.has_value() && *s.girth >= 3, "girth at least 3");
    c.expect(std::isfinite(s.dg_ratio()), "finite ratio");
    c.notes << " order=" << s.order << " girth=" << (s.girth ? *s.girth : 0) << " diameter=" << s.diameter;
  });

  criterion(9, "second adjacency eigenvalue", [](Check& c) {
    const std::vector<ModMatrix> cycle{ModMatrix(2, {{1, 1}, {0, 1}}), ModMatrix(2, {{1, 0}, {1, 1}})};
    const std::vector<ModMatrix> k4{ModMatrix(3, {{2, 0}, {0, 1}}), ModMatrix(3, {{1, 0}, {0, 2}}),
                                    ModMatrix(3, {{2, 0}, {0, 2}})};
    c.expect(std::abs(second_eigenvalue(cycle).second_eigenvalue - 1.0) <= 1e-6, "6-cycle");
    c.expect(std::abs(second_eigenvalue(k4).second_eigenvalue + 1.0) <= 1e-6, "K4");
    for (std::uint64_t p : primes_between(5, 23)) {
      const SpectralGapReport r = second_eigenvalue(family_generators({2, 1, 2, 2}, p));
      c.expect(r.second_eigenvalue < 4.0, "below degree at p=" + std::to_string(p));
      c.notes << " p" << p << "=" << format_double(std::round(r.second_eigenvalue * 1e6) / 1e6);
    }
  });

  return failures;
}
