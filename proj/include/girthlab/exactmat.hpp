#pragma once

// Square matrices over the integers with arbitrary-precision entries, the
// unitriangular "magic" pair, closed-form powers and two-letter words.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace girthlab {

using BigInt = mpz_class;

class ExactMatrix {
 public:
  ExactMatrix() = default;
  /// Zero matrix of dimension n.
  explicit ExactMatrix(int n);
  /// Row-major construction; `rows` must be square.
  ExactMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static ExactMatrix identity(int n);

  int dim() const noexcept { return n_; }

  BigInt& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * n_ + j)]; }
  const BigInt& operator()(int i, int j) const {
    return e_[static_cast<std::size_t>(i * n_ + j)];
  }

  ExactMatrix transpose() const;
  bool is_identity() const;
  /// Fraction-free (Bareiss) determinant.
  BigInt determinant() const;
  /// Inverse of a unimodular matrix (det = ±1); throws otherwise.
  ExactMatrix inverse() const;
  /// Largest absolute value of any entry.
  BigInt max_abs_entry() const;

  friend ExactMatrix operator*(const ExactMatrix& lhs, const ExactMatrix& rhs);
  friend bool operator==(const ExactMatrix& lhs, const ExactMatrix& rhs);

  std::string str() const;

 private:
  int n_ = 0;
  std::vector<BigInt> e_;
};

/// The generator pair: A upper unitriangular with superdiagonal a,
/// B lower unitriangular with subdiagonal b. Requires n ≥ 2 and a, b ≥ 2.
std::pair<ExactMatrix, ExactMatrix> magic_pair(int n, long a, long b);

/// Same shape as magic_pair with no lower bound on a, b (for a = b = 1 and
/// other non-free control cases). Requires n ≥ 2.
std::pair<ExactMatrix, ExactMatrix> unitriangular_pair(int n, long a, long b);

/// k(k-1)...(k-r+1)/r!, valid for negative k.
BigInt generalized_binomial(std::int64_t k, int r);

/// M^k for M unitriangular with a single constant nonzero off-diagonal band
/// adjacent to the diagonal; entry (i, i+d) of the upper case is C(k, d)·c^d.
/// Throws UnsupportedError for any other shape.
ExactMatrix power_closed_form(const ExactMatrix& m, std::int64_t k);

/// M^k by binary exponentiation (inverse first for negative k).
ExactMatrix power_generic(const ExactMatrix& m, std::int64_t k);

bool is_magic(const ExactMatrix& m);

enum class Letter : std::uint8_t { X = 0, Y = 1 };

struct Syllable {
  Letter letter;
  std::int64_t exponent;
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

/// Freely reduced word in two letters, stored as maximal syllables.
class Word {
 public:
  Word() = default;
  static Word of(Letter letter, std::int64_t exponent = 1);
  /// Parses e.g. "X^2 Y^-3 X", "XYX^-1" or "1" (empty word).
  static Word parse(std::string_view text);

  /// Appends letter^exponent, merging with or cancelling the last syllable.
  void push_back(Letter letter, std::int64_t exponent);

  Word inverse() const;
  Word power(std::int64_t k) const;
  Word& operator*=(const Word& rhs);
  friend Word operator*(Word lhs, const Word& rhs) { return lhs *= rhs; }
  friend bool operator==(const Word&, const Word&) = default;

  const std::vector<Syllable>& syllables() const noexcept { return syl_; }
  bool empty() const noexcept { return syl_.empty(); }
  /// Sum of |exponent| over syllables.
  std::uint64_t length() const;
  /// Exponent sum of one letter (the abelianisation coordinate).
  std::int64_t exponent_sum(Letter letter) const;
  std::string str() const;

 private:
  std::vector<Syllable> syl_;
};

/// Exact product of the word with X, Y substituted. Closed-form powers are
/// used when X, Y are magic, generic exponentiation otherwise.
ExactMatrix eval_word(const Word& w, const ExactMatrix& x, const ExactMatrix& y);

struct GrowthBound {
  BigInt actual;       ///< |P11| of the evaluated dimension-2 word
  BigInt pair_bound;  ///< M^{2k}(ab+1)^k; holds for k = 1, fails from k = 2 on
  BigInt sound_bound;  ///< ∏ (|l_i|a+1)(|m_i|b+1), an ∞-norm bound that always holds
  int pairs = 0;       ///< k
};

/// |P11| of the word evaluated at the dimension-2 pair A, B, with the growth
/// bounds over its syllable pairs A^{l_i}B^{m_i} (a word starting with Y has
/// l_1 = 0). The bound is stated for dimension 2 only: n ≠ 2 throws
/// UnsupportedError.
GrowthBound entry_growth_bound(const Word& w, long a, long b, int n = 2);

}  // namespace girthlab
