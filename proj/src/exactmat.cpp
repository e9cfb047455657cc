#include "girthlab/exactmat.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "girthlab/error.hpp"

namespace girthlab {

ExactMatrix::ExactMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n * n)) {
  if (n < 1) throw ParameterError("matrix dimension must be positive");
}

ExactMatrix::ExactMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : ExactMatrix(static_cast<int>(rows.size())) {
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_) throw ParameterError("matrix rows must be square");
    int j = 0;
    for (long v : row) (*this)(i, j++) = v;
    ++i;
  }
}

ExactMatrix ExactMatrix::identity(int n) {
  ExactMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool ExactMatrix::is_identity() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

BigInt ExactMatrix::determinant() const {
  std::vector<BigInt> a = e_;
  auto at = [&](int i, int j) -> BigInt& { return a[static_cast<std::size_t>(i * n_ + j)]; };
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n_ - 1; ++k) {
    if (at(k, k) == 0) {
      int swap = -1;
      for (int r = k + 1; r < n_; ++r)
        if (at(r, k) != 0) {
          swap = r;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < n_; ++j) std::swap(at(k, j), at(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n_; ++i) {
      for (int j = k + 1; j < n_; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j));
        mpz_divexact(at(i, j).get_mpz_t(), at(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = at(k, k);
  }
  return sign * at(n_ - 1, n_ - 1);
}

ExactMatrix ExactMatrix::inverse() const {
  const BigInt det = determinant();
  if (det != 1 && det != -1) throw ParameterError("exact inverse requires determinant ±1");
  if (n_ == 1) return ExactMatrix{{det.get_si()}};
  // adj(M)_{ji} = (-1)^{i+j} det(minor_{ij}); M^{-1} = adj(M)·det.
  ExactMatrix inv(n_);
  ExactMatrix minor(n_ - 1);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      for (int r = 0, mr = 0; r < n_; ++r) {
        if (r == i) continue;
        for (int c = 0, mc = 0; c < n_; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = (*this)(r, c);
        }
        ++mr;
      }
      BigInt cof = minor.determinant();
      if ((i + j) % 2) cof = -cof;
      inv(j, i) = cof * det;
    }
  }
  return inv;
}

BigInt ExactMatrix::max_abs_entry() const {
  BigInt best = 0;
  for (const auto& v : e_) {
    BigInt a = abs(v);
    if (a > best) best = a;
  }
  return best;
}

ExactMatrix operator*(const ExactMatrix& lhs, const ExactMatrix& rhs) {
  if (lhs.n_ != rhs.n_) throw ParameterError("dimension mismatch in matrix product");
  const int n = lhs.n_;
  ExactMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const BigInt& l = lhs(i, k);
      if (l == 0) continue;
      for (int j = 0; j < n; ++j) out(i, j) += l * rhs(k, j);
    }
  return out;
}

bool operator==(const ExactMatrix& lhs, const ExactMatrix& rhs) {
  return lhs.n_ == rhs.n_ && lhs.e_ == rhs.e_;
}

std::string ExactMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < n_; ++i) {
    if (i) os << ", ";
    os << '[';
    for (int j = 0; j < n_; ++j) {
      if (j) os << ", ";
      os << (*this)(i, j).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

std::pair<ExactMatrix, ExactMatrix> unitriangular_pair(int n, long a, long b) {
  if (n < 2) throw ParameterError("dimension must be at least 2");
  ExactMatrix upper = ExactMatrix::identity(n);
  ExactMatrix lower = ExactMatrix::identity(n);
  for (int i = 0; i + 1 < n; ++i) {
    upper(i, i + 1) = a;
    lower(i + 1, i) = b;
  }
  return {std::move(upper), std::move(lower)};
}

std::pair<ExactMatrix, ExactMatrix> magic_pair(int n, long a, long b) {
  if (n < 2) throw ParameterError("dimension must be at least 2");
  if (a < 2 || b < 2) throw ParameterError("a and b must be at least 2");
  return unitriangular_pair(n, a, b);
}

BigInt generalized_binomial(std::int64_t k, int r) {
  if (r < 0) return 0;
  BigInt num = 1;
  BigInt den = 1;
  for (int i = 0; i < r; ++i) {
    num *= BigInt(static_cast<long>(k - i));
    den *= i + 1;
  }
  BigInt out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

namespace {

enum class Band { Upper, Lower };

// Returns the band orientation and constant of a magic-shaped matrix.
bool magic_shape(const ExactMatrix& m, Band& band, BigInt& c) {
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    if (m(i, i) != 1) return false;
  bool upper_ok = true;
  bool lower_ok = true;
  const BigInt cu = n > 1 ? m(0, 1) : BigInt(0);
  const BigInt cl = n > 1 ? m(1, 0) : BigInt(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const BigInt& v = m(i, j);
      if (j == i + 1) {
        if (v != cu) upper_ok = false;
      } else if (v != 0) {
        upper_ok = false;
      }
      if (i == j + 1) {
        if (v != cl) lower_ok = false;
      } else if (v != 0) {
        lower_ok = false;
      }
    }
  if (upper_ok) {
    band = Band::Upper;
    c = cu;
    return true;
  }
  if (lower_ok) {
    band = Band::Lower;
    c = cl;
    return true;
  }
  return false;
}

}  // namespace

bool is_magic(const ExactMatrix& m) {
  Band band;
  BigInt c;
  return magic_shape(m, band, c);
}

ExactMatrix power_closed_form(const ExactMatrix& m, std::int64_t k) {
  Band band;
  BigInt c;
  if (!magic_shape(m, band, c))
    throw UnsupportedError("closed-form power needs a unitriangular single-band matrix");
  const int n = m.dim();
  ExactMatrix out = ExactMatrix::identity(n);
  BigInt cpow = 1;
  for (int d = 1; d < n; ++d) {
    cpow *= c;
    const BigInt v = generalized_binomial(k, d) * cpow;
    for (int i = 0; i + d < n; ++i) {
      if (band == Band::Upper)
        out(i, i + d) = v;
      else
        out(i + d, i) = v;
    }
  }
  return out;
}

ExactMatrix power_generic(const ExactMatrix& m, std::int64_t k) {
  ExactMatrix base = k < 0 ? m.inverse() : m;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  ExactMatrix out = ExactMatrix::identity(m.dim());
  while (e) {
    if (e & 1) out = out * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Word

Word Word::of(Letter letter, std::int64_t exponent) {
  Word w;
  w.push_back(letter, exponent);
  return w;
}

void Word::push_back(Letter letter, std::int64_t exponent) {
  if (exponent == 0) return;
  if (!syl_.empty() && syl_.back().letter == letter) {
    syl_.back().exponent += exponent;
    if (syl_.back().exponent == 0) syl_.pop_back();
    return;
  }
  syl_.push_back({letter, exponent});
}

Word Word::parse(std::string_view text) {
  Word w;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*'))
      ++i;
  };
  skip();
  if (text.substr(i) == "1") return w;
  while (i < text.size()) {
    const char ch = text[i];
    Letter letter;
    if (ch == 'X' || ch == 'x' || ch == 'A' || ch == 'a')
      letter = Letter::X;
    else if (ch == 'Y' || ch == 'y' || ch == 'B' || ch == 'b')
      letter = Letter::Y;
    else
      throw ParameterError("unexpected character in word: " + std::string(1, ch));
    ++i;
    std::int64_t e = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool brace = i < text.size() && (text[i] == '{' || text[i] == '(');
      if (brace) ++i;
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (start == i || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
        throw ParameterError("missing exponent in word");
      e = std::strtoll(std::string(text.substr(start, i - start)).c_str(), nullptr, 10);
      if (brace) {
        if (i >= text.size() || (text[i] != '}' && text[i] != ')'))
          throw ParameterError("unbalanced exponent brace in word");
        ++i;
      }
    }
    w.push_back(letter, e);
    skip();
  }
  return w;
}

Word Word::inverse() const {
  Word w;
  for (auto it = syl_.rbegin(); it != syl_.rend(); ++it) w.push_back(it->letter, -it->exponent);
  return w;
}

Word Word::power(std::int64_t k) const {
  Word base = k < 0 ? inverse() : *this;
  Word out;
  for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) out *= base;
  return out;
}

Word& Word::operator*=(const Word& rhs) {
  for (const auto& s : rhs.syl_) push_back(s.letter, s.exponent);
  return *this;
}

std::uint64_t Word::length() const {
  std::uint64_t len = 0;
  for (const auto& s : syl_) len += static_cast<std::uint64_t>(s.exponent < 0 ? -s.exponent : s.exponent);
  return len;
}

std::int64_t Word::exponent_sum(Letter letter) const {
  std::int64_t sum = 0;
  for (const auto& s : syl_)
    if (s.letter == letter) sum += s.exponent;
  return sum;
}

std::string Word::str() const {
  if (syl_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& s : syl_) {
    if (!first) os << ' ';
    first = false;
    os << (s.letter == Letter::X ? 'X' : 'Y');
    if (s.exponent != 1) os << '^' << s.exponent;
  }
  return os.str();
}

ExactMatrix eval_word(const Word& w, const ExactMatrix& x, const ExactMatrix& y) {
  if (x.dim() != y.dim()) throw ParameterError("word evaluation needs generators of equal dimension");
  const bool closed = is_magic(x) && is_magic(y);
  ExactMatrix out = ExactMatrix::identity(x.dim());
  for (const auto& s : w.syllables()) {
    const ExactMatrix& g = s.letter == Letter::X ? x : y;
    out = out * (closed ? power_closed_form(g, s.exponent) : power_generic(g, s.exponent));
  }
  return out;
}

GrowthBound entry_growth_bound(const Word& w, long a, long b, int n) {
  if (n != 2) throw UnsupportedError("entry growth bound is stated for dimension 2 only");
  if (a < 1 || b < 1) throw ParameterError("a and b must be positive");
  auto [mat_a, mat_b] = unitriangular_pair(2, a, b);
  GrowthBound out;
  out.actual = abs(eval_word(w, mat_a, mat_b)(0, 0));

  // Group syllables into pairs (X^l, Y^m); a leading Y gets l = 0.
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  for (const auto& s : w.syllables()) {
    const std::int64_t e = s.exponent < 0 ? -s.exponent : s.exponent;
    if (s.letter == Letter::X || pairs.empty() || pairs.back().second != 0)
      pairs.push_back({0, 0});
    (s.letter == Letter::X ? pairs.back().first : pairs.back().second) = e;
  }
  std::int64_t max_exp = 0;
  out.sound_bound = 1;
  for (const auto& [l, m] : pairs) {
    max_exp = std::max({max_exp, l, m});
    out.sound_bound *= BigInt(static_cast<long>(l * a + 1)) * BigInt(static_cast<long>(m * b + 1));
  }
  out.pairs = static_cast<int>(pairs.size());
  BigInt mpow;
  mpz_pow_ui(mpow.get_mpz_t(), BigInt(static_cast<long>(max_exp)).get_mpz_t(),
             static_cast<unsigned long>(2 * out.pairs));
  BigInt abpow;
  mpz_pow_ui(abpow.get_mpz_t(), BigInt(a * b + 1).get_mpz_t(), static_cast<unsigned long>(out.pairs));
  out.pair_bound = mpow * abpow;
  return out;
}

}  // namespace girthlab
