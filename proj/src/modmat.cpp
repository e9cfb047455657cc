#include "girthlab/modmat.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <sstream>

#include "girthlab/error.hpp"
#include "girthlab/primes.hpp"

namespace girthlab {

namespace {

constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 32;

std::uint32_t residue(long long v, std::uint64_t m) {
  long long r = v % static_cast<long long>(m);
  if (r < 0) r += static_cast<long long>(m);
  return static_cast<std::uint32_t>(r);
}

// Determinant by expansion along rows, memoised over the set of used columns.
std::uint64_t det_mod(const std::vector<std::uint32_t>& e, int n, std::uint64_t m) {
  if (n > 10) throw UnsupportedError("modular determinant supports n ≤ 10");
  const std::size_t full = std::size_t{1} << n;
  // value[mask] = signed sum over partial permutations of the first
  // popcount(mask) rows into columns `mask`.
  std::vector<std::uint64_t> value(full, 0);
  value[0] = 1 % m;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (value[mask] == 0) continue;
    const int row = __builtin_popcountll(mask);
    if (row == n) continue;
    int above = 0;  // columns of `mask` to the right of c, for the sign
    for (int c = n - 1; c >= 0; --c) {
      if (mask & (std::size_t{1} << c)) {
        ++above;
        continue;
      }
      const std::uint64_t entry = e[static_cast<std::size_t>(row * n + c)];
      if (entry == 0) continue;
      std::uint64_t term = static_cast<std::uint64_t>(
          static_cast<unsigned __int128>(value[mask]) * entry % m);
      if (above % 2) term = (m - term) % m;
      auto& slot = value[mask | (std::size_t{1} << c)];
      slot = (slot + term) % m;
    }
  }
  return value[full - 1];
}

long long inverse_mod(long long a, long long m) {
  long long g = m, x = 0, x1 = 1, r = a;
  while (r) {
    long long q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) return -1;
  x %= m;
  return x < 0 ? x + m : x;
}

}  // namespace

ModMatrix::ModMatrix(int n, std::uint64_t modulus)
    : n_(n), m_(modulus), e_(static_cast<std::size_t>(n * n), 0) {
  if (n < 1) throw ParameterError("matrix dimension must be positive");
  if (modulus < 2 || modulus >= kMaxModulus) throw ParameterError("modulus must lie in [2, 2^32)");
}

ModMatrix::ModMatrix(std::uint64_t modulus, std::initializer_list<std::initializer_list<long>> rows)
    : ModMatrix(static_cast<int>(rows.size()), modulus) {
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_) throw ParameterError("matrix rows must be square");
    int j = 0;
    for (long v : row) set(i, j++, v);
    ++i;
  }
}

ModMatrix ModMatrix::identity(int n, std::uint64_t modulus) {
  ModMatrix id(n, modulus);
  for (int i = 0; i < n; ++i) id.set(i, i, 1);
  return id;
}

void ModMatrix::set(int i, int j, long long value) {
  e_[static_cast<std::size_t>(i * n_ + j)] = residue(value, m_);
}

bool ModMatrix::is_identity() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if ((*this)(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

ModMatrix ModMatrix::transpose() const {
  ModMatrix t(n_, m_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t.e_[static_cast<std::size_t>(j * n_ + i)] = (*this)(i, j);
  return t;
}

std::uint64_t ModMatrix::determinant() const { return det_mod(e_, n_, m_); }

ModMatrix operator*(const ModMatrix& lhs, const ModMatrix& rhs) {
  if (lhs.n_ != rhs.n_ || lhs.m_ != rhs.m_)
    throw ParameterError("dimension or modulus mismatch in matrix product");
  const int n = lhs.n_;
  const std::uint64_t m = lhs.m_;
  ModMatrix out(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::uint64_t acc = 0;
      for (int k = 0; k < n; ++k) acc = (acc + std::uint64_t{lhs(i, k)} * rhs(k, j)) % m;
      out.e_[static_cast<std::size_t>(i * n + j)] = static_cast<std::uint32_t>(acc);
    }
  return out;
}

std::string ModMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < n_; ++i) {
    if (i) os << ", ";
    os << '[';
    for (int j = 0; j < n_; ++j) {
      if (j) os << ", ";
      os << (*this)(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

ModMatrix reduce(const ExactMatrix& src, std::uint64_t modulus) {
  ModMatrix out(src.dim(), modulus);
  const BigInt mod(static_cast<unsigned long>(modulus));
  BigInt r;
  for (int i = 0; i < src.dim(); ++i)
    for (int j = 0; j < src.dim(); ++j) {
      mpz_fdiv_r(r.get_mpz_t(), src(i, j).get_mpz_t(), mod.get_mpz_t());
      out.set(i, j, static_cast<long long>(r.get_ui()));
    }
  return out;
}

ModMatrix inverse(const ModMatrix& mat) {
  const int n = mat.dim();
  const std::uint64_t m = mat.modulus();
  const long long det_inv =
      inverse_mod(static_cast<long long>(mat.determinant()), static_cast<long long>(m));
  if (det_inv < 0) throw ParameterError("matrix is not invertible modulo " + std::to_string(m));
  ModMatrix out(n, m);
  if (n == 1) {
    out.set(0, 0, det_inv);
    return out;
  }
  std::vector<std::uint32_t> minor(static_cast<std::size_t>((n - 1) * (n - 1)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::size_t idx = 0;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0; c < n; ++c)
          if (c != j) minor[idx++] = mat(r, c);
      }
      std::uint64_t cof = det_mod(minor, n - 1, m);
      if ((i + j) % 2) cof = (m - cof) % m;
      out.set(j, i,
              static_cast<long long>(static_cast<unsigned __int128>(cof) *
                                     static_cast<std::uint64_t>(det_inv) % m));
    }
  return out;
}

ModMatrix power(const ModMatrix& mat, std::int64_t k) {
  ModMatrix base = k < 0 ? inverse(mat) : mat;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  ModMatrix out = ModMatrix::identity(mat.dim(), mat.modulus());
  while (e) {
    if (e & 1) out = out * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return out;
}

BigInt group_order_sl(int n, std::uint64_t p) {
  if (n < 1) throw ParameterError("dimension must be positive");
  if (!is_prime(p)) throw ParameterError("group order formula needs a prime modulus");
  const BigInt q(static_cast<unsigned long>(p));
  BigInt order;
  mpz_pow_ui(order.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n * (n - 1) / 2));
  for (int i = 2; i <= n; ++i) {
    BigInt qi;
    mpz_pow_ui(qi.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(i));
    order *= qi - 1;
  }
  return order;
}

BigInt code_space(int n, std::uint64_t modulus) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), BigInt(static_cast<unsigned long>(modulus)).get_mpz_t(),
             static_cast<unsigned long>(n * n));
  return out;
}

bool code_fits(int n, std::uint64_t modulus) {
  BigInt limit = 1;
  limit <<= 128;
  return code_space(n, modulus) <= limit;
}

bool code_fits_u64(int n, std::uint64_t modulus) {
  BigInt limit = 1;
  limit <<= 64;
  return code_space(n, modulus) <= limit;
}

ElementCode encode(const ModMatrix& mat) {
  if (!code_fits(mat.dim(), mat.modulus()))
    throw UnsupportedError("matrix code exceeds 128 bits; use encode_bytes");
  ElementCode code = 0;
  const auto& e = mat.entries();
  for (std::size_t i = e.size(); i-- > 0;) code = code * mat.modulus() + e[i];
  return code;
}

ModMatrix decode(ElementCode code, int n, std::uint64_t modulus) {
  ModMatrix out(n, modulus);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.set(i, j, static_cast<long long>(code % modulus));
      code /= modulus;
    }
  return out;
}

std::string encode_bytes(const ModMatrix& mat) {
  std::string key;
  key.reserve(mat.entries().size() * 4);
  for (std::uint32_t v : mat.entries())
    for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
  return key;
}

ModMatrix decode_bytes(const std::string& key, int n, std::uint64_t modulus) {
  if (key.size() != static_cast<std::size_t>(n * n * 4)) throw ParameterError("byte key has wrong length");
  ModMatrix out(n, modulus);
  for (int idx = 0; idx < n * n; ++idx) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(key[static_cast<std::size_t>(idx * 4 + b)]))
           << (8 * b);
    out.set(idx / n, idx % n, v);
  }
  return out;
}

std::string to_decimal(ElementCode code) {
  if (code == 0) return "0";
  std::string s;
  while (code) {
    s.push_back(static_cast<char>('0' + static_cast<int>(code % 10)));
    code /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace girthlab
