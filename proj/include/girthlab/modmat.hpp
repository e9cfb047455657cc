#pragma once

// Matrices over Z/mZ, their compact integer codes, and the order of SL_n(F_p).

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "girthlab/exactmat.hpp"

namespace girthlab {

/// Base-m little-endian packing of the n² entries in row-major order:
/// entry (0,0) is the least significant digit.
using ElementCode = unsigned __int128;

class ModMatrix {
 public:
  ModMatrix() = default;
  /// Zero matrix; modulus must lie in [2, 2^32).
  ModMatrix(int n, std::uint64_t modulus);
  /// Row-major signed values, reduced into [0, m).
  ModMatrix(std::uint64_t modulus, std::initializer_list<std::initializer_list<long>> rows);

  static ModMatrix identity(int n, std::uint64_t modulus);

  int dim() const noexcept { return n_; }
  std::uint64_t modulus() const noexcept { return m_; }

  std::uint32_t operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * n_ + j)]; }
  /// Stores the residue of `value`.
  void set(int i, int j, long long value);

  const std::vector<std::uint32_t>& entries() const noexcept { return e_; }

  bool is_identity() const;
  ModMatrix transpose() const;
  /// Determinant by cofactor expansion (valid for composite moduli); n ≤ 10.
  std::uint64_t determinant() const;

  friend ModMatrix operator*(const ModMatrix& lhs, const ModMatrix& rhs);
  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;
  friend auto operator<=>(const ModMatrix&, const ModMatrix&) = default;

  std::string str() const;

 private:
  int n_ = 0;
  std::uint64_t m_ = 0;
  std::vector<std::uint32_t> e_;
};

/// Entrywise residue of an integer matrix.
ModMatrix reduce(const ExactMatrix& m, std::uint64_t modulus);

/// Inverse modulo m; throws ParameterError when gcd(det, m) ≠ 1.
ModMatrix inverse(const ModMatrix& m);

ModMatrix power(const ModMatrix& m, std::int64_t k);

/// p^{n(n-1)/2} ∏_{i=2}^{n} (p^i - 1). Throws ParameterError for composite p.
BigInt group_order_sl(int n, std::uint64_t p);

/// True when m^{n²} fits in ElementCode.
bool code_fits(int n, std::uint64_t modulus);
/// True when m^{n²} < 2^64.
bool code_fits_u64(int n, std::uint64_t modulus);
/// Number of distinct codes, m^{n²}.
BigInt code_space(int n, std::uint64_t modulus);

/// Throws UnsupportedError when the code does not fit.
ElementCode encode(const ModMatrix& m);
ModMatrix decode(ElementCode code, int n, std::uint64_t modulus);

/// Fallback key for matrices whose code exceeds 128 bits: 4 bytes per entry.
std::string encode_bytes(const ModMatrix& m);
ModMatrix decode_bytes(const std::string& key, int n, std::uint64_t modulus);

std::string to_decimal(ElementCode code);

}  // namespace girthlab
