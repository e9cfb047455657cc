#pragma once

// Gram-matrix spectral norms, the girth lower bound 2·log_γ(p/2) − 1, and the
// second adjacency eigenvalue of an enumerated Cayley graph.

#include <cstdint>
#include <span>
#include <vector>

#include "girthlab/cayley.hpp"
#include "girthlab/exactmat.hpp"
#include "girthlab/modmat.hpp"

namespace girthlab {

/// Largest eigenvalue of M·Mᵀ by power iteration (relative tolerance 1e-9).
/// n ≤ 8.
double gram_lambda_max(const ExactMatrix& m);

/// Exact coefficients of det(M·Mᵀ − λI), highest degree first; the leading
/// coefficient is (−1)^n. n ≤ 8.
std::vector<BigInt> gram_char_poly(const ExactMatrix& m);

struct GirthBound {
  double lambda_max = 0.0;  ///< top eigenvalue of X·Xᵀ
  double beta_max = 0.0;    ///< top eigenvalue of Y·Yᵀ
  double gamma = 0.0;       ///< max(√lambda_max, √beta_max)
  /// γ with the roles of a and b exchanged.
  double gamma_swapped = 0.0;
  std::uint64_t p = 0;
  double bound_raw = 0.0;
  /// max(3, ⌈bound_raw⌉).
  int bound_reported = 3;
};

/// Raw bound 2·log_γ(p/2) − 1.
double bound_from_gamma(double gamma, double p);

/// Bound for X = A^l, Y = B^l; requires p ≥ 3.
GirthBound girth_lower_bound(const FamilySpec& spec, std::uint64_t p);

struct SpectralOptions {
  std::uint64_t order_limit = 2'000'000;
  std::uint64_t seed = 0x5eed;
  double tolerance = 1e-6;
  int max_iterations = 200'000;
  ExploreOptions explore;
};

struct SpectralGapReport {
  int degree = 0;
  std::uint64_t order = 0;
  double top_eigenvalue = 0.0;
  double second_eigenvalue = 0.0;
  /// (degree − second) / degree.
  double normalized_gap = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Second-largest (signed) adjacency eigenvalue of Cay(⟨S⟩, S ∪ S⁻¹), by
/// power iteration on Adj + degree·I restricted to functions with zero mean.
/// Throws ParameterError when the group order exceeds the limit.
SpectralGapReport second_eigenvalue(std::span<const ModMatrix> generators, const SpectralOptions& opts = {});

}  // namespace girthlab
