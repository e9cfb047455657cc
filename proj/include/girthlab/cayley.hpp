#pragma once

// Breadth-first exploration of Cayley graphs Cay(<S>, S ∪ S⁻¹) over Z/mZ:
// subgroup order, girth, diameter and the per-prime report rows.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "girthlab/modmat.hpp"

namespace girthlab {

/// Default memory budget: $GIRTHLAB_MEMORY_BUDGET bytes if set, else 8 GiB.
std::uint64_t default_memory_budget();

struct ExploreOptions {
  std::uint64_t memory_budget = default_memory_budget();
  /// Worker threads for frontier expansion; 0 means hardware concurrency.
  /// Never changes any result.
  unsigned threads = 0;
};

/// S ∪ S⁻¹ with identity and duplicates removed (simple-graph convention).
class SymmetricGenerators {
 public:
  /// With `strict`, an identity generator or two equal generators in the
  /// input throw DegenerateSpecError.
  SymmetricGenerators(std::span<const ModMatrix> generators, bool strict);

  int dim() const noexcept { return n_; }
  std::uint64_t modulus() const noexcept { return m_; }
  int degree() const noexcept { return static_cast<int>(elems_.size()); }
  const std::vector<ModMatrix>& elements() const noexcept { return elems_; }
  /// Index of the inverse of element i.
  int inverse_of(int i) const { return inv_[static_cast<std::size_t>(i)]; }

 private:
  int n_ = 0;
  std::uint64_t m_ = 0;
  std::vector<ModMatrix> elems_;
  std::vector<int> inv_;
};

struct Exploration {
  std::uint64_t order = 0;
  /// Eccentricity of the identity; equals the diameter by vertex-transitivity.
  int diameter = 0;
  /// Shortest cycle through the identity; empty for an acyclic component.
  std::optional<int> girth;
  int degree = 0;
  std::vector<std::uint64_t> sphere_sizes;
  std::uint64_t peak_bytes = 0;
  double seconds = 0.0;
};

/// Single BFS from the identity computing order, eccentricity and girth.
/// Throws BudgetExceeded (with the depth reached) when the visited set
/// outgrows the memory budget.
Exploration explore(const SymmetricGenerators& gens, const ExploreOptions& opts = {});

/// Order of the subgroup generated by `generators` (identity allowed).
std::uint64_t closure(std::span<const ModMatrix> generators, const ExploreOptions& opts = {});
/// Girth of the simple Cayley graph; throws DegenerateSpecError for an
/// identity or repeated generator, and for an acyclic graph.
int girth(std::span<const ModMatrix> generators, const ExploreOptions& opts = {});
int diameter(std::span<const ModMatrix> generators, const ExploreOptions& opts = {});

/// Sorted element codes of the generated group with a neighbour table:
/// neighbours[i * degree + g] is the index of elements[i] · s_g.
struct GroupEnumeration {
  int degree = 0;
  std::vector<ElementCode> elements;
  std::vector<std::uint32_t> neighbours;
};

/// Throws ParameterError if the group order exceeds `order_limit` and
/// UnsupportedError if codes do not fit 128 bits.
GroupEnumeration enumerate_group(const SymmetricGenerators& gens, std::uint64_t order_limit,
                                 const ExploreOptions& opts = {});

/// Undirected simple graph in Graphviz DOT; vertices are labelled by the
/// decimal ElementCode. Order limited to 10,000.
std::string export_dot(std::span<const ModMatrix> generators, const ExploreOptions& opts = {});

struct CayleyStats {
  int n = 0;
  std::int64_t l = 1;
  long a = 0;
  long b = 0;
  std::uint64_t modulus = 0;
  bool modulus_prime = false;
  std::uint64_t order = 0;
  /// order == |SL_n(F_p)|; always false for composite moduli.
  bool generated_full = false;
  std::optional<int> girth;
  int diameter = 0;
  int degree = 0;
  double seconds = 0.0;
  std::uint64_t peak_bytes = 0;
  /// Set when this row failed; the numeric fields are then not meaningful.
  std::string error;
  /// Partial rows carry the BFS depth reached as a diameter lower bound.
  bool partial = false;

  bool ok() const { return error.empty(); }
  /// diameter / girth; NaN without a girth.
  double dg_ratio() const;
};

/// Row for an explicit generator set over Z/mZ.
CayleyStats cayley_stats(std::span<const ModMatrix> generators, const ExploreOptions& opts = {});

/// Parameters of the family Γ = Cay(SL_n(Z/mZ), {A^l, B^l}).
struct FamilySpec {
  int n = 2;
  std::int64_t l = 1;
  long a = 2;
  long b = 2;
};

/// Reductions of A^l and B^l modulo m.
std::vector<ModMatrix> family_generators(const FamilySpec& spec, std::uint64_t modulus);

/// One row per modulus, sorted ascending; per-row failures are recorded in
/// the row, never thrown.
std::vector<CayleyStats> dg_table(const FamilySpec& spec, std::span<const std::uint64_t> moduli,
                                  const ExploreOptions& opts = {});

}  // namespace girthlab
