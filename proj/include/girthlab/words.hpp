#pragma once

// Free-group side: relator scans over exact integers, shortest relators mod p,
// Reidemeister–Schreier generators and the generation recipe replays.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "girthlab/cayley.hpp"
#include "girthlab/exactmat.hpp"
#include "girthlab/modmat.hpp"

namespace girthlab {

/// Letters over k generators: 2i is generator i, 2i+1 its inverse.
using LetterWord = std::vector<int>;

struct ScanOptions {
  /// Reduced words enumerated (not only evaluated) before the scan stops
  /// short of max_length.
  std::uint64_t word_budget = 10'000'000;
  unsigned threads = 0;
};

struct RelationScan {
  int max_length = 0;
  /// Longest length fully scanned; below max_length when the budget ran out.
  int complete_length = 0;
  bool partial = false;
  /// Canonical representatives (minimal under rotation and inversion),
  /// sorted by length then letter order.
  std::vector<LetterWord> violations;
  std::uint64_t words_checked = 0;
};

/// Evaluates every cyclically reduced word up to max_length, one per class
/// under rotation and inversion, and reports those equal to the identity.
RelationScan relation_scan(std::span<const ExactMatrix> generators, int max_length,
                           const ScanOptions& opts = {});

struct FreenessReport {
  int n = 0;
  std::int64_t l = 1;
  long a = 0;
  long b = 0;
  int max_length = 0;
  int complete_length = 0;
  bool partial = false;
  std::vector<Word> violations;
  std::uint64_t words_checked = 0;

  bool free_up_to_bound() const { return violations.empty() && !partial; }
};

/// Relator scan for X = A^l, Y = B^l (any integers a, b, including the
/// non-free a = b = 1). Throws ParameterError for max_length < 2.
FreenessReport freeness_scan(int n, std::int64_t l, long a, long b, int max_length,
                             const ScanOptions& opts = {});

/// Letter word in the two-generator alphabet (X = 0, Y = 1) as a Word.
Word to_word(const LetterWord& w);

/// Product of the word over Z/mZ with X, Y substituted.
ModMatrix eval_word_mod(const Word& w, const ModMatrix& x, const ModMatrix& y);

/// Length of the shortest nonempty cyclically reduced word in the simple
/// symmetric generator set of {X_p, Y_p} that equals the identity, or empty
/// when there is none up to max_length. Degenerate reductions throw
/// DegenerateSpecError.
std::optional<int> identity_word_length_mod_p(const FamilySpec& spec, std::uint64_t p, int max_length);

/// Shortest word in X, Y (letter order X, X⁻¹, Y, Y⁻¹, first found wins)
/// whose value is `target`; empty optional when target is not generated.
std::optional<Word> shortest_word(const ModMatrix& x, const ModMatrix& y, const ModMatrix& target);

struct SubgroupGenerators {
  int index = 0;
  std::vector<Word> generators;
  int rank = 0;
};

/// Reidemeister–Schreier generators of the kernel of F(X,Y) → Z/mZ,
/// X ↦ 1, Y ↦ 0, with transversal {X^i : 0 ≤ i < m}.
SubgroupGenerators schreier_generators(int m);

/// Index of the subgroup generated by `words` in F(X,Y), from the folded
/// Stallings graph; empty when the folded graph is not a finite cover
/// (infinite index).
std::optional<int> stallings_index(std::span<const Word> words);

struct RecipeStep {
  std::string label;
  Word word;
  ModMatrix value;
  ModMatrix expected;
  bool matches = false;
};

struct RecipeReport {
  std::vector<RecipeStep> steps;
  std::uint64_t closure_order = 0;
  BigInt expected_order;
  /// The closure ran out of memory budget; only the steps were checked.
  bool closure_partial = false;
  bool full() const { return !closure_partial && BigInt(static_cast<unsigned long>(closure_order)) == expected_order; }
};

/// Replays the mod-3 generation recipe for X = A⁴, Y = B⁴ in dimension 3.
/// Requires a ≡ 1, b ≡ −1 (mod 3) (ParameterError otherwise); a step or order
/// mismatch throws VerificationFailure naming it.
RecipeReport replay_recipe_sl3_mod3(long a, long b, const ExploreOptions& opts = {});

/// Replays the recipe for the unit pair (A', B') in SL_n(F_q), n = q^t + 1 ≥ 4.
RecipeReport replay_recipe_qt(std::uint64_t q, int t, const ExploreOptions& opts = {});

}  // namespace girthlab
