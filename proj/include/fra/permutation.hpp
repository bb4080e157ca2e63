#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fra/rng.hpp"

namespace fra {

// A ranking sigma over items 1..N in item->position convention:
// rank_of(i) == j means item i sits at position j, position 1 best.
// Values are stored 1-indexed.
class Permutation {
 public:
  Permutation() = default;

  // Throws std::invalid_argument unless ranks is a bijection of 1..N.
  explicit Permutation(std::vector<int> ranks);

  static Permutation identity(int n);
  static Permutation uniform_random(int n, Rng& rng);

  int size() const { return static_cast<int>(ranks_.size()); }

  // 1-indexed item -> 1-indexed position.
  int rank_of(int item) const { return ranks_[item - 1]; }

  const std::vector<int>& ranks() const { return ranks_; }

  Permutation inverse() const;

  bool operator==(const Permutation& other) const = default;
  bool operator<(const Permutation& other) const { return ranks_ < other.ranks_; }

  std::string to_string() const;

 private:
  std::vector<int> ranks_;
};

// Lehmer coordinates: coords[i-1] in {0, ..., i-1} (1-indexed coordinate i).
struct LehmerCode {
  std::vector<int> coords;
};

// f_{sigma0,sigma}: same coordinate ranges as a Lehmer code.
struct DisplacementVector {
  std::vector<int> values;
};

enum class TieRule { kByIndex, kSeededRandom };

// Number of discordant pairs. O(N log N).
long long kendall_tau(const Permutation& a, const Permutation& b);

// Sum of |a(i) - b(i)|.
long long spearman_footrule(const Permutation& a, const Permutation& b);

LehmerCode lehmer_encode(const Permutation& sigma);
Permutation lehmer_decode(const LehmerCode& code);

// f_{sigma0,sigma}(i) = |{t in [i-1] : sigma(inv_sigma0(t)) > sigma(inv_sigma0(i))}|.
DisplacementVector relabel_displacement(const Permutation& sigma,
                                        const Permutation& sigma0);

// Higher score -> better (smaller) rank. rng is only consulted for
/// TieRule::kSeededRandom.
Permutation scores_to_ranking(std::span<const double> scores, TieRule tie_rule,
                              Rng* rng = nullptr);

// ranked_prefix holds distinct items from 1..n in preference order; they keep
// the top positions, remaining items fill the tail uniformly at random.
Permutation partial_to_full(std::span<const int> ranked_prefix, int n, Rng& rng);

}  // namespace fra
