#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fra/permutation.hpp"
#include "fra/rng.hpp"

namespace fra {

struct MallowsParams {
  int n = 1;
  double phi = 0.5;
  Permutation centroid;

  MallowsParams(int n_, double phi_, Permutation centroid_);
};

enum class QuantMethod { kExact, kRecursive, kMonteCarlo };

// Quantizer for client-side Borda averages: centroids[j-1] is the expected
// position of the item the model centroid ranks j-th (independent of the
// centroid itself), thresholds are consecutive midpoints.
struct QuantTable {
  int n = 0;
  double phi = 0.0;
  QuantMethod method = QuantMethod::kExact;
  long long num_samples = 0;  // only meaningful for kMonteCarlo
  std::vector<double> centroids;   // size n, strictly increasing
  std::vector<double> thresholds;  // size n-1, midpoints

  // Nearest centroid; exact threshold hits resolve to the smaller index.
  // Returns a 1-based index in [1, n].
  int quantize(double value) const;
};

double normalization_Z(int n, double phi);
double log_normalization_Z(int n, double phi);

double pmf(const MallowsParams& params, const Permutation& sigma);
double log_pmf(const MallowsParams& params, const Permutation& sigma);

// Exact inverse-CDF draw from P(j) ~ phi^j on {0, ..., i-1}.
int sample_truncated_geometric(int i, double phi, Rng& rng);

Permutation sample(const MallowsParams& params, Rng& rng);

struct DisplacementRatio {
  double p = 0.0;
  bool condition_holds = false;  // phi + phi^2 < 1 + phi^N
};

// p = (sum_{u=1}^{N-1} phi^u) / (1 + sum_{u=3}^{N} phi^u).
DisplacementRatio displacement_p(int n, double phi);

// Exhaustive enumeration over S_N; requires n <= 8.
QuantTable expected_positions_exact(int n, double phi);

QuantTable expected_positions_mc(int n, double phi, long long num_samples,
                                 Rng& rng);

// Closed-form recursion for the expected positions. Self-validates against
// the exhaustive table at min(n, 8); falls back to Monte Carlo (1e5 samples,
// seeded from `fallback_seed`) if the validation tolerance is exceeded.
QuantTable expected_positions_recursive(int n, double phi,
                                        double tolerance = 1e-12,
                                        std::uint64_t fallback_seed = 1);

// Provenance policy: exact for n <= 8, recursion (validated at n = 8)
// otherwise, Monte Carlo as last resort.
QuantTable make_quant_table(int n, double phi);

// Cache file: header "N phi method num_samples", then one centroid per line.
void save_quant_table(const QuantTable& table, const std::string& path);
QuantTable load_quant_table(const std::string& path);

}  // namespace fra
