#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fra/permutation.hpp"
#include "fra/rng.hpp"
#include "fra/secure_agg.hpp"

namespace fra {

// Width of the high (averaged) part of Lehmer coordinate i:
// max(ceil(log2 i) - I, 0).
int lehmer_high_width(int coordinate, int truncation_bits);

// Unmasked client report for the Lehmer-majority protocol. Coordinate i
// carries the top bits of the client's majority value plus a one-hot
// histogram of the bottom I bits.
struct LehmerSplitMessage {
  int n = 0;
  int truncation_bits = 1;
  std::vector<std::uint64_t> high_parts;            // [n], value of top bits
  std::vector<std::vector<std::uint64_t>> low_hists;  // [n][2^I], one-hot
};

// I = ceil(log2(2 * log2(M*N^2 / eps) / log2(1/p) + 1)), clamped to
// [1, ceil(log2 N)].
int truncation_bits_I(long long total_samples, int n, double epsilon, double p);

LehmerSplitMessage client_lehmer_message(std::span<const Permutation> local,
                                         int truncation_bits, Rng& tie_rng);

// summed_high / summed_hists are exact integer sums of unmasked client parts.
Permutation server_lehmer_aggregate(
    const std::vector<std::uint64_t>& summed_high,
    const std::vector<std::vector<std::uint64_t>>& summed_hists,
    int num_clients, int truncation_bits);

// Pooled (centralized) variant: coordinate-wise majority of all Lehmer codes,
// ties broken by the supplied rng, then decode.
Permutation central_lehmer(std::span<const Permutation> rankings, Rng& tie_rng);

// --- Golomb codec (offline compression benchmark, not part of the secure
// protocol) ---

struct GolombCodeword {
  std::vector<bool> bits;
  int parameter = 1;
};

// Unique K with ratio^K + ratio^{K+1} <= 1 < ratio^{K-1} + ratio^K.
int golomb_parameter(double ratio);

GolombCodeword golomb_encode(std::uint64_t value, int parameter);

// Decodes one codeword starting at `offset`; advances offset past it.
std::uint64_t golomb_decode(const std::vector<bool>& bits, int parameter,
                            size_t& offset);
std::uint64_t golomb_decode(const GolombCodeword& codeword);

}  // namespace fra
