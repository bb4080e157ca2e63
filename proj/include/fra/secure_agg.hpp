#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fra/rng.hpp"

namespace fra {

// Coordinate-wise ring layout: moduli[k] is the modulus of coordinate k.
using RingLayout = std::vector<std::uint64_t>;

// Zero-sum additive masks from a trusted-dealer simulation:
// sum_l masks[l][k] == 0 (mod moduli[k]) for every coordinate k.
struct MaskSet {
  RingLayout moduli;
  std::vector<std::vector<std::uint64_t>> masks;  // [client][coordinate]
};

MaskSet deal_masks(int num_clients, const RingLayout& moduli, Rng& rng);

// (message + mask) mod q, coordinate-wise. Throws if a message coordinate is
// outside its ring.
std::vector<std::uint64_t> mask_message(const std::vector<std::uint64_t>& message,
                                        const std::vector<std::uint64_t>& mask,
                                        const RingLayout& moduli);

// Modular sum of masked messages; with zero-sum masks this equals the plain
// modular sum of the messages.
std::vector<std::uint64_t> unmask_sum(
    const std::vector<std::vector<std::uint64_t>>& masked_messages,
    const RingLayout& moduli);

struct CostLedger {
  std::string protocol;
  long long num_clients = 0;
  long long bits_per_client = 0;
  long long total_bits = 0;
  // Borda: single part. Lehmer: high-part and histogram-part breakdown.
  long long high_part_bits_per_client = 0;
  long long histogram_bits_per_client = 0;
  // Asymptotic closed-form estimate, for comparison (not the wire truth).
  double asymptotic_bits = 0.0;
  std::string notes;
};

int bit_width(std::uint64_t modulus);  // ceil(log2(modulus))

struct BordaCostParams {
  int n = 0;
  int num_clients = 0;
};

struct LehmerCostParams {
  int n = 0;
  int num_clients = 0;
  int truncation_bits = 1;   // I
  long long total_samples = 0;  // M, for the asymptotic estimate
  double epsilon = 0.05;
  double p = 0.5;
};

CostLedger tally_cost(const BordaCostParams& params);
CostLedger tally_cost(const LehmerCostParams& params);

}  // namespace fra
