#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fra/mallows.hpp"
#include "fra/permutation.hpp"

namespace fra {

// Quantized client report: entries are 1-based quantization indices in [1, N]
// and may repeat.
struct BordaClientMessage {
  std::vector<int> quantized;
  std::uint64_t ring_modulus = 0;
};

struct BordaEstimate {
  Permutation estimate;
  std::vector<double> server_averages;  // A(i)
};

// Smallest power of two exceeding N*L (each coordinate sum is at most N*L).
std::uint64_t borda_ring_modulus(int n, int num_clients);

// Algorithm-1 aggregation: rank items by increasing mean position, ties to
// the smaller item index.
BordaEstimate central_borda(std::span<const Permutation> rankings);

BordaClientMessage client_borda_message(std::span<const Permutation> local,
                                        const QuantTable& table);

// unmasked_sum[i] = sum over clients of quantized[i], exact integers.
BordaEstimate server_borda_aggregate(const std::vector<std::uint64_t>& unmasked_sum,
                                     int num_clients);

}  // namespace fra
