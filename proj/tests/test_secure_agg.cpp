#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "fra/rng.hpp"
#include "fra/secure_agg.hpp"

using fra::CostLedger;
using fra::MaskSet;
using fra::RingLayout;
using fra::Rng;

TEST_CASE("deal_masks zero-sum and L=2 structure") {
  Rng rng(1);
  const RingLayout layout{5, 7, 16};
  for (int deal = 0; deal < 500; ++deal) {
    const MaskSet set = fra::deal_masks(4, layout, rng);
    for (size_t k = 0; k < layout.size(); ++k) {
      std::uint64_t sum = 0;
      for (const auto& m : set.masks) sum = (sum + m[k]) % layout[k];
      CHECK(sum == 0);
    }
  }
  const MaskSet two = fra::deal_masks(2, layout, rng);
  for (size_t k = 0; k < layout.size(); ++k)
    CHECK(two.masks[1][k] == (layout[k] - two.masks[0][k]) % layout[k]);

  CHECK_THROWS_AS(fra::deal_masks(1, layout, rng), std::invalid_argument);
  CHECK_THROWS_AS(fra::deal_masks(3, RingLayout{1}, rng),
                  std::invalid_argument);
}

TEST_CASE("mask coordinates are uniform (chi-squared)") {
  Rng rng(2);
  const RingLayout layout{5};
  std::vector<long long> counts(5, 0);
  const int deals = 100000;
  for (int d = 0; d < deals; ++d) {
    const MaskSet set = fra::deal_masks(3, layout, rng);
    ++counts[set.masks[0][0]];
    ++counts[set.masks[1][0]];
  }
  const double expected = 2.0 * deals / 5.0;
  double chi2 = 0.0;
  for (long long c : counts) {
    const double diff = c - expected;
    chi2 += diff * diff / expected;
  }
  // 4 dof; chi2 above ~23 has p < 1e-4.
  CHECK(chi2 < 23.5);
}

TEST_CASE("mask then aggregate telescopes to the plain modular sum") {
  Rng rng(3);
  const RingLayout layout{11, 64, 256, 3};
  for (int trial = 0; trial < 200; ++trial) {
    const int clients = 2 + static_cast<int>(rng.uniform_below(6));
    const MaskSet set = fra::deal_masks(clients, layout, rng);
    std::vector<std::vector<std::uint64_t>> plain(clients);
    std::vector<std::vector<std::uint64_t>> wire(clients);
    std::vector<std::uint64_t> direct(layout.size(), 0);
    for (int l = 0; l < clients; ++l) {
      for (size_t k = 0; k < layout.size(); ++k) {
        const std::uint64_t v = rng.uniform_below(layout[k]);
        plain[l].push_back(v);
        direct[k] = (direct[k] + v) % layout[k];
      }
      wire[l] = fra::mask_message(plain[l], set.masks[l], layout);
    }
    CHECK(fra::unmask_sum(wire, layout) == direct);
  }
}

TEST_CASE("zero mask is the identity; out-of-ring messages rejected") {
  const RingLayout layout{8, 8};
  const std::vector<std::uint64_t> msg{3, 7};
  const std::vector<std::uint64_t> zero{0, 0};
  CHECK(fra::mask_message(msg, zero, layout) == msg);
  const std::vector<std::uint64_t> bad{8, 0};
  CHECK_THROWS_AS(fra::mask_message(bad, zero, layout), std::invalid_argument);
}

TEST_CASE("single masked message is exactly uniform for q <= 7") {
  // For fixed plaintext y, (y+z) mod q over uniform z hits every residue once.
  for (std::uint64_t q = 2; q <= 7; ++q)
    for (std::uint64_t y = 0; y < q; ++y) {
      std::vector<int> hits(q, 0);
      for (std::uint64_t z = 0; z < q; ++z) ++hits[(y + z) % q];
      for (int h : hits) CHECK(h == 1);
    }
}

TEST_CASE("masked output is uniform for a larger ring (chi-squared)") {
  const std::uint64_t q = 29;
  const RingLayout layout{q};
  Rng rng(4);
  std::vector<long long> counts(q, 0);
  const int deals = 100000;
  const std::vector<std::uint64_t> plaintext{17};
  for (int d = 0; d < deals; ++d) {
    const MaskSet set = fra::deal_masks(2, layout, rng);
    ++counts[fra::mask_message(plaintext, set.masks[0], layout)[0]];
  }
  const double expected = static_cast<double>(deals) / q;
  double chi2 = 0.0;
  for (long long c : counts) {
    const double diff = c - expected;
    chi2 += diff * diff / expected;
  }
  // 28 dof; chi2 above ~63 has p < 1e-4.
  CHECK(chi2 < 63.0);
}

TEST_CASE("borda cost ledger") {
  const CostLedger ledger = fra::tally_cost(fra::BordaCostParams{10, 10});
  CHECK(ledger.bits_per_client == 70);
  CHECK(ledger.total_bits == 700);
  CHECK(ledger.total_bits == ledger.bits_per_client * ledger.num_clients);
}

TEST_CASE("borda cost scaling tracks N log N") {
  // Doubling N at fixed L: slope stays within (2 + o(1)) of N log2 N growth.
  const int L = 8;
  long long prev = fra::tally_cost(fra::BordaCostParams{8, L}).total_bits;
  for (int n = 16; n <= 1024; n *= 2) {
    const long long cur = fra::tally_cost(fra::BordaCostParams{n, L}).total_bits;
    const double ratio = static_cast<double>(cur) / prev;
    const double ideal = (n * std::log2(n)) / ((n / 2) * std::log2(n / 2));
    CHECK(ratio <= 2.0 * ideal);
    prev = cur;
  }
}

TEST_CASE("lehmer cost ledger") {
  // I at full width: the high part vanishes.
  fra::LehmerCostParams clamped{10, 10, 4, 500, 0.05, 0.8};
  const CostLedger full = fra::tally_cost(clamped);
  CHECK(full.high_part_bits_per_client == 0);
  CHECK(full.histogram_bits_per_client == 10 * 16 * 4);  // ceil(log2 11) = 4
  CHECK(full.total_bits == full.bits_per_client * 10);

  // I=1, N=10, L=8: coordinates 3..10 have nonempty high parts.
  fra::LehmerCostParams open{10, 8, 1, 500, 0.05, 0.8};
  const CostLedger part = fra::tally_cost(open);
  long long expected_high = 0;
  for (int i = 2; i <= 10; ++i) {
    const int w = std::max(static_cast<int>(std::ceil(std::log2(i))) - 1, 0);
    if (w > 0) expected_high += w + 3;  // + ceil(log2 8) for the L widening
  }
  CHECK(part.high_part_bits_per_client == expected_high);
  CHECK(part.total_bits ==
        (part.high_part_bits_per_client + part.histogram_bits_per_client) * 8);
}
