#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>
#include <vector>

#include "fra/lehmer_fed.hpp"
#include "fra/mallows.hpp"

using fra::GolombCodeword;
using fra::LehmerSplitMessage;
using fra::Permutation;
using fra::Rng;

namespace {

Permutation perm(std::vector<int> ranks) { return Permutation(std::move(ranks)); }

}  // namespace

TEST_CASE("truncation_bits_I") {
  // M=500, N=10, eps=0.05, p from phi=0.5: the raw formula gives 7, the
  // coordinate width clamp brings it to ceil(log2 10) = 4.
  const double p = fra::displacement_p(10, 0.5).p;
  CHECK(p == doctest::Approx(0.7991).epsilon(1e-3));
  CHECK(fra::truncation_bits_I(500, 10, 0.05, p) == 4);

  // Tiny p floors at the minimum width of 1.
  CHECK(fra::truncation_bits_I(500, 10, 0.05, 1e-300) == 1);

  // Monotone non-decreasing in M before clamping (use large N so the clamp
  // stays out of the way).
  int prev = 0;
  for (long long m : {10LL, 100LL, 10000LL, 100000000LL}) {
    const int bits = fra::truncation_bits_I(m, 1 << 20, 0.05, 0.8);
    CHECK(bits >= prev);
    prev = bits;
  }

  CHECK_THROWS_AS(fra::truncation_bits_I(500, 10, 0.05, 1.07),
                  std::invalid_argument);
  CHECK_THROWS_AS(fra::truncation_bits_I(0, 10, 0.05, 0.5),
                  std::invalid_argument);
}

TEST_CASE("lehmer_high_width") {
  CHECK(fra::lehmer_high_width(1, 2) == 0);
  CHECK(fra::lehmer_high_width(8, 2) == 1);
  CHECK(fra::lehmer_high_width(8, 3) == 0);
  CHECK(fra::lehmer_high_width(9, 2) == 2);
}

TEST_CASE("client_lehmer_message") {
  Rng rng(1);
  const std::vector<Permutation> unanimous{perm({3, 1, 2}), perm({3, 1, 2})};
  const LehmerSplitMessage msg = fra::client_lehmer_message(unanimous, 1, rng);
  // lehmer(3,1,2) = (0,1,1); I=1 so low bits are the values themselves.
  CHECK(msg.high_parts == std::vector<std::uint64_t>{0, 0, 0});
  CHECK(msg.low_hists[0] == std::vector<std::uint64_t>{1, 0});
  CHECK(msg.low_hists[1] == std::vector<std::uint64_t>{0, 1});
  CHECK(msg.low_hists[2] == std::vector<std::uint64_t>{0, 1});

  // Coordinate-wise majority of {(0,0,0),(0,0,0),(0,1,1)} = (0,0,0).
  const std::vector<Permutation> three{perm({1, 2, 3}), perm({1, 2, 3}),
                                       perm({3, 1, 2})};
  const LehmerSplitMessage m3 = fra::client_lehmer_message(three, 1, rng);
  CHECK(m3.low_hists[0][0] == 1);
  CHECK(m3.low_hists[1][0] == 1);
  CHECK(m3.low_hists[2][0] == 1);

  CHECK_THROWS_AS(fra::client_lehmer_message(std::vector<Permutation>{}, 1, rng),
                  std::invalid_argument);
}

TEST_CASE("bit-split identity") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_below(15));
    const int bits = 1 + static_cast<int>(rng.uniform_below(4));
    const Permutation sigma = Permutation::uniform_random(n, rng);
    const std::vector<Permutation> local{sigma};
    Rng tie_rng(3);
    const LehmerSplitMessage msg =
        fra::client_lehmer_message(local, bits, tie_rng);
    const auto code = fra::lehmer_encode(sigma);
    for (int i = 1; i <= n; ++i) {
      std::uint64_t low = 0;
      for (std::uint64_t v = 0; v < msg.low_hists[i - 1].size(); ++v)
        if (msg.low_hists[i - 1][v] == 1) low = v;
      const std::uint64_t high = msg.high_parts[i - 1];
      CHECK(high * (1ULL << bits) + low ==
            static_cast<std::uint64_t>(code.coords[i - 1]));
      CHECK(high < (1ULL << fra::lehmer_high_width(i, bits)));
      CHECK(low < (1ULL << bits));
    }
  }
}

TEST_CASE("majority ties are split evenly across seeds") {
  // Two rankings whose Lehmer codes disagree at coordinate 2: tie.
  const std::vector<Permutation> tie_data{perm({1, 2}), perm({2, 1})};
  int picked_one = 0;
  const int runs = 1000;
  for (int s = 0; s < runs; ++s) {
    Rng rng(1000 + s);
    const LehmerSplitMessage msg = fra::client_lehmer_message(tie_data, 1, rng);
    if (msg.low_hists[1][1] == 1) ++picked_one;
  }
  const double freq = picked_one / static_cast<double>(runs);
  CHECK(freq > 0.45);
  CHECK(freq < 0.55);
}

TEST_CASE("server_lehmer_aggregate reconstruction") {
  // All clients agree: output equals their common decode.
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_below(19));
    const int bits = 1 + static_cast<int>(rng.uniform_below(3));
    const int clients = 1 + static_cast<int>(rng.uniform_below(8));
    const Permutation sigma = Permutation::uniform_random(n, rng);
    std::vector<std::uint64_t> high(n, 0);
    std::vector<std::vector<std::uint64_t>> hists(n);
    for (int l = 0; l < clients; ++l) {
      Rng tie_rng(7);
      const LehmerSplitMessage msg = fra::client_lehmer_message(
          std::vector<Permutation>{sigma}, bits, tie_rng);
      for (int i = 0; i < n; ++i) {
        high[i] += msg.high_parts[i];
        if (hists[i].empty()) hists[i].assign(msg.low_hists[i].size(), 0);
        for (size_t v = 0; v < hists[i].size(); ++v)
          hists[i][v] += msg.low_hists[i][v];
      }
    }
    CHECK(fra::server_lehmer_aggregate(high, hists, clients, bits) == sigma);
  }
}

TEST_CASE("server_lehmer_aggregate hand example at i=8") {
  // Single active coordinate i=8 with I=2: clients hold v in {5,5,6}.
  // High parts {1,1,1} -> V=1; low bits {1,1,2} -> Maj=1; reconstruct 4*1+1=5.
  const int n = 8;
  const int clients = 3;
  const int bits = 2;
  std::vector<std::uint64_t> high(n, 0);
  std::vector<std::vector<std::uint64_t>> hists(n, std::vector<std::uint64_t>(4, 0));
  // Coordinates 1..7 all zero across clients.
  for (int i = 0; i < 7; ++i) hists[i][0] = clients;
  high[7] = 3;  // 1+1+1
  hists[7][1] = 2;
  hists[7][2] = 1;
  const Permutation result = fra::server_lehmer_aggregate(high, hists, clients, bits);
  CHECK(fra::lehmer_encode(result).coords ==
        std::vector<int>{0, 0, 0, 0, 0, 0, 0, 5});
}

TEST_CASE("server rounding of the high-part average is half-up") {
  // L=2, coordinate i=16, I=1: high widths 3. Clients at high parts h and
  // h+1; the average h+0.5 rounds up.
  const int n = 16;
  std::vector<std::uint64_t> high(n, 0);
  std::vector<std::vector<std::uint64_t>> hists(n, std::vector<std::uint64_t>(2, 0));
  for (int i = 0; i < n; ++i) hists[i][0] = 2;
  const std::uint64_t h = 3;
  high[15] = h + (h + 1);
  const Permutation result = fra::server_lehmer_aggregate(high, hists, 2, 1);
  CHECK(fra::lehmer_encode(result).coords[15] ==
        static_cast<int>((h + 1) << 1));
}

TEST_CASE("server rejects corrupted histograms") {
  std::vector<std::uint64_t> high(2, 0);
  std::vector<std::vector<std::uint64_t>> hists(2, std::vector<std::uint64_t>(2, 0));
  hists[0][0] = 3;
  hists[1][0] = 2;  // column sum != L
  CHECK_THROWS_AS(fra::server_lehmer_aggregate(high, hists, 3, 1),
                  std::invalid_argument);
}

TEST_CASE("central_lehmer recovers a unanimous dataset") {
  Rng rng(9);
  const Permutation sigma = perm({4, 1, 3, 2, 5});
  const std::vector<Permutation> data{sigma, sigma, sigma};
  Rng tie_rng(11);
  CHECK(fra::central_lehmer(data, tie_rng) == sigma);
}

TEST_CASE("golomb_parameter") {
  CHECK(fra::golomb_parameter(0.5) == 1);
  CHECK(fra::golomb_parameter(0.9) == 7);
  CHECK(fra::golomb_parameter(1e-9) == 1);
  CHECK_THROWS_AS(fra::golomb_parameter(1.0), std::invalid_argument);
}

TEST_CASE("golomb codec") {
  const GolombCodeword zero = fra::golomb_encode(0, 1);
  CHECK(zero.bits == std::vector<bool>{true});
  CHECK(fra::golomb_decode(zero) == 0);

  for (int k : {1, 2, 3, 7})
    for (std::uint64_t v = 0; v <= 100; ++v)
      CHECK(fra::golomb_decode(fra::golomb_encode(v, k)) == v);

  // Concatenated stream decodes sequentially.
  std::vector<bool> stream;
  for (std::uint64_t v : {5ULL, 0ULL, 13ULL}) {
    const auto cw = fra::golomb_encode(v, 3);
    stream.insert(stream.end(), cw.bits.begin(), cw.bits.end());
  }
  size_t offset = 0;
  CHECK(fra::golomb_decode(stream, 3, offset) == 5);
  CHECK(fra::golomb_decode(stream, 3, offset) == 0);
  CHECK(fra::golomb_decode(stream, 3, offset) == 13);
  CHECK(offset == stream.size());

  CHECK_THROWS_AS(fra::golomb_decode(std::vector<bool>{false, false}, 1, offset = 0),
                  std::invalid_argument);
}

TEST_CASE("golomb mean length obeys the geometric-source bound") {
  const double phi = 0.5;
  const int k = fra::golomb_parameter(phi);
  Rng rng(55);
  double total_bits = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const int v = fra::sample_truncated_geometric(32, phi, rng);
    total_bits += static_cast<double>(fra::golomb_encode(v, k).bits.size());
  }
  const double bound = k / (1 - phi) + (k > 1 ? std::log2(k) : 0.0) + 1.0;
  CHECK(total_bits / draws <= bound);
}
