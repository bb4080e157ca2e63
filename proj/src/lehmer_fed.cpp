#include "fra/lehmer_fed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fra {
namespace {

int coordinate_width(int i) {  // ceil(log2 i), bits needed for {0..i-1}
  return i <= 1 ? 0 : bit_width(static_cast<std::uint64_t>(i));
}

// Majority value of one Lehmer coordinate across a client's local codes;
// ties among top counts are broken uniformly at random.
int majority_value(const std::vector<int>& counts, Rng& tie_rng) {
  int best = 0;
  for (int c : counts) best = std::max(best, c);
  std::vector<int> tied;
  for (int v = 0; v < static_cast<int>(counts.size()); ++v)
    if (counts[v] == best) tied.push_back(v);
  if (tied.size() == 1) return tied.front();
  return tied[tie_rng.uniform_below(tied.size())];
}

std::vector<int> majority_lehmer(std::span<const Permutation> rankings,
                                 Rng& tie_rng) {
  if (rankings.empty()) throw std::invalid_argument("no rankings");
  const int n = rankings.front().size();
  std::vector<std::vector<int>> counts(n);
  for (int i = 0; i < n; ++i) counts[i].assign(i + 1, 0);
  for (const Permutation& sigma : rankings) {
    if (sigma.size() != n)
      throw std::invalid_argument("ranking length mismatch in Lehmer input");
    const LehmerCode code = lehmer_encode(sigma);
    for (int i = 0; i < n; ++i) ++counts[i][code.coords[i]];
  }
  std::vector<int> majority(n);
  for (int i = 0; i < n; ++i) majority[i] = majority_value(counts[i], tie_rng);
  return majority;
}

}  // namespace

int lehmer_high_width(int coordinate, int truncation_bits) {
  return std::max(coordinate_width(coordinate) - truncation_bits, 0);
}

int truncation_bits_I(long long total_samples, int n, double epsilon, double p) {
  if (total_samples < 1) throw std::invalid_argument("M must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0,1)");
  if (!(p > 0.0))
    throw std::invalid_argument("p must be positive");
  if (p >= 1.0)
    throw std::invalid_argument(
        "displacement ratio p >= 1: model condition phi+phi^2 < 1+phi^N "
        "violated");
  const double span =
      2.0 * (std::log2(static_cast<double>(total_samples) * n * n / epsilon) /
             std::log2(1.0 / p)) +
      1.0;
  int bits = static_cast<int>(std::ceil(std::log2(span)));
  bits = std::max(bits, 1);
  return std::min(bits, std::max(coordinate_width(n), 1));
}

LehmerSplitMessage client_lehmer_message(std::span<const Permutation> local,
                                         int truncation_bits, Rng& tie_rng) {
  if (local.empty()) throw std::invalid_argument("client holds no rankings");
  if (truncation_bits < 1)
    throw std::invalid_argument("truncation bits must be >= 1");
  const std::vector<int> majority = majority_lehmer(local, tie_rng);
  const int n = static_cast<int>(majority.size());
  LehmerSplitMessage msg;
  msg.n = n;
  msg.truncation_bits = truncation_bits;
  msg.high_parts.resize(n);
  msg.low_hists.resize(n);
  const std::uint64_t low_mask = (1ULL << truncation_bits) - 1;
  for (int i = 1; i <= n; ++i) {
    const std::uint64_t v = static_cast<std::uint64_t>(majority[i - 1]);
    msg.high_parts[i - 1] = v >> truncation_bits;
    msg.low_hists[i - 1].assign(1ULL << truncation_bits, 0);
    msg.low_hists[i - 1][v & low_mask] = 1;
  }
  return msg;
}

Permutation server_lehmer_aggregate(
    const std::vector<std::uint64_t>& summed_high,
    const std::vector<std::vector<std::uint64_t>>& summed_hists,
    int num_clients, int truncation_bits) {
  if (num_clients < 1) throw std::invalid_argument("need at least one client");
  if (truncation_bits < 1)
    throw std::invalid_argument("truncation bits must be >= 1");
  const int n = static_cast<int>(summed_high.size());
  if (static_cast<int>(summed_hists.size()) != n)
    throw std::invalid_argument("high/histogram coordinate count mismatch");
  const std::uint64_t L = static_cast<std::uint64_t>(num_clients);
  LehmerCode code;
  code.coords.resize(n);
  for (int i = 1; i <= n; ++i) {
    const auto& hist = summed_hists[i - 1];
    std::uint64_t column_sum = 0;
    for (std::uint64_t c : hist) column_sum += c;
    if (column_sum != L)
      throw std::invalid_argument("histogram column sum != L at coordinate " +
                                  std::to_string(i));
    std::uint64_t maj = 0;
    for (std::uint64_t v = 1; v < hist.size(); ++v)
      if (hist[v] > hist[maj]) maj = v;  // ties stay at the smaller value
    std::uint64_t reconstructed = maj;
    if (lehmer_high_width(i, truncation_bits) > 0) {
      // Round-half-up average of the high parts.
      const std::uint64_t v_high = (2 * summed_high[i - 1] + L) / (2 * L);
      reconstructed += v_high << truncation_bits;
    }
    code.coords[i - 1] = static_cast<int>(
        std::min(reconstructed, static_cast<std::uint64_t>(i - 1)));
  }
  return lehmer_decode(code);
}

Permutation central_lehmer(std::span<const Permutation> rankings, Rng& tie_rng) {
  const std::vector<int> majority = majority_lehmer(rankings, tie_rng);
  LehmerCode code;
  code.coords = majority;
  return lehmer_decode(code);
}

int golomb_parameter(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("ratio must lie in (0,1)");
  int k = 1;
  while (std::pow(ratio, k) + std::pow(ratio, k + 1) > 1.0) ++k;
  return k;
}

GolombCodeword golomb_encode(std::uint64_t value, int parameter) {
  if (parameter < 1) throw std::invalid_argument("Golomb parameter must be >= 1");
  const std::uint64_t k = static_cast<std::uint64_t>(parameter);
  const std::uint64_t quotient = value / k;
  const std::uint64_t remainder = value % k;
  GolombCodeword cw;
  cw.parameter = parameter;
  cw.bits.assign(quotient, false);  // unary: q zeros, then the terminator
  cw.bits.push_back(true);
  const int r_width = parameter == 1 ? 0 : bit_width(k);
  for (int b = r_width - 1; b >= 0; --b)
    cw.bits.push_back((remainder >> b) & 1);
  return cw;
}

std::uint64_t golomb_decode(const std::vector<bool>& bits, int parameter,
                            size_t& offset) {
  if (parameter < 1) throw std::invalid_argument("Golomb parameter must be >= 1");
  std::uint64_t quotient = 0;
  while (offset < bits.size() && !bits[offset]) {
    ++quotient;
    ++offset;
  }
  if (offset >= bits.size())
    throw std::invalid_argument("malformed Golomb bitstream: no terminator");
  ++offset;  // terminator
  const int r_width = parameter == 1 ? 0 : bit_width(static_cast<std::uint64_t>(parameter));
  std::uint64_t remainder = 0;
  for (int b = 0; b < r_width; ++b) {
    if (offset >= bits.size())
      throw std::invalid_argument("malformed Golomb bitstream: short remainder");
    remainder = (remainder << 1) | static_cast<std::uint64_t>(bits[offset++]);
  }
  if (remainder >= static_cast<std::uint64_t>(parameter))
    throw std::invalid_argument("malformed Golomb bitstream: remainder >= K");
  return quotient * parameter + remainder;
}

std::uint64_t golomb_decode(const GolombCodeword& codeword) {
  size_t offset = 0;
  const std::uint64_t value =
      golomb_decode(codeword.bits, codeword.parameter, offset);
  if (offset != codeword.bits.size())
    throw std::invalid_argument("trailing bits in Golomb codeword");
  return value;
}

}  // namespace fra
