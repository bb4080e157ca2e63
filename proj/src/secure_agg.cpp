#include "fra/secure_agg.hpp"

#include <cmath>
#include <stdexcept>

namespace fra {

int bit_width(std::uint64_t modulus) {
  if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");
  int w = 0;
  std::uint64_t v = modulus - 1;
  while (v > 0) {
    ++w;
    v >>= 1;
  }
  return w;
}

MaskSet deal_masks(int num_clients, const RingLayout& moduli, Rng& rng) {
  if (num_clients < 2)
    throw std::invalid_argument("secure aggregation needs at least 2 clients");
  for (std::uint64_t q : moduli)
    if (q < 2) throw std::invalid_argument("ring modulus must be >= 2");
  MaskSet set;
  set.moduli = moduli;
  set.masks.assign(num_clients, std::vector<std::uint64_t>(moduli.size(), 0));
  for (size_t k = 0; k < moduli.size(); ++k) {
    const std::uint64_t q = moduli[k];
    std::uint64_t running = 0;
    for (int l = 0; l + 1 < num_clients; ++l) {
      const std::uint64_t z = rng.uniform_below(q);
      set.masks[l][k] = z;
      running = (running + z) % q;
    }
    set.masks[num_clients - 1][k] = (q - running) % q;
  }
  return set;
}

std::vector<std::uint64_t> mask_message(const std::vector<std::uint64_t>& message,
                                        const std::vector<std::uint64_t>& mask,
                                        const RingLayout& moduli) {
  if (message.size() != mask.size() || message.size() != moduli.size())
    throw std::invalid_argument("message/mask/layout size mismatch");
  std::vector<std::uint64_t> out(message.size());
  for (size_t k = 0; k < message.size(); ++k) {
    if (message[k] >= moduli[k])
      throw std::invalid_argument("message coordinate outside its ring");
    out[k] = (message[k] + mask[k]) % moduli[k];
  }
  return out;
}

std::vector<std::uint64_t> unmask_sum(
    const std::vector<std::vector<std::uint64_t>>& masked_messages,
    const RingLayout& moduli) {
  if (masked_messages.empty())
    throw std::invalid_argument("no messages to aggregate");
  std::vector<std::uint64_t> sum(moduli.size(), 0);
  for (const auto& msg : masked_messages) {
    if (msg.size() != moduli.size())
      throw std::invalid_argument("message layout mismatch");
    for (size_t k = 0; k < moduli.size(); ++k)
      sum[k] = (sum[k] + msg[k]) % moduli[k];
  }
  return sum;
}

CostLedger tally_cost(const BordaCostParams& params) {
  if (params.n < 1 || params.num_clients < 1)
    throw std::invalid_argument("invalid Borda cost parameters");
  const long long nl =
      static_cast<long long>(params.n) * params.num_clients;
  const int width = bit_width(static_cast<std::uint64_t>(nl) + 1);
  CostLedger ledger;
  ledger.protocol = "borda";
  ledger.num_clients = params.num_clients;
  ledger.bits_per_client = static_cast<long long>(params.n) * width;
  ledger.total_bits = ledger.bits_per_client * params.num_clients;
  ledger.asymptotic_bits = static_cast<double>(params.num_clients) *
                                  params.n * std::log2(params.n);
  ledger.notes =
      "ring Z_q, q = 2^ceil(log2(N*L+1)); asymptotic form is the N*L*log2(N) "
      "idealization";
  return ledger;
}

CostLedger tally_cost(const LehmerCostParams& params) {
  if (params.n < 1 || params.num_clients < 1 || params.truncation_bits < 1)
    throw std::invalid_argument("invalid Lehmer cost parameters");
  const int L = params.num_clients;
  const int I = params.truncation_bits;
  long long high_bits = 0;
  for (int i = 1; i <= params.n; ++i) {
    const int coord_width = i == 1 ? 0 : bit_width(static_cast<std::uint64_t>(i));
    const int w = std::max(coord_width - I, 0);
    if (w > 0) {
      // High-part ring L * 2^w, widened so the server recovers the true sum.
      const std::uint64_t q1 = static_cast<std::uint64_t>(L) << w;
      high_bits += bit_width(q1);
    }
  }
  const long long hist_entries = 1LL << I;
  const long long hist_bits = static_cast<long long>(params.n) * hist_entries *
                              bit_width(static_cast<std::uint64_t>(L) + 1);
  CostLedger ledger;
  ledger.protocol = "lehmer";
  ledger.num_clients = L;
  ledger.high_part_bits_per_client = high_bits;
  ledger.histogram_bits_per_client = hist_bits;
  ledger.bits_per_client = high_bits + hist_bits;
  ledger.total_bits = ledger.bits_per_client * L;
  if (params.total_samples > 0 && params.p > 0.0 && params.p < 1.0 &&
      params.epsilon > 0.0) {
    const double span =
        2.0 *
            (std::log2(static_cast<double>(params.total_samples) * params.n *
                       params.n / params.epsilon) /
             std::log2(1.0 / params.p)) +
        1.0;
    ledger.asymptotic_bits =
        L * (params.n * (std::log2(static_cast<double>(params.n)) -
                         std::log2(span)) +
             span * std::log2(static_cast<double>(L)));
  }
  ledger.notes =
      "high part in Z_{L*2^w}, w = max(ceil(log2 i)-I,0); histogram in "
      "Z_{L+1}; asymptotic form is L*(N*(log2 N - log2 s) + s*log2 L), "
      "s = 2*log2(M*N^2/eps)/log2(1/p) + 1";
  return ledger;
}

}  // namespace fra
