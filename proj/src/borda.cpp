#include "fra/borda.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fra {
namespace {

// Items ranked by increasing average position, ties to the smaller index;
// returns the item->position estimate.
BordaEstimate rank_by_averages(std::vector<double> averages) {
  const int n = static_cast<int>(averages.size());
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 1);
  std::stable_sort(items.begin(), items.end(), [&](int x, int y) {
    return averages[x - 1] < averages[y - 1];
  });
  std::vector<int> ranks(n);
  for (int pos = 0; pos < n; ++pos) ranks[items[pos] - 1] = pos + 1;
  return BordaEstimate{Permutation(std::move(ranks)), std::move(averages)};
}

}  // namespace

std::uint64_t borda_ring_modulus(int n, int num_clients) {
  const std::uint64_t nl =
      static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(num_clients);
  std::uint64_t q = 1;
  while (q <= nl) q <<= 1;
  return q;
}

BordaEstimate central_borda(std::span<const Permutation> rankings) {
  if (rankings.empty()) throw std::invalid_argument("no rankings to aggregate");
  const int n = rankings.front().size();
  std::vector<double> averages(n, 0.0);
  for (const Permutation& sigma : rankings) {
    if (sigma.size() != n)
      throw std::invalid_argument("ranking length mismatch in Borda input");
    for (int i = 1; i <= n; ++i) averages[i - 1] += sigma.rank_of(i);
  }
  for (double& a : averages) a /= static_cast<double>(rankings.size());
  return rank_by_averages(std::move(averages));
}

BordaClientMessage client_borda_message(std::span<const Permutation> local,
                                        const QuantTable& table) {
  if (local.empty()) throw std::invalid_argument("client holds no rankings");
  const int n = table.n;
  std::vector<double> averages(n, 0.0);
  for (const Permutation& sigma : local) {
    if (sigma.size() != n)
      throw std::invalid_argument("ranking length does not match quant table");
    for (int i = 1; i <= n; ++i) averages[i - 1] += sigma.rank_of(i);
  }
  BordaClientMessage msg;
  msg.quantized.resize(n);
  for (int i = 0; i < n; ++i)
    msg.quantized[i] =
        table.quantize(averages[i] / static_cast<double>(local.size()));
  return msg;
}

BordaEstimate server_borda_aggregate(const std::vector<std::uint64_t>& unmasked_sum,
                                     int num_clients) {
  if (num_clients < 1) throw std::invalid_argument("need at least one client");
  const int n = static_cast<int>(unmasked_sum.size());
  std::vector<double> averages(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t s = unmasked_sum[i];
    if (s < static_cast<std::uint64_t>(num_clients) ||
        s > static_cast<std::uint64_t>(n) * num_clients)
      throw std::invalid_argument("aggregate sum outside [L, N*L]");
    averages[i] = static_cast<double>(s) / num_clients;
  }
  return rank_by_averages(std::move(averages));
}

}  // namespace fra
