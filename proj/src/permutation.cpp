#include "fra/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fra {
namespace {

// Fenwick tree over values 1..n, prefix sums.
class Fenwick {
 public:
  explicit Fenwick(int n) : tree_(n + 1, 0) {}

  void add(int pos, int delta) {
    for (; pos < static_cast<int>(tree_.size()); pos += pos & -pos)
      tree_[pos] += delta;
  }

  int prefix(int pos) const {
    int s = 0;
    for (; pos > 0; pos -= pos & -pos) s += tree_[pos];
    return s;
  }

 private:
  std::vector<int> tree_;
};

void check_same_length(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("permutation length mismatch: " +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
}

}  // namespace

Permutation::Permutation(std::vector<int> ranks) : ranks_(std::move(ranks)) {
  const int n = static_cast<int>(ranks_.size());
  if (n < 1) throw std::invalid_argument("permutation must have length >= 1");
  std::vector<bool> seen(n, false);
  for (int v : ranks_) {
    if (v < 1 || v > n || seen[v - 1])
      throw std::invalid_argument("not a bijection of 1.." + std::to_string(n));
    seen[v - 1] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> r(n);
  std::iota(r.begin(), r.end(), 1);
  return Permutation(std::move(r));
}

Permutation Permutation::uniform_random(int n, Rng& rng) {
  std::vector<int> r(n);
  std::iota(r.begin(), r.end(), 1);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_below(i + 1));
    std::swap(r[i], r[j]);
  }
  return Permutation(std::move(r));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(ranks_.size());
  for (int i = 0; i < size(); ++i) inv[ranks_[i] - 1] = i + 1;
  return Permutation(std::move(inv));
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < size(); ++i) {
    if (i) os << ',';
    os << ranks_[i];
  }
  return os.str();
}

long long kendall_tau(const Permutation& a, const Permutation& b) {
  check_same_length(a, b);
  const int n = a.size();
  // Order items by their position in a, then count inversions of their
  // positions in b.
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 1);
  std::sort(items.begin(), items.end(),
            [&](int x, int y) { return a.rank_of(x) < a.rank_of(y); });
  Fenwick fen(n);
  long long inversions = 0;
  for (int k = n - 1; k >= 0; --k) {
    const int pos = b.rank_of(items[k]);
    inversions += fen.prefix(pos - 1);
    fen.add(pos, 1);
  }
  return inversions;
}

long long spearman_footrule(const Permutation& a, const Permutation& b) {
  check_same_length(a, b);
  long long total = 0;
  for (int i = 1; i <= a.size(); ++i)
    total += std::abs(a.rank_of(i) - b.rank_of(i));
  return total;
}

LehmerCode lehmer_encode(const Permutation& sigma) {
  const int n = sigma.size();
  Fenwick fen(n);
  LehmerCode code;
  code.coords.resize(n);
  for (int i = 1; i <= n; ++i) {
    const int v = sigma.rank_of(i);
    // Earlier items with rank > v.
    code.coords[i - 1] = (i - 1) - fen.prefix(v);
    fen.add(v, 1);
  }
  return code;
}

Permutation lehmer_decode(const LehmerCode& code) {
  const int n = static_cast<int>(code.coords.size());
  if (n < 1) throw std::invalid_argument("empty Lehmer code");
  for (int i = 1; i <= n; ++i) {
    const int c = code.coords[i - 1];
    if (c < 0 || c > i - 1)
      throw std::invalid_argument("Lehmer coordinate " + std::to_string(i) +
                                  " out of range: " + std::to_string(c));
  }
  // Insert items N..1; item i has code.coords[i-1] later-inserted items ranked
  // better than it. Work right-to-left over a free-slot list.
  //
  // Equivalent textbook construction: process items from last to first,
  // item i takes the (c_i+1)-th free position counted from the worst end
  // of the positions already containing items > i ... simpler to rebuild via
  // the inverse: assign positions best-to-worst.
  //
  // Use the direct O(N^2) reconstruction on an explicit slot vector; N here is
  // at most ~1000 in practice.
  std::vector<int> ranks(n, 0);
  // Relative order list of items processed so far, best rank first.
  std::vector<int> order;
  order.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const int c = code.coords[i - 1];
    // Item i is beaten by exactly (i-1-c) of the earlier items.
    order.insert(order.begin() + (i - 1 - c), i);
  }
  for (int pos = 0; pos < n; ++pos) ranks[order[pos] - 1] = pos + 1;
  return Permutation(std::move(ranks));
}

DisplacementVector relabel_displacement(const Permutation& sigma,
                                        const Permutation& sigma0) {
  check_same_length(sigma, sigma0);
  const Permutation inv0 = sigma0.inverse();
  const int n = sigma.size();
  // rho(i) = sigma(inv0(i)); displacement = Lehmer code of rho.
  std::vector<int> rho(n);
  for (int i = 1; i <= n; ++i) rho[i - 1] = sigma.rank_of(inv0.rank_of(i));
  const LehmerCode code = lehmer_encode(Permutation(std::move(rho)));
  return DisplacementVector{code.coords};
}

Permutation scores_to_ranking(std::span<const double> scores, TieRule tie_rule,
                              Rng* rng) {
  const int n = static_cast<int>(scores.size());
  if (n < 1) throw std::invalid_argument("empty score vector");
  for (double s : scores)
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite score");
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 1);
  std::vector<std::uint64_t> jitter;
  if (tie_rule == TieRule::kSeededRandom) {
    if (rng == nullptr)
      throw std::invalid_argument("seeded_random tie rule requires an rng");
    jitter.resize(n);
    for (auto& j : jitter) j = rng->next_u64();
  }
  std::stable_sort(items.begin(), items.end(), [&](int x, int y) {
    if (scores[x - 1] != scores[y - 1]) return scores[x - 1] > scores[y - 1];
    if (tie_rule == TieRule::kSeededRandom) return jitter[x - 1] < jitter[y - 1];
    return x < y;
  });
  std::vector<int> ranks(n);
  for (int pos = 0; pos < n; ++pos) ranks[items[pos] - 1] = pos + 1;
  return Permutation(std::move(ranks));
}

Permutation partial_to_full(std::span<const int> ranked_prefix, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::vector<bool> used(n, false);
  std::vector<int> order(ranked_prefix.begin(), ranked_prefix.end());
  for (int item : order) {
    if (item < 1 || item > n)
      throw std::invalid_argument("prefix item out of range: " +
                                  std::to_string(item));
    if (used[item - 1])
      throw std::invalid_argument("duplicate prefix item: " +
                                  std::to_string(item));
    used[item - 1] = true;
  }
  std::vector<int> tail;
  for (int item = 1; item <= n; ++item)
    if (!used[item - 1]) tail.push_back(item);
  for (int i = static_cast<int>(tail.size()) - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_below(i + 1));
    std::swap(tail[i], tail[j]);
  }
  order.insert(order.end(), tail.begin(), tail.end());
  std::vector<int> ranks(n);
  for (int pos = 0; pos < n; ++pos) ranks[order[pos] - 1] = pos + 1;
  return Permutation(std::move(ranks));
}

}  // namespace fra
