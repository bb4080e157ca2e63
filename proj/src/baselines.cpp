#include "fra/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fra {
namespace {

constexpr long long kForbidden = 1'000'000'000'000LL;

// Shortest-augmenting-path assignment with potentials, O(N^3).
AssignmentSolution hungarian(const std::vector<std::vector<long long>>& cost) {
  const int n = static_cast<int>(cost.size());
  const long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> match(n + 1, 0);  // match[column] = row (1-based)
  std::vector<int> way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int j0 = 0;
    std::vector<long long> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      long long delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  AssignmentSolution sol;
  sol.assigned.resize(n);
  for (int j = 1; j <= n; ++j) sol.assigned[match[j] - 1] = j;
  for (int i = 0; i < n; ++i) sol.total_cost += cost[i][sol.assigned[i] - 1];
  return sol;
}

void check_square(const AssignmentProblem& problem) {
  const size_t n = problem.cost.size();
  if (n == 0) throw std::invalid_argument("empty cost matrix");
  for (const auto& row : problem.cost)
    if (row.size() != n) throw std::invalid_argument("cost matrix not square");
}

}  // namespace

AssignmentSolution solve_assignment(const AssignmentProblem& problem) {
  check_square(problem);
  const int n = static_cast<int>(problem.cost.size());
  AssignmentSolution base = hungarian(problem.cost);
  if (n > 16) return base;
  // Lexicographic refinement: fix rows top-down to the smallest position that
  // still completes at the optimal cost.
  std::vector<std::vector<long long>> cost = problem.cost;
  std::vector<bool> taken(n, false);
  std::vector<int> fixed(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (taken[j]) continue;
      std::vector<long long> saved = cost[i];
      for (int c = 0; c < n; ++c)
        if (c != j) cost[i][c] += kForbidden;
      const AssignmentSolution trial = hungarian(cost);
      // Undo the penalties before judging; feasible completions carry none.
      if (trial.total_cost == base.total_cost) {
        fixed[i] = j + 1;
        taken[j] = true;
        break;
      }
      cost[i] = std::move(saved);
    }
    if (fixed[i] == 0)
      throw std::logic_error("lexicographic refinement found no completion");
  }
  AssignmentSolution sol;
  sol.assigned = fixed;
  for (int i = 0; i < n; ++i)
    sol.total_cost += problem.cost[i][fixed[i] - 1];
  return sol;
}

FootruleResult footrule_aggregate(std::span<const Permutation> rankings) {
  if (rankings.empty()) throw std::invalid_argument("no rankings to aggregate");
  const int n = rankings.front().size();
  AssignmentProblem problem;
  problem.cost.assign(n, std::vector<long long>(n, 0));
  for (const Permutation& sigma : rankings) {
    if (sigma.size() != n)
      throw std::invalid_argument("ranking length mismatch in footrule input");
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        problem.cost[i - 1][j - 1] += std::abs(sigma.rank_of(i) - j);
  }
  const AssignmentSolution sol = solve_assignment(problem);
  return FootruleResult{Permutation(sol.assigned), sol.total_cost};
}

Permutation kemeny_bruteforce(std::span<const Permutation> rankings) {
  if (rankings.empty()) throw std::invalid_argument("no rankings to aggregate");
  const int n = rankings.front().size();
  if (n > 8)
    throw std::invalid_argument("Kemeny brute force guarded at N <= 8");
  const long long m = static_cast<long long>(rankings.size());
  // before[i][j] = number of rankings placing item i+1 before item j+1.
  std::vector<std::vector<long long>> before(n, std::vector<long long>(n, 0));
  for (const Permutation& sigma : rankings) {
    if (sigma.size() != n)
      throw std::invalid_argument("ranking length mismatch in Kemeny input");
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j && sigma.rank_of(i) < sigma.rank_of(j))
          ++before[i - 1][j - 1];
  }
  std::vector<int> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1);
  std::vector<int> best = ranks;
  long long best_obj = std::numeric_limits<long long>::max();
  do {
    long long obj = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        obj += ranks[i] < ranks[j] ? m - before[i][j] : before[i][j];
    if (obj < best_obj) {  // strict: keeps the lexicographically first optimum
      best_obj = obj;
      best = ranks;
    }
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return Permutation(std::move(best));
}

double kemeny_objective(const Permutation& candidate,
                        std::span<const Permutation> rankings) {
  if (rankings.empty()) throw std::invalid_argument("no rankings to score");
  long long total = 0;
  for (const Permutation& sigma : rankings)
    total += kendall_tau(candidate, sigma);
  return static_cast<double>(total) /
         (static_cast<double>(rankings.size()) * candidate.size());
}

}  // namespace fra
