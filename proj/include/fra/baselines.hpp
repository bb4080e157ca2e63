#pragma once

#include <span>
#include <vector>

#include "fra/permutation.hpp"

namespace fra {

// cost[i][j] = cost of assigning item i+1 to position j+1 (0-based storage).
struct AssignmentProblem {
  std::vector<std::vector<long long>> cost;
};

struct AssignmentSolution {
  std::vector<int> assigned;  // assigned[i] = 1-based position of item i+1
  long long total_cost = 0;
};

// Optimal assignment via shortest augmenting paths, O(N^3). Among equal-cost
// optima the lexicographically smallest assignment vector is returned for
// N <= 16 (row-by-row refinement); larger instances return the solver's
// deterministic optimum.
AssignmentSolution solve_assignment(const AssignmentProblem& problem);

struct FootruleResult {
  Permutation estimate;
  long long optimal_cost = 0;  // the minimized footrule objective
};

// Minimum-weight bipartite matching under the footrule objective
// sum_i sum_m |sigma_m(i) - assigned(i)|.
FootruleResult footrule_aggregate(std::span<const Permutation> rankings);

// Exact Kemeny consensus by enumeration; guarded at N <= 8. Ties go to the
// lexicographically smallest optimum.
Permutation kemeny_bruteforce(std::span<const Permutation> rankings);

// (1 / (M*N)) * sum_m K_tau(candidate, sigma_m).
double kemeny_objective(const Permutation& candidate,
                        std::span<const Permutation> rankings);

}  // namespace fra
