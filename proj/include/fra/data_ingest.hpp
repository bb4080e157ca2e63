#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fra/permutation.hpp"

namespace fra {

struct ClientShard {
  std::string label;
  std::vector<Permutation> rankings;
};

struct ClientDataset {
  int n = 0;
  std::vector<ClientShard> clients;
  long long dropped = 0;  // rows/groups excluded during partitioning

  long long total_samples() const;
  std::vector<Permutation> pooled() const;
};

struct LoadedRankings {
  std::vector<Permutation> rankings;
  std::vector<std::string> labels;  // empty when the file had no label column
  long long dropped_rows = 0;
};

// One permutation per line, N comma-separated 1-indexed positions; an
// optional leading non-numeric label column is captured per row.
LoadedRankings load_rankings_csv(const std::string& path);

// Header row of item names, one row of real scores per individual. Rows with
// any missing cell are dropped and counted.
LoadedRankings load_scores_csv(const std::string& path, TieRule tie_rule,
                               std::uint64_t seed = 0);

// One ballot per line: ordered comma-separated item ids, prefix order =
// preference order; completed to full rankings with a run-level seed.
// Duplicate marks on a ballot keep the first occurrence.
LoadedRankings load_ballots_csv(const std::string& path, int n,
                                std::uint64_t seed);

ClientDataset partition_by_group(const LoadedRankings& data, int min_size);
ClientDataset partition_random_shards(const LoadedRankings& data, int num_shards,
                                      std::uint64_t seed);

void save_labeled_csv(const ClientDataset& dataset, const std::string& path);

}  // namespace fra
