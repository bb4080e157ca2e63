#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fra/data_ingest.hpp"
#include "fra/mallows.hpp"
#include "fra/permutation.hpp"
#include "fra/secure_agg.hpp"

namespace fra {

enum class Method {
  kBordaCentral,
  kBordaFra,
  kLehmerCentral,
  kLehmerFra,
  kFootrule,
  kKemenyBruteforce,
};

Method parse_method(const std::string& name);
std::string method_name(Method method);

struct ProtocolParams {
  double phi = 0.5;        // quantization tables and the displacement ratio
  double epsilon = 0.05;   // concentration budget in the truncation-bit formula
  bool masked = true;      // false selects the mask-free debug path
  // M used in the truncation-bit formula; defaults to the true pooled count.
  std::optional<long long> total_samples_override;
};

struct FRAReport {
  Method method = Method::kBordaCentral;
  Permutation estimate;
  double kemeny_objective_value = 0.0;
  std::optional<long long> kendall_to_centroid;  // set when sigma0 is known
  std::optional<CostLedger> ledger;              // federated methods only
  int truncation_bits = 0;                       // Lehmer FRA only
  bool masked = true;
  std::uint64_t seed = 0;
};

// One end-to-end round: client messages, mask dealing, aggregation, server
// step, metrics. Deterministic given (inputs, seed). `table` may supply a
// cached quantization table for Borda FRA; `true_centroid` enables the
// Kendall-tau metric.
FRAReport run_federated_round(const ClientDataset& clients, Method method,
                              const ProtocolParams& params, std::uint64_t seed,
                              const QuantTable* table = nullptr,
                              const Permutation* true_centroid = nullptr);

void write_report(const FRAReport& report, std::ostream& out);

struct ExperimentConfig {
  std::vector<Method> methods;
  // Synthetic source (used when dataset_path is empty).
  int n = 10;
  double phi = 0.5;
  std::optional<Permutation> centroid;  // identity when unset
  int num_clients = 10;
  int samples_per_client = 10;
  // Dataset source.
  std::string dataset_path;
  std::string dataset_kind = "rankings";  // rankings | scores | ballots
  int ballot_n = 0;
  std::string partition = "shards";  // shards | group
  int group_min_size = 1;
  // Sweep axis: "m" (samples/client), "L" (client count), "k" (per-client
  // truncation of a real dataset).
  std::string axis = "m";
  std::vector<int> axis_values;
  double epsilon = 0.05;
  int trials = 1;
  std::uint64_t master_seed = 1;
  bool masked = true;
};

// Structured key-value config file, one `key = value` pair per line,
// '#' comments. Lists are comma-separated.
ExperimentConfig parse_experiment_config(const std::string& path);

struct SweepRow {
  std::string method;
  int axis_value = 0;
  double mean_kendall = 0.0;       // NaN when no ground truth
  double mean_kemeny = 0.0;
  double recovery_rate = 0.0;      // NaN when no ground truth
  long long total_bits = 0;        // 0 for centralized methods
  int trials = 0;
};

std::vector<SweepRow> run_experiment_sweep(const ExperimentConfig& config);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace fra
