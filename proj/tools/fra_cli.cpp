#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fra/baselines.hpp"
#include "fra/data_ingest.hpp"
#include "fra/harness.hpp"
#include "fra/lehmer_fed.hpp"
#include "fra/mallows.hpp"
#include "fra/rng.hpp"

namespace {

fra::Permutation parse_centroid_arg(const std::string& text, int n) {
  if (text.empty() || text == "identity") return fra::Permutation::identity(n);
  std::vector<int> ranks;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) ranks.push_back(std::stoi(part));
  return fra::Permutation(std::move(ranks));
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  return file;
}

fra::ClientDataset load_dataset(const std::string& path,
                                const std::string& kind,
                                const std::string& partition, int clients,
                                int group_min_size, int ballot_n,
                                std::uint64_t seed) {
  fra::LoadedRankings loaded;
  if (kind == "rankings") {
    loaded = fra::load_rankings_csv(path);
  } else if (kind == "scores") {
    loaded = fra::load_scores_csv(path, fra::TieRule::kByIndex);
  } else if (kind == "ballots") {
    loaded = fra::load_ballots_csv(path, ballot_n, seed);
  } else {
    throw std::runtime_error("unknown dataset kind: " + kind);
  }
  if (loaded.dropped_rows > 0)
    std::cerr << "dropped " << loaded.dropped_rows << " incomplete rows\n";
  fra::ClientDataset data;
  if (partition == "group") {
    data = fra::partition_by_group(loaded, group_min_size);
  } else {
    data = fra::partition_random_shards(loaded, clients, seed);
  }
  if (data.dropped > 0)
    std::cerr << "dropped " << data.dropped
              << " rankings from undersized groups\n";
  return data;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated rank aggregation toolkit"};
  app.require_subcommand(1);

  // synth: emit Mallows ranking CSVs.
  auto* synth = app.add_subcommand("synth", "Sample Mallows rankings to CSV");
  int synth_n = 10;
  double synth_phi = 0.5;
  int synth_count = 100;
  std::string synth_centroid;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  synth->add_option("--n", synth_n, "Number of items")->check(CLI::PositiveNumber);
  synth->add_option("--phi", synth_phi, "Mallows scale in (0,1)");
  synth->add_option("--count", synth_count, "Number of samples");
  synth->add_option("--centroid", synth_centroid,
                    "Centroid as comma-separated positions (default identity)");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("-o,--output", synth_out, "Output path (default stdout)");

  // centroids: emit a quantization table cache.
  auto* centroids = app.add_subcommand(
      "centroids", "Compute and cache Borda quantization centroids");
  int cent_n = 10;
  double cent_phi = 0.5;
  std::string cent_out;
  std::string cent_method = "auto";
  long long cent_samples = 100000;
  std::uint64_t cent_seed = 1;
  centroids->add_option("--n", cent_n)->check(CLI::PositiveNumber);
  centroids->add_option("--phi", cent_phi);
  centroids->add_option("--method", cent_method,
                        "auto | exact | recursive | mc");
  centroids->add_option("--samples", cent_samples, "MC sample count");
  centroids->add_option("--seed", cent_seed, "MC seed");
  centroids->add_option("-o,--output", cent_out, "Cache file path");

  // aggregate: one round on a dataset.
  auto* aggregate = app.add_subcommand("aggregate", "Run one aggregation round");
  std::string agg_dataset, agg_kind = "rankings", agg_partition = "shards";
  std::string agg_method = "borda_fra";
  double agg_phi = 0.5, agg_epsilon = 0.05;
  int agg_clients = 10, agg_group_min = 1, agg_ballot_n = 0;
  std::uint64_t agg_seed = 1;
  bool agg_no_mask = false;
  std::optional<long long> agg_total_samples;
  std::string agg_table, agg_out;
  aggregate->add_option("dataset", agg_dataset, "Input CSV")->required();
  aggregate->add_option("--kind", agg_kind, "rankings | scores | ballots");
  aggregate->add_option("--method", agg_method,
                        "borda_central | borda_fra | lehmer_central | "
                        "lehmer_fra | footrule | kemeny_bruteforce");
  aggregate->add_option("--phi", agg_phi, "Quantization-table phi");
  aggregate->add_option("--epsilon", agg_epsilon, "Truncation-bit budget");
  aggregate->add_option("--clients", agg_clients, "Shard count");
  aggregate->add_option("--partition", agg_partition, "shards | group");
  aggregate->add_option("--group-min-size", agg_group_min,
                        "Minimum group size for group partitioning");
  aggregate->add_option("--ballot-n", agg_ballot_n, "Item count for ballots");
  aggregate->add_option("--total-samples", agg_total_samples,
                        "Override M in the truncation-bit formula");
  aggregate->add_option("--table", agg_table, "Cached quantization table");
  aggregate->add_option("--seed", agg_seed, "Round seed");
  aggregate->add_flag("--no-mask", agg_no_mask, "Mask-free debug path");
  aggregate->add_option("-o,--output", agg_out, "Report path (default stdout)");

  // experiment: run a config-file sweep.
  auto* experiment = app.add_subcommand("experiment", "Run a sweep from a config");
  std::string exp_config, exp_out;
  experiment->add_option("config", exp_config, "Config file")->required();
  experiment->add_option("-o,--output", exp_out, "CSV path (default stdout)");

  // eval: metrics for a candidate permutation against a dataset.
  auto* eval = app.add_subcommand("eval", "Score a candidate against a dataset");
  std::string eval_dataset, eval_kind = "rankings", eval_candidate;
  int eval_ballot_n = 0;
  std::uint64_t eval_seed = 1;
  eval->add_option("dataset", eval_dataset, "Input CSV")->required();
  eval->add_option("candidate", eval_candidate,
                   "Candidate as comma-separated positions")
      ->required();
  eval->add_option("--kind", eval_kind, "rankings | scores | ballots");
  eval->add_option("--ballot-n", eval_ballot_n, "Item count for ballots");
  eval->add_option("--seed", eval_seed, "Ballot completion seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const fra::Permutation centroid = parse_centroid_arg(synth_centroid, synth_n);
      const fra::MallowsParams params(synth_n, synth_phi, centroid);
      fra::Rng rng(synth_seed);
      std::ofstream file;
      std::ostream& out = open_output(file, synth_out);
      for (int s = 0; s < synth_count; ++s)
        out << fra::sample(params, rng).to_string() << '\n';
    } else if (*centroids) {
      fra::QuantTable table;
      if (cent_method == "auto") {
        table = fra::make_quant_table(cent_n, cent_phi);
      } else if (cent_method == "exact") {
        table = fra::expected_positions_exact(cent_n, cent_phi);
      } else if (cent_method == "recursive") {
        table = fra::expected_positions_recursive(cent_n, cent_phi);
      } else if (cent_method == "mc") {
        fra::Rng rng(cent_seed);
        table = fra::expected_positions_mc(cent_n, cent_phi, cent_samples, rng);
      } else {
        throw std::runtime_error("unknown method: " + cent_method);
      }
      if (cent_out.empty()) {
        for (double c : table.centroids) std::cout << c << '\n';
      } else {
        fra::save_quant_table(table, cent_out);
      }
    } else if (*aggregate) {
      const fra::ClientDataset data =
          load_dataset(agg_dataset, agg_kind, agg_partition, agg_clients,
                       agg_group_min, agg_ballot_n, agg_seed);
      fra::ProtocolParams params;
      params.phi = agg_phi;
      params.epsilon = agg_epsilon;
      params.masked = !agg_no_mask;
      params.total_samples_override = agg_total_samples;
      fra::QuantTable table;
      const fra::QuantTable* table_ptr = nullptr;
      if (!agg_table.empty()) {
        table = fra::load_quant_table(agg_table);
        table_ptr = &table;
      }
      const fra::FRAReport report =
          fra::run_federated_round(data, fra::parse_method(agg_method), params,
                                   agg_seed, table_ptr);
      std::ofstream file;
      fra::write_report(report, open_output(file, agg_out));
    } else if (*experiment) {
      const fra::ExperimentConfig config =
          fra::parse_experiment_config(exp_config);
      const std::vector<fra::SweepRow> rows = fra::run_experiment_sweep(config);
      std::ofstream file;
      fra::write_sweep_csv(rows, open_output(file, exp_out));
    } else if (*eval) {
      fra::LoadedRankings loaded;
      if (eval_kind == "rankings") {
        loaded = fra::load_rankings_csv(eval_dataset);
      } else if (eval_kind == "scores") {
        loaded = fra::load_scores_csv(eval_dataset, fra::TieRule::kByIndex);
      } else if (eval_kind == "ballots") {
        loaded = fra::load_ballots_csv(eval_dataset, eval_ballot_n, eval_seed);
      } else {
        throw std::runtime_error("unknown dataset kind: " + eval_kind);
      }
      std::vector<int> ranks;
      std::istringstream is(eval_candidate);
      std::string part;
      while (std::getline(is, part, ',')) ranks.push_back(std::stoi(part));
      const fra::Permutation candidate(std::move(ranks));
      std::cout << "kemeny_objective: "
                << fra::kemeny_objective(candidate, loaded.rankings) << '\n';
      long long total_kt = 0, total_fr = 0;
      for (const auto& sigma : loaded.rankings) {
        total_kt += fra::kendall_tau(candidate, sigma);
        total_fr += fra::spearman_footrule(candidate, sigma);
      }
      std::cout << "mean_kendall_tau: "
                << static_cast<double>(total_kt) / loaded.rankings.size()
                << '\n';
      std::cout << "mean_footrule: "
                << static_cast<double>(total_fr) / loaded.rankings.size()
                << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
