#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "fra/harness.hpp"

using fra::ClientDataset;
using fra::ClientShard;
using fra::ExperimentConfig;
using fra::FRAReport;
using fra::Method;
using fra::Permutation;
using fra::ProtocolParams;

namespace {

Permutation perm(std::vector<int> ranks) { return Permutation(std::move(ranks)); }

ClientDataset unanimous_dataset(const Permutation& sigma, int clients,
                                int per_client) {
  ClientDataset out;
  out.n = sigma.size();
  for (int l = 0; l < clients; ++l) {
    ClientShard shard;
    shard.label = "c" + std::to_string(l);
    shard.rankings.assign(per_client, sigma);
    out.clients.push_back(std::move(shard));
  }
  return out;
}

const std::vector<Method> kAllMethods{
    Method::kBordaCentral, Method::kBordaFra,   Method::kLehmerCentral,
    Method::kLehmerFra,    Method::kFootrule,   Method::kKemenyBruteforce};

}  // namespace

TEST_CASE("method names roundtrip") {
  for (Method m : kAllMethods) CHECK(fra::parse_method(fra::method_name(m)) == m);
  CHECK(fra::parse_method("borda_fra") == Method::kBordaFra);
  CHECK_THROWS_AS(fra::parse_method("nope"), std::invalid_argument);
}

TEST_CASE("unanimous dataset: every method returns the common ranking") {
  const Permutation sigma = perm({3, 1, 4, 2, 5});
  const ClientDataset data = unanimous_dataset(sigma, 4, 3);
  ProtocolParams params;
  for (Method m : kAllMethods) {
    const FRAReport report = fra::run_federated_round(data, m, params, 7);
    CHECK(report.estimate == sigma);
    CHECK(report.kemeny_objective_value == 0.0);
    CHECK_FALSE(report.kendall_to_centroid.has_value());
  }
}

TEST_CASE("kendall metric and ledger fields") {
  const Permutation sigma = perm({1, 2, 3, 4});
  const Permutation centroid = perm({2, 1, 3, 4});
  const ClientDataset data = unanimous_dataset(sigma, 3, 2);
  ProtocolParams params;
  const FRAReport report = fra::run_federated_round(
      data, Method::kLehmerFra, params, 11, nullptr, &centroid);
  REQUIRE(report.kendall_to_centroid.has_value());
  CHECK(*report.kendall_to_centroid == 1);
  REQUIRE(report.ledger.has_value());
  CHECK(report.ledger->num_clients == 3);
  CHECK(report.ledger->total_bits ==
        report.ledger->bits_per_client * report.ledger->num_clients);
  CHECK(report.truncation_bits >= 1);

  const FRAReport central = fra::run_federated_round(
      data, Method::kBordaCentral, params, 11, nullptr, &centroid);
  CHECK_FALSE(central.ledger.has_value());
}

TEST_CASE("L=1 borda_fra equals central borda plus quantization") {
  // One client, one ranking per: quantization of integer averages is lossless.
  const Permutation sigma = perm({4, 2, 1, 3});
  const ClientDataset data = unanimous_dataset(sigma, 1, 1);
  ProtocolParams params;
  const FRAReport fed =
      fra::run_federated_round(data, Method::kBordaFra, params, 3);
  const FRAReport central =
      fra::run_federated_round(data, Method::kBordaCentral, params, 3);
  CHECK(fed.estimate == central.estimate);
}

TEST_CASE("masked and unmasked paths agree on every method") {
  ClientDataset data;
  data.n = 5;
  fra::Rng rng(17);
  for (int l = 0; l < 6; ++l) {
    ClientShard shard;
    shard.label = "c" + std::to_string(l);
    for (int m = 0; m < 4; ++m)
      shard.rankings.push_back(Permutation::uniform_random(5, rng));
    data.clients.push_back(std::move(shard));
  }
  for (Method m : kAllMethods) {
    ProtocolParams masked;
    ProtocolParams open;
    open.masked = false;
    const FRAReport a = fra::run_federated_round(data, m, masked, 29);
    const FRAReport b = fra::run_federated_round(data, m, open, 29);
    CHECK(a.estimate == b.estimate);
    CHECK(a.kemeny_objective_value == b.kemeny_objective_value);
  }
}

TEST_CASE("run_federated_round is deterministic in the seed") {
  ClientDataset data;
  data.n = 6;
  fra::Rng rng(5);
  for (int l = 0; l < 3; ++l) {
    ClientShard shard;
    shard.label = "c";
    for (int m = 0; m < 5; ++m)
      shard.rankings.push_back(Permutation::uniform_random(6, rng));
    data.clients.push_back(std::move(shard));
  }
  ProtocolParams params;
  for (Method m : {Method::kLehmerFra, Method::kBordaFra}) {
    const FRAReport a = fra::run_federated_round(data, m, params, 123);
    const FRAReport b = fra::run_federated_round(data, m, params, 123);
    CHECK(a.estimate == b.estimate);
    std::ostringstream ra, rb;
    fra::write_report(a, ra);
    fra::write_report(b, rb);
    CHECK(ra.str() == rb.str());
  }
}

TEST_CASE("total_samples_override feeds the truncation-bit formula") {
  const Permutation sigma = Permutation::identity(10);
  const ClientDataset data = unanimous_dataset(sigma, 2, 1);
  ProtocolParams small;
  small.total_samples_override = 2;
  ProtocolParams large;
  large.total_samples_override = 1000000;
  const FRAReport a =
      fra::run_federated_round(data, Method::kLehmerFra, small, 1);
  const FRAReport b =
      fra::run_federated_round(data, Method::kLehmerFra, large, 1);
  CHECK(a.truncation_bits <= b.truncation_bits);
}

TEST_CASE("parse_experiment_config") {
  const std::string path = "harness_config_test.txt";
  {
    std::ofstream out(path);
    out << "# sweep over per-client sample counts\n"
        << "methods = borda_fra, lehmer_fra\n"
        << "n = 6\n"
        << "phi = 0.4\n"
        << "clients = 5\n"
        << "axis = m\n"
        << "axis_values = 1, 5, 10\n"
        << "trials = 2\n"
        << "seed = 77\n"
        << "masked = true\n";
  }
  const ExperimentConfig config = fra::parse_experiment_config(path);
  std::remove(path.c_str());
  CHECK(config.methods ==
        std::vector<Method>{Method::kBordaFra, Method::kLehmerFra});
  CHECK(config.n == 6);
  CHECK(config.phi == doctest::Approx(0.4));
  CHECK(config.num_clients == 5);
  CHECK(config.axis == "m");
  CHECK(config.axis_values == std::vector<int>{1, 5, 10});
  CHECK(config.trials == 2);
  CHECK(config.master_seed == 77);
  CHECK(config.masked);

  const std::string bad = "harness_config_bad.txt";
  {
    std::ofstream out(bad);
    out << "axis = sideways\n";
  }
  CHECK_THROWS_AS(fra::parse_experiment_config(bad), std::runtime_error);
  std::remove(bad.c_str());
}

TEST_CASE("run_experiment_sweep shape and determinism") {
  ExperimentConfig config;
  config.methods = {Method::kBordaFra, Method::kBordaCentral};
  config.n = 5;
  config.phi = 0.3;
  config.num_clients = 4;
  config.axis = "m";
  config.axis_values = {2, 8};
  config.trials = 3;
  config.master_seed = 9;

  const std::vector<fra::SweepRow> rows = fra::run_experiment_sweep(config);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.trials == 3);
    CHECK(row.mean_kendall >= 0.0);
    CHECK(row.recovery_rate >= 0.0);
    CHECK(row.recovery_rate <= 1.0);
  }

  std::ostringstream a, b;
  fra::write_sweep_csv(rows, a);
  fra::write_sweep_csv(fra::run_experiment_sweep(config), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("method,axis_value,", 0) == 0);
}

TEST_CASE("sweep error decreases with more samples per client") {
  ExperimentConfig config;
  config.methods = {Method::kLehmerFra};
  config.n = 6;
  config.phi = 0.3;
  config.num_clients = 5;
  config.axis = "m";
  config.axis_values = {1, 40};
  config.trials = 10;
  config.master_seed = 33;

  const std::vector<fra::SweepRow> rows = fra::run_experiment_sweep(config);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].mean_kendall <= rows[0].mean_kendall);
  CHECK(rows[1].recovery_rate >= rows[0].recovery_rate);
}
