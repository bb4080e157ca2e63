#include "fra/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fra/baselines.hpp"
#include "fra/borda.hpp"
#include "fra/lehmer_fed.hpp"
#include "fra/rng.hpp"

namespace fra {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Secure-sum helper: either the masked path (deal, mask, modular sum) or the
// mask-free debug sum. Both produce the exact integer sums because every ring
// is sized above the maximum possible sum.
std::vector<std::uint64_t> secure_sum(
    const std::vector<std::vector<std::uint64_t>>& messages,
    const RingLayout& moduli, bool masked, Rng& mask_rng) {
  const int L = static_cast<int>(messages.size());
  if (!masked || L < 2) {
    std::vector<std::uint64_t> sum(moduli.size(), 0);
    for (const auto& msg : messages)
      for (size_t k = 0; k < moduli.size(); ++k)
        sum[k] = (sum[k] + msg[k]) % moduli[k];
    return sum;
  }
  const MaskSet masks = deal_masks(L, moduli, mask_rng);
  std::vector<std::vector<std::uint64_t>> wire(L);
  for (int l = 0; l < L; ++l)
    wire[l] = mask_message(messages[l], masks.masks[l], moduli);
  return unmask_sum(wire, moduli);
}

Permutation run_borda_fra(const ClientDataset& clients,
                          const ProtocolParams& params, const QuantTable* table,
                          Rng& mask_rng, CostLedger& ledger) {
  const int L = static_cast<int>(clients.clients.size());
  QuantTable local_table;
  if (table == nullptr || table->n != clients.n) {
    local_table = make_quant_table(clients.n, params.phi);
    table = &local_table;
  }
  const std::uint64_t q = borda_ring_modulus(clients.n, L);
  const RingLayout moduli(clients.n, q);
  std::vector<std::vector<std::uint64_t>> messages;
  messages.reserve(L);
  for (const auto& client : clients.clients) {
    const BordaClientMessage msg = client_borda_message(client.rankings, *table);
    std::vector<std::uint64_t> coords(msg.quantized.begin(), msg.quantized.end());
    messages.push_back(std::move(coords));
  }
  const std::vector<std::uint64_t> sum =
      secure_sum(messages, moduli, params.masked, mask_rng);
  ledger = tally_cost(BordaCostParams{clients.n, L});
  return server_borda_aggregate(sum, L).estimate;
}

Permutation run_lehmer_fra(const ClientDataset& clients,
                           const ProtocolParams& params, Rng& round_rng,
                           CostLedger& ledger, int& bits_out) {
  const int n = clients.n;
  const int L = static_cast<int>(clients.clients.size());
  const DisplacementRatio ratio = displacement_p(n, params.phi);
  const long long total =
      params.total_samples_override.value_or(clients.total_samples());
  const int I = truncation_bits_I(total, n, params.epsilon, ratio.p);
  bits_out = I;

  std::vector<LehmerSplitMessage> msgs;
  msgs.reserve(L);
  for (int l = 0; l < L; ++l) {
    Rng tie_rng = round_rng.derive(0xC11E47, l);
    msgs.push_back(
        client_lehmer_message(clients.clients[l].rankings, I, tie_rng));
  }

  // Wire layout: high parts for coordinates with a nonempty top half, then
  // every histogram entry.
  std::vector<int> high_coords;
  for (int i = 1; i <= n; ++i)
    if (lehmer_high_width(i, I) > 0) high_coords.push_back(i);
  RingLayout moduli;
  for (int i : high_coords)
    moduli.push_back(static_cast<std::uint64_t>(L)
                     << lehmer_high_width(i, I));
  const std::uint64_t hist_size = 1ULL << I;
  for (int i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < hist_size; ++j)
      moduli.push_back(static_cast<std::uint64_t>(L) + 1);

  std::vector<std::vector<std::uint64_t>> wire(L);
  for (int l = 0; l < L; ++l) {
    auto& flat = wire[l];
    for (int i : high_coords) flat.push_back(msgs[l].high_parts[i - 1]);
    for (int i = 0; i < n; ++i)
      flat.insert(flat.end(), msgs[l].low_hists[i].begin(),
                  msgs[l].low_hists[i].end());
  }
  Rng mask_rng = round_rng.derive(0x3A5B);
  const std::vector<std::uint64_t> sum =
      secure_sum(wire, moduli, params.masked, mask_rng);

  std::vector<std::uint64_t> summed_high(n, 0);
  size_t cursor = 0;
  for (int i : high_coords) summed_high[i - 1] = sum[cursor++];
  std::vector<std::vector<std::uint64_t>> summed_hists(n);
  for (int i = 0; i < n; ++i) {
    summed_hists[i].assign(sum.begin() + cursor, sum.begin() + cursor + hist_size);
    cursor += hist_size;
  }

  ledger = tally_cost(LehmerCostParams{n, L, I, total, params.epsilon, ratio.p});
  return server_lehmer_aggregate(summed_high, summed_hists, L, I);
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "borda_central") return Method::kBordaCentral;
  if (name == "borda_fra") return Method::kBordaFra;
  if (name == "lehmer_central") return Method::kLehmerCentral;
  if (name == "lehmer_fra") return Method::kLehmerFra;
  if (name == "footrule") return Method::kFootrule;
  if (name == "kemeny_bruteforce") return Method::kKemenyBruteforce;
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kBordaCentral: return "borda_central";
    case Method::kBordaFra: return "borda_fra";
    case Method::kLehmerCentral: return "lehmer_central";
    case Method::kLehmerFra: return "lehmer_fra";
    case Method::kFootrule: return "footrule";
    case Method::kKemenyBruteforce: return "kemeny_bruteforce";
  }
  throw std::logic_error("unhandled method");
}

FRAReport run_federated_round(const ClientDataset& clients, Method method,
                              const ProtocolParams& params, std::uint64_t seed,
                              const QuantTable* table,
                              const Permutation* true_centroid) {
  if (clients.clients.empty()) throw std::invalid_argument("no clients");
  for (const auto& c : clients.clients)
    if (c.rankings.empty())
      throw std::invalid_argument("client '" + c.label + "' holds no rankings");
  Rng round_rng(seed);
  const std::vector<Permutation> pooled = clients.pooled();

  FRAReport report;
  report.method = method;
  report.masked = params.masked;
  report.seed = seed;
  CostLedger ledger;
  switch (method) {
    case Method::kBordaCentral:
      report.estimate = central_borda(pooled).estimate;
      break;
    case Method::kBordaFra: {
      Rng mask_rng = round_rng.derive(0x3A5B);
      report.estimate =
          run_borda_fra(clients, params, table, mask_rng, ledger);
      report.ledger = ledger;
      break;
    }
    case Method::kLehmerCentral: {
      Rng tie_rng = round_rng.derive(0xC11E47, 0);
      report.estimate = central_lehmer(pooled, tie_rng);
      break;
    }
    case Method::kLehmerFra:
      report.estimate =
          run_lehmer_fra(clients, params, round_rng, ledger,
                         report.truncation_bits);
      report.ledger = ledger;
      break;
    case Method::kFootrule:
      report.estimate = footrule_aggregate(pooled).estimate;
      break;
    case Method::kKemenyBruteforce:
      report.estimate = kemeny_bruteforce(pooled);
      break;
  }
  report.kemeny_objective_value = kemeny_objective(report.estimate, pooled);
  if (true_centroid != nullptr)
    report.kendall_to_centroid = kendall_tau(*true_centroid, report.estimate);
  return report;
}

void write_report(const FRAReport& report, std::ostream& out) {
  out << "method: " << method_name(report.method) << '\n';
  out << "estimate: " << report.estimate.to_string() << '\n';
  out << "kemeny_objective: " << report.kemeny_objective_value << '\n';
  if (report.kendall_to_centroid)
    out << "kendall_to_centroid: " << *report.kendall_to_centroid << '\n';
  out << "masked: " << (report.masked ? "true" : "false") << '\n';
  out << "seed: " << report.seed << '\n';
  if (report.truncation_bits > 0)
    out << "truncation_bits: " << report.truncation_bits << '\n';
  if (report.ledger) {
    const CostLedger& l = *report.ledger;
    out << "protocol: " << l.protocol << '\n';
    out << "clients: " << l.num_clients << '\n';
    out << "bits_per_client: " << l.bits_per_client << '\n';
    if (l.protocol == "lehmer") {
      out << "high_part_bits_per_client: " << l.high_part_bits_per_client
          << '\n';
      out << "histogram_bits_per_client: " << l.histogram_bits_per_client
          << '\n';
    }
    out << "total_bits: " << l.total_bits << '\n';
    out << "asymptotic_bits: " << l.asymptotic_bits << '\n';
    out << "ledger_notes: " << l.notes << '\n';
  }
}

ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  ExperimentConfig cfg;
  std::string line;
  long long row = 0;
  while (std::getline(in, line)) {
    ++row;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty()) continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(row) +
                               ": expected key = value");
    auto strip = [](std::string s) {
      const size_t a = s.find_first_not_of(" \t");
      const size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = strip(trimmed.substr(0, eq));
    const std::string value = strip(trimmed.substr(eq + 1));
    auto split_list = [&]() {
      std::vector<std::string> parts;
      std::istringstream is(value);
      std::string part;
      while (std::getline(is, part, ',')) parts.push_back(strip(part));
      return parts;
    };
    try {
      if (key == "methods") {
        cfg.methods.clear();
        for (const auto& m : split_list()) cfg.methods.push_back(parse_method(m));
      } else if (key == "n") {
        cfg.n = std::stoi(value);
      } else if (key == "phi") {
        cfg.phi = std::stod(value);
      } else if (key == "centroid") {
        std::vector<int> ranks;
        for (const auto& v : split_list()) ranks.push_back(std::stoi(v));
        cfg.centroid = Permutation(std::move(ranks));
      } else if (key == "clients") {
        cfg.num_clients = std::stoi(value);
      } else if (key == "samples_per_client") {
        cfg.samples_per_client = std::stoi(value);
      } else if (key == "dataset") {
        cfg.dataset_path = value;
      } else if (key == "dataset_kind") {
        cfg.dataset_kind = value;
      } else if (key == "ballot_n") {
        cfg.ballot_n = std::stoi(value);
      } else if (key == "partition") {
        cfg.partition = value;
      } else if (key == "group_min_size") {
        cfg.group_min_size = std::stoi(value);
      } else if (key == "axis") {
        cfg.axis = value;
      } else if (key == "axis_values") {
        cfg.axis_values.clear();
        for (const auto& v : split_list()) cfg.axis_values.push_back(std::stoi(v));
      } else if (key == "epsilon") {
        cfg.epsilon = std::stod(value);
      } else if (key == "trials") {
        cfg.trials = std::stoi(value);
      } else if (key == "seed") {
        cfg.master_seed = std::stoull(value);
      } else if (key == "masked") {
        cfg.masked = value == "true" || value == "1";
      } else {
        throw std::runtime_error("unknown key '" + key + "'");
      }
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(row) + ": " +
                               e.what());
    }
  }
  if (cfg.methods.empty())
    throw std::runtime_error(path + ": config declares no methods");
  if (cfg.trials < 1) throw std::runtime_error(path + ": trials must be >= 1");
  if (cfg.axis_values.empty())
    throw std::runtime_error(path + ": config declares no axis_values");
  if (cfg.axis != "m" && cfg.axis != "L" && cfg.axis != "k")
    throw std::runtime_error(path + ": axis must be m, L, or k");
  return cfg;
}

namespace {

ClientDataset synthetic_dataset(const ExperimentConfig& cfg,
                                const Permutation& centroid, int num_clients,
                                int samples_per_client, Rng& rng) {
  const MallowsParams params(cfg.n, cfg.phi, centroid);
  ClientDataset data;
  data.n = cfg.n;
  data.clients.resize(num_clients);
  for (int l = 0; l < num_clients; ++l) {
    Rng client_rng = rng.derive(0xDA7A, l);
    data.clients[l].label = "client" + std::to_string(l + 1);
    for (int s = 0; s < samples_per_client; ++s)
      data.clients[l].rankings.push_back(sample(params, client_rng));
  }
  return data;
}

ClientDataset truncate_clients(const ClientDataset& data, int k) {
  ClientDataset out;
  out.n = data.n;
  for (const auto& c : data.clients) {
    ClientShard shard;
    shard.label = c.label;
    const size_t keep = std::min<size_t>(k, c.rankings.size());
    shard.rankings.assign(c.rankings.begin(), c.rankings.begin() + keep);
    if (!shard.rankings.empty()) out.clients.push_back(std::move(shard));
  }
  return out;
}

ClientDataset load_configured_dataset(const ExperimentConfig& cfg) {
  LoadedRankings loaded;
  if (cfg.dataset_kind == "rankings") {
    loaded = load_rankings_csv(cfg.dataset_path);
  } else if (cfg.dataset_kind == "scores") {
    loaded = load_scores_csv(cfg.dataset_path, TieRule::kByIndex);
  } else if (cfg.dataset_kind == "ballots") {
    if (cfg.ballot_n < 1)
      throw std::runtime_error("ballot_n required for ballot datasets");
    loaded = load_ballots_csv(cfg.dataset_path, cfg.ballot_n, cfg.master_seed);
  } else {
    throw std::runtime_error("unknown dataset_kind: " + cfg.dataset_kind);
  }
  if (cfg.partition == "group")
    return partition_by_group(loaded, cfg.group_min_size);
  return partition_random_shards(loaded, cfg.num_clients, cfg.master_seed);
}

}  // namespace

std::vector<SweepRow> run_experiment_sweep(const ExperimentConfig& config) {
  const bool synthetic = config.dataset_path.empty();
  if (!synthetic && config.axis != "k")
    throw std::invalid_argument("dataset sweeps use the k axis");
  if (synthetic && config.axis == "k")
    throw std::invalid_argument("k axis requires a dataset");

  const Permutation centroid =
      config.centroid ? *config.centroid : Permutation::identity(config.n);
  ProtocolParams params;
  params.phi = config.phi;
  params.epsilon = config.epsilon;
  params.masked = config.masked;

  ClientDataset real_data;
  if (!synthetic) real_data = load_configured_dataset(config);
  // One table per sweep; all grid points share (N, phi).
  const int table_n = synthetic ? config.n : real_data.n;
  const QuantTable table = make_quant_table(table_n, config.phi);

  const Rng master(config.master_seed);
  std::vector<SweepRow> rows;
  for (size_t g = 0; g < config.axis_values.size(); ++g) {
    const int axis_value = config.axis_values[g];
    std::vector<SweepRow> per_method(config.methods.size());
    for (size_t mi = 0; mi < config.methods.size(); ++mi) {
      per_method[mi].method = method_name(config.methods[mi]);
      per_method[mi].axis_value = axis_value;
    }
    for (int trial = 0; trial < config.trials; ++trial) {
      const Rng trial_rng = master.derive(g, trial);
      ClientDataset data;
      if (synthetic) {
        const int clients =
            config.axis == "L" ? axis_value : config.num_clients;
        const int samples =
            config.axis == "m" ? axis_value : config.samples_per_client;
        Rng data_rng = trial_rng.derive(0x5EED);
        data = synthetic_dataset(config, centroid, clients, samples, data_rng);
      } else {
        data = truncate_clients(real_data, axis_value);
      }
      for (size_t mi = 0; mi < config.methods.size(); ++mi) {
        const FRAReport report = run_federated_round(
            data, config.methods[mi], params,
            trial_rng.derive(0x40D, mi).next_u64(), &table,
            synthetic ? &centroid : nullptr);
        SweepRow& row = per_method[mi];
        row.mean_kemeny += report.kemeny_objective_value;
        if (report.kendall_to_centroid) {
          row.mean_kendall += static_cast<double>(*report.kendall_to_centroid);
          if (*report.kendall_to_centroid == 0) row.recovery_rate += 1.0;
        }
        if (report.ledger) row.total_bits = report.ledger->total_bits;
        ++row.trials;
      }
    }
    for (SweepRow& row : per_method) {
      row.mean_kemeny /= row.trials;
      if (synthetic) {
        row.mean_kendall /= row.trials;
        row.recovery_rate /= row.trials;
      } else {
        row.mean_kendall = kNan;
        row.recovery_rate = kNan;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "method,axis_value,mean_kendall,mean_kemeny,recovery_rate,total_bits,"
         "trials\n";
  out.precision(10);
  for (const SweepRow& row : rows) {
    out << row.method << ',' << row.axis_value << ',';
    if (std::isnan(row.mean_kendall))
      out << "";
    else
      out << row.mean_kendall;
    out << ',' << row.mean_kemeny << ',';
    if (std::isnan(row.recovery_rate))
      out << "";
    else
      out << row.recovery_rate;
    out << ',' << row.total_bits << ',' << row.trials << '\n';
  }
}

}  // namespace fra
