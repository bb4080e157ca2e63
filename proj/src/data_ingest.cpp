#include "fra/data_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fra/rng.hpp"

namespace fra {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_int(const std::string& s, int& out) {
  const std::string t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  try {
    size_t pos = 0;
    out = std::stod(t, &pos);
    return pos == t.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return in;
}

}  // namespace

long long ClientDataset::total_samples() const {
  long long total = 0;
  for (const auto& c : clients) total += static_cast<long long>(c.rankings.size());
  return total;
}

std::vector<Permutation> ClientDataset::pooled() const {
  std::vector<Permutation> all;
  for (const auto& c : clients)
    all.insert(all.end(), c.rankings.begin(), c.rankings.end());
  return all;
}

LoadedRankings load_rankings_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  LoadedRankings out;
  std::string line;
  long long row = 0;
  int n = -1;
  bool labeled = false;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    std::string label;
    int first_value = 0;
    const bool has_label = !parse_int(fields.front(), first_value);
    if (out.rankings.empty()) {
      labeled = has_label;
    } else if (has_label != labeled) {
      throw std::runtime_error(path + ":" + std::to_string(row) +
                               ": inconsistent label column");
    }
    if (has_label) {
      label = trim(fields.front());
      fields.erase(fields.begin());
    }
    std::vector<int> ranks;
    ranks.reserve(fields.size());
    for (const std::string& f : fields) {
      int v = 0;
      if (!parse_int(f, v))
        throw std::runtime_error(path + ":" + std::to_string(row) +
                                 ": malformed integer '" + f + "'");
      ranks.push_back(v);
    }
    if (n < 0) n = static_cast<int>(ranks.size());
    if (static_cast<int>(ranks.size()) != n)
      throw std::runtime_error(path + ":" + std::to_string(row) +
                               ": inconsistent row length");
    try {
      out.rankings.emplace_back(std::move(ranks));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(row) + ": " +
                               e.what());
    }
    if (labeled) out.labels.push_back(label);
  }
  if (out.rankings.empty()) throw std::runtime_error(path + ": no rankings");
  return out;
}

LoadedRankings load_scores_csv(const std::string& path, TieRule tie_rule,
                               std::uint64_t seed) {
  std::ifstream in = open_or_throw(path);
  LoadedRankings out;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": missing header row");
  const size_t n = split_csv(line).size();
  Rng rng(seed);
  long long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != n)
      throw std::runtime_error(path + ":" + std::to_string(row) +
                               ": expected " + std::to_string(n) + " cells");
    std::vector<double> scores;
    scores.reserve(n);
    bool complete = true;
    for (const std::string& f : fields) {
      if (trim(f).empty() || trim(f) == "NA" || trim(f) == "nan") {
        complete = false;
        break;
      }
      double v = 0.0;
      if (!parse_double(f, v))
        throw std::runtime_error(path + ":" + std::to_string(row) +
                                 ": non-numeric cell '" + f + "'");
      scores.push_back(v);
    }
    if (!complete) {
      ++out.dropped_rows;
      continue;
    }
    out.rankings.push_back(scores_to_ranking(scores, tie_rule, &rng));
  }
  if (out.rankings.empty())
    throw std::runtime_error(path + ": no complete score rows");
  return out;
}

LoadedRankings load_ballots_csv(const std::string& path, int n,
                                std::uint64_t seed) {
  std::ifstream in = open_or_throw(path);
  LoadedRankings out;
  Rng master(seed);
  std::string line;
  long long row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<int> prefix;
    std::vector<bool> seen(n, false);
    for (const std::string& f : split_csv(line)) {
      if (trim(f).empty()) continue;
      int item = 0;
      if (!parse_int(f, item))
        throw std::runtime_error(path + ":" + std::to_string(row) +
                                 ": malformed ballot entry '" + f + "'");
      if (item < 1 || item > n)
        throw std::runtime_error(path + ":" + std::to_string(row) +
                                 ": ballot item out of range");
      if (seen[item - 1]) continue;  // duplicate marks keep the first
      seen[item - 1] = true;
      prefix.push_back(item);
    }
    Rng rng = master.derive(static_cast<std::uint64_t>(row));
    out.rankings.push_back(partial_to_full(prefix, n, rng));
  }
  if (out.rankings.empty()) throw std::runtime_error(path + ": no ballots");
  return out;
}

ClientDataset partition_by_group(const LoadedRankings& data, int min_size) {
  if (data.rankings.empty()) throw std::invalid_argument("empty ranking set");
  if (data.labels.size() != data.rankings.size())
    throw std::invalid_argument("by_group partitioning needs labeled rankings");
  std::map<std::string, std::vector<Permutation>> groups;
  for (size_t i = 0; i < data.rankings.size(); ++i)
    groups[data.labels[i]].push_back(data.rankings[i]);
  ClientDataset out;
  out.n = data.rankings.front().size();
  for (auto& [label, rankings] : groups) {
    if (static_cast<int>(rankings.size()) < min_size) {
      out.dropped += static_cast<long long>(rankings.size());
      continue;
    }
    out.clients.push_back(ClientShard{label, std::move(rankings)});
  }
  if (out.clients.empty())
    throw std::invalid_argument("all groups below minimum size");
  return out;
}

ClientDataset partition_random_shards(const LoadedRankings& data, int num_shards,
                                      std::uint64_t seed) {
  if (data.rankings.empty()) throw std::invalid_argument("empty ranking set");
  if (num_shards < 1 ||
      num_shards > static_cast<int>(data.rankings.size()))
    throw std::invalid_argument("shard count must lie in [1, #rankings]");
  std::vector<size_t> order(data.rankings.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (size_t i = order.size() - 1; i > 0; --i) {
    const size_t j = rng.uniform_below(i + 1);
    std::swap(order[i], order[j]);
  }
  ClientDataset out;
  out.n = data.rankings.front().size();
  out.clients.resize(num_shards);
  for (int s = 0; s < num_shards; ++s)
    out.clients[s].label = "shard" + std::to_string(s + 1);
  for (size_t k = 0; k < order.size(); ++k)
    out.clients[k % num_shards].rankings.push_back(data.rankings[order[k]]);
  return out;
}

void save_labeled_csv(const ClientDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& client : dataset.clients)
    for (const auto& sigma : client.rankings)
      out << client.label << ',' << sigma.to_string() << '\n';
}

}  // namespace fra
