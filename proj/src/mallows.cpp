#include "fra/mallows.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fra {
namespace {

void check_phi(double phi) {
  if (!(phi > 0.0 && phi < 1.0))
    throw std::invalid_argument("phi must lie in (0,1)");
}

std::vector<double> midpoints(const std::vector<double>& centroids) {
  std::vector<double> t;
  for (size_t j = 0; j + 1 < centroids.size(); ++j)
    t.push_back(0.5 * (centroids[j] + centroids[j + 1]));
  return t;
}

QuantTable assemble_table(int n, double phi, QuantMethod method,
                          long long num_samples, std::vector<double> centroids) {
  QuantTable table;
  table.n = n;
  table.phi = phi;
  table.method = method;
  table.num_samples = num_samples;
  table.thresholds = midpoints(centroids);
  table.centroids = std::move(centroids);
  return table;
}

// Discordant probabilities d_k = P(sigma(k+1) < sigma(1)) under an
// identity-centroid Mallows model on S_{k+1}, for k = 1..n-1.
std::vector<double> discordant_probs(int n, double phi) {
  std::vector<double> d(n, 0.0);  // d[k], d[0] unused
  if (n >= 2) d[1] = phi / (1.0 + phi);
  double geom = phi;  // sum_{j=1}^{i-1} phi^j
  double denom = 1.0 + phi;  // sum_{j=0}^{i} phi^j, updated per level
  for (int i = 2; i <= n - 1; ++i) {
    denom += std::pow(phi, i);
    d[i] = (std::pow(phi, i) + geom * d[i - 1]) / denom;
    geom += std::pow(phi, i);
  }
  return d;
}

}  // namespace

MallowsParams::MallowsParams(int n_, double phi_, Permutation centroid_)
    : n(n_), phi(phi_), centroid(std::move(centroid_)) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  check_phi(phi);
  if (centroid.size() != n)
    throw std::invalid_argument("centroid length does not match N");
}

int QuantTable::quantize(double value) const {
  if (!std::isfinite(value))
    throw std::invalid_argument("cannot quantize non-finite value");
  // First centroid whose upper threshold admits the value; threshold hits go
  // to the smaller index.
  const auto it =
      std::lower_bound(thresholds.begin(), thresholds.end(), value);
  return static_cast<int>(it - thresholds.begin()) + 1;
}

double normalization_Z(int n, double phi) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  check_phi(phi);
  double z = 1.0;
  for (int i = 1; i <= n; ++i) {
    double series = 0.0;
    for (int j = 0; j <= i - 1; ++j) series += std::pow(phi, j);
    z *= series;
  }
  return z;
}

double log_normalization_Z(int n, double phi) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  check_phi(phi);
  double log_z = 0.0;
  for (int i = 1; i <= n; ++i)
    log_z += std::log1p(-std::pow(phi, i)) - std::log1p(-phi);
  return log_z;
}

double log_pmf(const MallowsParams& params, const Permutation& sigma) {
  if (sigma.size() != params.n)
    throw std::invalid_argument("permutation length does not match N");
  const long long d = kendall_tau(params.centroid, sigma);
  return static_cast<double>(d) * std::log(params.phi) -
         log_normalization_Z(params.n, params.phi);
}

double pmf(const MallowsParams& params, const Permutation& sigma) {
  if (params.n > 20) return std::exp(log_pmf(params, sigma));
  if (sigma.size() != params.n)
    throw std::invalid_argument("permutation length does not match N");
  const long long d = kendall_tau(params.centroid, sigma);
  return std::pow(params.phi, static_cast<double>(d)) /
         normalization_Z(params.n, params.phi);
}

int sample_truncated_geometric(int i, double phi, Rng& rng) {
  if (i < 1) throw std::invalid_argument("support size must be >= 1");
  check_phi(phi);
  if (i == 1) return 0;
  // Inverse CDF: F(j) = (1 - phi^{j+1}) / (1 - phi^i).
  const double u = rng.uniform_double() * (1.0 - std::pow(phi, i));
  double cumulative = 0.0;
  double term = 1.0;  // phi^j * (1 - phi), unnormalized below
  for (int j = 0; j < i - 1; ++j) {
    cumulative += term * (1.0 - phi);
    if (u < cumulative) return j;
    term *= phi;
  }
  return i - 1;
}

Permutation sample(const MallowsParams& params, Rng& rng) {
  const int n = params.n;
  LehmerCode code;
  code.coords.resize(n);
  for (int i = 1; i <= n; ++i)
    code.coords[i - 1] = sample_truncated_geometric(i, params.phi, rng);
  const Permutation rho = lehmer_decode(code);  // identity-centroid sample
  // sigma(i) = rho(sigma0(i)).
  std::vector<int> ranks(n);
  for (int i = 1; i <= n; ++i) ranks[i - 1] = rho.rank_of(params.centroid.rank_of(i));
  return Permutation(std::move(ranks));
}

DisplacementRatio displacement_p(int n, double phi) {
  if (n < 2) throw std::invalid_argument("N must be >= 2");
  check_phi(phi);
  double numer = 0.0;
  for (int u = 1; u <= n - 1; ++u) numer += std::pow(phi, u);
  double denom = 1.0;
  for (int u = 3; u <= n; ++u) denom += std::pow(phi, u);
  DisplacementRatio r;
  r.p = numer / denom;
  r.condition_holds = phi + phi * phi < 1.0 + std::pow(phi, n);
  return r;
}

QuantTable expected_positions_exact(int n, double phi) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (n > 8)
    throw std::invalid_argument("exhaustive enumeration limited to N <= 8");
  check_phi(phi);
  const MallowsParams params(n, phi, Permutation::identity(n));
  std::vector<double> expected(n, 0.0);
  std::vector<int> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1);
  do {
    const Permutation sigma{std::vector<int>(ranks)};
    const double w = pmf(params, sigma);
    for (int i = 0; i < n; ++i) expected[i] += w * ranks[i];
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return assemble_table(n, phi, QuantMethod::kExact, 0, std::move(expected));
}

QuantTable expected_positions_mc(int n, double phi, long long num_samples,
                                 Rng& rng) {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  const MallowsParams params(n, phi, Permutation::identity(n));
  std::vector<double> sums(n, 0.0);
  for (long long s = 0; s < num_samples; ++s) {
    const Permutation sigma = sample(params, rng);
    for (int i = 1; i <= n; ++i) sums[i - 1] += sigma.rank_of(i);
  }
  for (double& v : sums) v /= static_cast<double>(num_samples);
  return assemble_table(n, phi, QuantMethod::kMonteCarlo, num_samples,
                        std::move(sums));
}

QuantTable expected_positions_recursive(int n, double phi, double tolerance,
                                        std::uint64_t fallback_seed) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  check_phi(phi);
  const auto build = [&](int size) {
    const std::vector<double> d = discordant_probs(size, phi);
    double tail = 0.0;  // sum_{k=1}^{size-1} d_k
    for (int k = 1; k <= size - 1; ++k) tail += d[k];
    std::vector<double> expected(size);
    expected[0] = 1.0 + tail;
    for (int i = 1; i < size; ++i)
      expected[i] = expected[i - 1] + 1.0 - d[i] - d[size - i];
    return expected;
  };
  // Validate the recursion against exhaustive enumeration before trusting it.
  const int check_n = std::min(n, 8);
  const QuantTable oracle = expected_positions_exact(check_n, phi);
  const std::vector<double> check = build(check_n);
  double max_err = 0.0;
  for (int i = 0; i < check_n; ++i)
    max_err = std::max(max_err, std::abs(check[i] - oracle.centroids[i]));
  if (max_err > tolerance) {
    Rng rng(fallback_seed);
    return expected_positions_mc(n, phi, 100000, rng);
  }
  return assemble_table(n, phi, QuantMethod::kRecursive, 0, build(n));
}

QuantTable make_quant_table(int n, double phi) {
  if (n <= 8) return expected_positions_exact(n, phi);
  return expected_positions_recursive(n, phi);
}

void save_quant_table(const QuantTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const char* method = table.method == QuantMethod::kExact       ? "exact"
                       : table.method == QuantMethod::kRecursive ? "recursive"
                                                                 : "mc";
  out.precision(17);
  out << table.n << ' ' << table.phi << ' ' << method << ' '
      << table.num_samples << '\n';
  for (double c : table.centroids) out << c << '\n';
}

QuantTable load_quant_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  int n = 0;
  double phi = 0.0;
  std::string method;
  long long num_samples = 0;
  if (!(in >> n >> phi >> method >> num_samples))
    throw std::runtime_error("malformed quant table header in " + path);
  std::vector<double> centroids(n);
  for (int i = 0; i < n; ++i)
    if (!(in >> centroids[i]))
      throw std::runtime_error("truncated quant table in " + path);
  QuantMethod m = method == "exact"       ? QuantMethod::kExact
                  : method == "recursive" ? QuantMethod::kRecursive
                  : method == "mc"
                      ? QuantMethod::kMonteCarlo
                      : throw std::runtime_error("unknown method: " + method);
  return assemble_table(n, phi, m, num_samples, std::move(centroids));
}

}  // namespace fra
