#include "esr/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "esr/rng.hpp"
#include "esr/summation.hpp"

namespace esr {

std::vector<int> set_members(SourceSet s) {
  std::vector<int> members;
  members.reserve(static_cast<std::size_t>(set_size(s)));
  for (int k = 0; s != 0; ++k, s >>= 1) {
    if (s & 1u) members.push_back(k);
  }
  return members;
}

SystemConfig AsymptoticConfig::to_system_config() const {
  return to_system_config(common_inv_beta_db);
}

SystemConfig AsymptoticConfig::to_system_config(double inv_beta_db) const {
  const int k_count = num_sources();
  if (static_cast<int>(snr_fraction.size()) != k_count) {
    throw InvalidParameter("asymptotic config: snr_fraction length differs from eve_rate length");
  }
  const double beta = std::pow(10.0, -inv_beta_db / 10.0);
  SystemConfig cfg;
  cfg.eve_rate = eve_rate;
  cfg.backhaul_reliability = backhaul_reliability;
  cfg.num_eavesdroppers = num_eavesdroppers;
  cfg.dest_rate.resize(eve_rate.size());
  for (int k = 0; k < k_count; ++k) {
    if (!(snr_fraction[k] > 0.0) || !std::isfinite(snr_fraction[k])) {
      throw InvalidParameter("asymptotic config: snr_fraction must be positive and finite");
    }
    cfg.dest_rate[k] = beta / snr_fraction[k];  // 1/beta_k = rho_k / beta
  }
  return cfg;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int j = 1; j <= k; ++j) {
    result *= static_cast<double>(n - k + j);
    result /= static_cast<double>(j);
  }
  return std::round(result);
}

double psi(int n, int num_eavesdroppers) {
  if (num_eavesdroppers < 1) {
    throw InvalidParameter("psi: eavesdropper count must be positive");
  }
  if (n < 1 || n > num_eavesdroppers) {
    std::ostringstream msg;
    msg << "psi: index " << n << " outside [1, " << num_eavesdroppers << "]";
    throw InvalidParameter(msg.str());
  }
  const double c = binomial(num_eavesdroppers, n);
  return (n % 2 == 1) ? c : -c;
}

double subset_probability(SourceSet s, std::span<const double> deltas) {
  const int k_count = static_cast<int>(deltas.size());
  if (s >= (1u << k_count)) {
    throw InvalidParameter("subset_probability: subset has members beyond the delta vector");
  }
  double p = 1.0;
  for (int k = 0; k < k_count; ++k) {
    p *= set_contains(s, k) ? deltas[k] : 1.0 - deltas[k];
  }
  return p;
}

std::vector<SourceSet> enumerate_subsets(int num_sources) {
  if (num_sources < 1) {
    throw InvalidParameter("enumerate_subsets: source count must be positive");
  }
  if (num_sources > kMaxSources) {
    std::ostringstream msg;
    msg << "enumerate_subsets: " << num_sources << " sources exceeds the guard of "
        << kMaxSources;
    throw GuardExceeded(msg.str());
  }
  std::vector<SourceSet> subsets;
  subsets.reserve(std::size_t{1} << num_sources);
  for (SourceSet s = 0; s < (1u << num_sources); ++s) subsets.push_back(s);
  return subsets;
}

std::vector<SubsetWeight> subset_distribution(std::span<const double> deltas) {
  const auto subsets = enumerate_subsets(static_cast<int>(deltas.size()));
  std::vector<SubsetWeight> dist;
  dist.reserve(subsets.size());
  for (SourceSet s : subsets) {
    dist.push_back({s, subset_probability(s, deltas)});
  }
  return dist;
}

std::vector<SourceSet> submasks_ascending(SourceSet s) {
  std::vector<SourceSet> masks;
  masks.reserve(std::size_t{1} << set_size(s));
  SourceSet m = 0;
  for (;;) {
    masks.push_back(m);
    if (m == s) break;
    m = (m - s) & s;  // next submask in increasing order
  }
  return masks;
}

std::vector<MultiIndex> multi_indices(const std::vector<int>& sources,
                                      int num_eavesdroppers) {
  if (sources.empty()) {
    throw InvalidParameter("multi_indices: subset must be nonempty");
  }
  if (num_eavesdroppers < 1) {
    throw InvalidParameter("multi_indices: eavesdropper count must be positive");
  }
  const double count = std::pow(static_cast<double>(num_eavesdroppers),
                                static_cast<double>(sources.size()));
  if (count > static_cast<double>(kTermBudget)) {
    throw GuardExceeded("multi_indices: tuple count exceeds the term budget");
  }
  std::vector<int> sorted = sources;
  std::sort(sorted.begin(), sorted.end());
  std::vector<MultiIndex> tuples;
  tuples.reserve(static_cast<std::size_t>(count));
  for_each_multi_index(static_cast<int>(sorted.size()), num_eavesdroppers,
                       [&](std::span<const int> values) {
                         tuples.push_back(MultiIndex{
                             sorted, std::vector<int>(values.begin(), values.end())});
                       });
  return tuples;
}

namespace {

// Distinctness of the products p*a_k across sources: every division in the
// partial-fraction coefficients is by some (p*a_k - q*a_j).
std::vector<DegenerateProducts::Collision> find_collisions(
    const std::vector<double>& a, int num_eavesdroppers, double tol) {
  std::vector<DegenerateProducts::Collision> collisions;
  const int k_count = static_cast<int>(a.size());
  for (int k = 0; k < k_count; ++k) {
    for (int j = k + 1; j < k_count; ++j) {
      for (int p = 1; p <= num_eavesdroppers; ++p) {
        for (int q = 1; q <= num_eavesdroppers; ++q) {
          const double pk = p * a[k];
          const double qj = q * a[j];
          if (std::abs(pk - qj) <= tol * std::max(pk, qj)) {
            collisions.push_back({k, p, j, q});
          }
        }
      }
    }
  }
  return collisions;
}

struct DerivedRatios {
  std::vector<double> a;
  std::vector<double> c;
};

DerivedRatios check_and_derive(const SystemConfig& cfg, double tol) {
  const int k_count = cfg.num_sources();
  if (k_count < 1) {
    throw InvalidParameter("config: at least one source is required");
  }
  if (static_cast<int>(cfg.dest_rate.size()) != k_count ||
      static_cast<int>(cfg.backhaul_reliability.size()) != k_count) {
    throw InvalidParameter("config: eve_rate, dest_rate and backhaul_reliability "
                           "must have equal lengths");
  }
  if (cfg.num_eavesdroppers < 1) {
    throw InvalidParameter("config: eavesdropper count must be positive");
  }
  if (!(tol >= 0.0) || !std::isfinite(tol)) {
    throw InvalidParameter("config: distinctness tolerance must be finite and >= 0");
  }
  for (int k = 0; k < k_count; ++k) {
    if (!(cfg.eve_rate[k] > 0.0) || !std::isfinite(cfg.eve_rate[k])) {
      throw InvalidParameter("config: eve_rate entries must be positive and finite");
    }
    if (!(cfg.dest_rate[k] > 0.0) || !std::isfinite(cfg.dest_rate[k])) {
      throw InvalidParameter("config: dest_rate entries must be positive and finite");
    }
    const double d = cfg.backhaul_reliability[k];
    if (!(d >= 0.0 && d <= 1.0)) {
      throw InvalidParameter("config: backhaul_reliability entries must lie in [0,1]");
    }
  }

  std::vector<double> a(k_count), c(k_count);
  for (int k = 0; k < k_count; ++k) {
    a[k] = cfg.eve_rate[k] / cfg.dest_rate[k];
    c[k] = std::exp(cfg.dest_rate[k]);
  }

  auto collisions = find_collisions(a, cfg.num_eavesdroppers, tol);
  if (!collisions.empty()) {
    std::ostringstream msg;
    msg << "config: degenerate ratio products;";
    for (const auto& col : collisions) {
      msg << " " << col.multiplier_p << "*a[" << col.source_k << "] ~ "
          << col.multiplier_q << "*a[" << col.source_j << "]";
    }
    throw DegenerateProducts(msg.str(), std::move(collisions));
  }
  return DerivedRatios{std::move(a), std::move(c)};
}

}  // namespace

ValidatedConfig validate_config(const SystemConfig& cfg, double tol,
                                const JitterOptions& jitter) {
  try {
    DerivedRatios derived = check_and_derive(cfg, tol);
    return ValidatedConfig(cfg, std::move(derived.a), std::move(derived.c));
  } catch (const DegenerateProducts&) {
    if (!jitter.enabled) throw;
  }
  // Degenerate and jitter requested: nudge every ratio through alpha_k,
  // which leaves beta_k (and hence c_k) untouched, then validate once more.
  CounterRng rng(jitter.seed);
  SystemConfig nudged = cfg;
  for (int k = 0; k < cfg.num_sources(); ++k) {
    nudged.eve_rate[k] *= 1.0 + rng.symmetric(0, static_cast<std::uint64_t>(k)) * jitter.scale;
  }
  DerivedRatios derived = check_and_derive(nudged, tol);
  return ValidatedConfig(std::move(nudged), std::move(derived.a), std::move(derived.c));
}

}  // namespace esr
