#pragma once

// System-model types, configuration validation, and the combinatorial
// primitives (subset and multi-index enumeration, signed binomial weights)
// shared by the analytical evaluators.
//
// Model: K single-antenna sources feed one destination over Rayleigh fading
// while N non-colluding eavesdroppers listen. The destination SNR of source
// k is Exponential(beta_k), each eavesdropper SNR is Exponential(alpha_k)
// (IID across eavesdroppers for a given source), and the wireless backhaul
// of source k is up with probability delta_k. Among sources with an active
// backhaul, the transmitter maximizing the instantaneous secrecy rate is
// selected.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "esr/errors.hpp"

namespace esr {

// Combinatorial guards. The subset/multi-index expansions are exponential
// in the source count, so evaluations are budgeted up front.
inline constexpr int kMaxSources = 12;
inline constexpr std::int64_t kTermBudget = 10'000'000;

// Default relative tolerance for the distinct-products check.
inline constexpr double kDefaultDistinctTol = 1e-9;

// Set of source indices as a bitmask; bit k is source k (0-based).
using SourceSet = std::uint32_t;

inline int set_size(SourceSet s) { return std::popcount(s); }
inline bool set_contains(SourceSet s, int k) { return (s >> k) & 1u; }
inline SourceSet full_set(int num_sources) {
  return static_cast<SourceSet>((1u << num_sources) - 1u);
}
std::vector<int> set_members(SourceSet s);

// Per-source channel and backhaul parameters.
struct SystemConfig {
  std::vector<double> eve_rate;              // alpha_k; mean eavesdropper SNR is 1/alpha_k
  std::vector<double> dest_rate;             // beta_k; mean destination SNR is 1/beta_k
  std::vector<double> backhaul_reliability;  // delta_k in [0,1]
  int num_eavesdroppers = 1;

  int num_sources() const { return static_cast<int>(eve_rate.size()); }
};

// Parameterization used for asymptotic sweeps: eavesdropper SNRs are fixed
// while every destination SNR is a fraction rho_k of a common swept SNR,
// 1/beta_k = rho_k / beta.
struct AsymptoticConfig {
  std::vector<double> eve_rate;              // alpha_k
  std::vector<double> snr_fraction;          // rho_k > 0
  std::vector<double> backhaul_reliability;  // delta_k
  int num_eavesdroppers = 1;
  double common_inv_beta_db = 0.0;           // 1/beta in dB (power convention, 10^(dB/10))

  int num_sources() const { return static_cast<int>(eve_rate.size()); }
  SystemConfig to_system_config() const;
  SystemConfig to_system_config(double inv_beta_db) const;
};

// A subset of sources paired with the probability that exactly those
// backhaul links are active.
struct SubsetWeight {
  SourceSet subset;
  double probability;
};

// One term index of an expanded eavesdropper sum: an assignment of a
// multiplier in {1..N} to every member of a source subset.
struct MultiIndex {
  std::vector<int> sources;  // ascending members of the subset
  std::vector<int> values;   // i_k in {1..N}, aligned with `sources`
};

// A scalar ergodic secrecy rate in nats per channel use; std_error is set
// only by the Monte Carlo estimator.
struct EsrEstimate {
  double value = 0.0;
  std::optional<double> std_error;
};

// Optional fallback when the distinct-products check fails: scale every
// ratio a_k by (1 + u_k * scale) with deterministic u_k in (-1,1) and
// validate again.
struct JitterOptions {
  bool enabled = false;
  std::uint64_t seed = 0x6a177e52u;
  double scale = 1e-7;
};

// Validation-stamped configuration. Construction guarantees positivity of
// all rates, delta_k in [0,1], and pairwise distinctness of the products
// p*a_k (p in {1..N}) across sources; the ratios a_k = alpha_k/beta_k and
// c_k = exp(beta_k) are precomputed.
//
// Note c_k may overflow to +inf for extreme beta_k; the evaluators only
// ever use it through fused forms such as exp(beta_k*(1-x)).
class ValidatedConfig {
 public:
  const SystemConfig& config() const { return cfg_; }
  int num_sources() const { return cfg_.num_sources(); }
  int num_eavesdroppers() const { return cfg_.num_eavesdroppers; }

  double alpha(int k) const { return cfg_.eve_rate[k]; }
  double beta(int k) const { return cfg_.dest_rate[k]; }
  double delta(int k) const { return cfg_.backhaul_reliability[k]; }
  double a(int k) const { return a_[k]; }
  double c(int k) const { return c_[k]; }
  const std::vector<double>& ratios() const { return a_; }

 private:
  friend ValidatedConfig validate_config(const SystemConfig&, double, const JitterOptions&);
  ValidatedConfig(SystemConfig cfg, std::vector<double> a, std::vector<double> c)
      : cfg_(std::move(cfg)), a_(std::move(a)), c_(std::move(c)) {}

  SystemConfig cfg_;
  std::vector<double> a_;
  std::vector<double> c_;
};

// Throws InvalidParameter for out-of-range fields and DegenerateProducts
// when |p*a_k - q*a_j| <= tol * max(p*a_k, q*a_j) for some j != k.
ValidatedConfig validate_config(const SystemConfig& cfg,
                                double tol = kDefaultDistinctTol,
                                const JitterOptions& jitter = {});

// Signed binomial weight (-1)^(n+1) * C(N,n) from the max-of-N-exponentials
// density expansion. Exact (integer-valued) for the supported N.
double psi(int n, int num_eavesdroppers);

// Binomial coefficient as a double; exact while below 2^53.
double binomial(int n, int k);

// Probability that exactly the sources in `s` have an active backhaul.
double subset_probability(SourceSet s, std::span<const double> deltas);

// All 2^K subsets, ascending by bitmask. Throws GuardExceeded for
// num_sources > kMaxSources.
std::vector<SourceSet> enumerate_subsets(int num_sources);

// All 2^K subsets with their occurrence probabilities, ascending by bitmask.
std::vector<SubsetWeight> subset_distribution(std::span<const double> deltas);

// All N^|M| multiplier tuples for subset members `sources` (ascending),
// lexicographic with the last coordinate varying fastest. Throws
// GuardExceeded when the tuple count exceeds kTermBudget.
std::vector<MultiIndex> multi_indices(const std::vector<int>& sources,
                                      int num_eavesdroppers);

// Submasks of `s` (including the empty set), ascending by bitmask.
std::vector<SourceSet> submasks_ascending(SourceSet s);

// Odometer over {1..num_values}^tuple_size without materializing; the last
// coordinate varies fastest, matching multi_indices. `fn` receives a span
// of the current tuple.
template <typename Fn>
void for_each_multi_index(int tuple_size, int num_values, Fn&& fn) {
  if (tuple_size <= 0 || num_values <= 0) return;
  std::array<int, kMaxSources> values{};
  for (int j = 0; j < tuple_size; ++j) values[j] = 1;
  for (;;) {
    fn(std::span<const int>(values.data(), static_cast<std::size_t>(tuple_size)));
    int pos = tuple_size - 1;
    while (pos >= 0 && values[pos] == num_values) {
      values[pos] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++values[pos];
  }
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace esr
