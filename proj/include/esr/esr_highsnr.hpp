#pragma once

// High-SNR secrecy-rate analysis.
//
// When both link SNRs are large, selection reduces to maximizing the plain
// SNR ratio gamma_Dk/gamma_Ek, whose per-source CDF is x/(x + a_k) with
// a_k = alpha_k/beta_k. The subset rate collapses to a finite weighted sum
// of ln(1 + n a_k) terms; mixing over backhaul subsets gives per-(source,
// eavesdropper) weights mu_kn, a linear asymptote in ln(1/beta), and a
// separate closed form for the IID single-eavesdropper special case (which
// the general path cannot reach, since it requires all products i_k a_k to
// be distinct).

#include <vector>

#include "esr/model.hpp"

namespace esr {

// Memoized weights: w holds w_kn(S) for every nonempty subset, mu the
// backhaul-probability mixtures mu_kn. Indexing is [k*N + (n-1)].
struct WeightTable {
  int num_sources = 0;
  int num_eavesdroppers = 0;
  std::vector<double> mu;                       // K*N
  std::vector<std::vector<double>> per_subset;  // 2^K entries; [0] unused

  double mu_at(int k, int n) const { return mu[k * num_eavesdroppers + (n - 1)]; }
  double w_at(SourceSet s, int k, int n) const {
    return per_subset[s][k * num_eavesdroppers + (n - 1)];
  }
};

// Asymptote ESR ~= slope * (ln(1/beta) - offset); slope lies in [0, 1].
struct AsymptoteLine {
  double slope = 0.0;   // dimensionless
  double offset = 0.0;  // nats
};

// CDF of the max SNR ratio over subset s at x > 0; in [0, 1].
double cdf_gamma_highsnr(double x, SourceSet s, const ValidatedConfig& cfg);

// Weight of the ln(1 + n a_k) term in the subset rate, k in s, 1 <= n <= N.
double weight_w(int k, int n, SourceSet s, const ValidatedConfig& cfg);

// All per-subset weights plus their backhaul mixture mu.
WeightTable build_weight_table(const ValidatedConfig& cfg);

// Subset rate sum_{k in s} sum_n ln(1 + n a_k) w_kn(s).
double esr_highsnr_subset(SourceSet s, const ValidatedConfig& cfg);

// System rate sum_k sum_n mu_kn ln(1 + n a_k).
EsrEstimate esr_highsnr(const ValidatedConfig& cfg);

// High-SNR slope and power offset of the general configuration. The
// weights depend only on ratios of the a_k, so the line is independent of
// the config's swept SNR value. Throws DegenerateAsymptote when every
// backhaul is always down.
AsymptoteLine asymptote(const AsymptoticConfig& cfg,
                        double tol = kDefaultDistinctTol,
                        const JitterOptions& jitter = {});

// IID channels, single eavesdropper: closed-form high-SNR rate for common
// ratio a = alpha/beta and per-source backhaul reliabilities.
double esr_iid_highsnr(int num_sources, std::span<const double> deltas, double a);

// Asymptote of the IID special case under uniform backhaul reliability
// (and unit SNR fractions). Throws DegenerateAsymptote when delta == 0.
AsymptoteLine iid_asymptote(int num_sources, double delta, double alpha);

// Harmonic number H_n = sum_{j=1..n} 1/j, with H_0 = 0.
double harmonic(int n);

}  // namespace esr
