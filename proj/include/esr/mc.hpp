#pragma once

// Monte Carlo simulator of the physical system: exponential link SNRs,
// Bernoulli backhaul activity, max-SNR non-colluding eavesdroppers, and
// optimal source selection. Serves as ground truth for the analytical
// evaluators; it shares none of their structure (no variance reduction,
// no closed-form shortcuts).
//
// Variates come from the counter-based stream (esr/rng.hpp). Variable
// layout within one replication, K sources and N eavesdroppers:
//   k                : destination draw for source k
//   K + k*N + n      : eavesdropper draw n (0-based) for source k
//   K + K*N + k      : backhaul draw for source k

#include <cstdint>
#include <vector>

#include "esr/model.hpp"
#include "esr/rng.hpp"

namespace esr {

struct Realization {
  std::vector<double> dest_snr;     // gamma_Dk
  std::vector<double> eve_snr_max;  // max over the N eavesdropper draws
  std::vector<bool> backhaul_active;
};

struct McSettings {
  std::int64_t replications = 100'000;  // at least 1000 for a reported estimate
  std::uint64_t seed = 12345;
  std::int64_t batch_size = 65'536;
};

enum class McMode { exact, ratio };

// One replication; exponential sampling is by inverse CDF -log(u)/rate
// with u in (0,1], and the eavesdropper maximum is taken over N explicit
// draws.
Realization sample_realization(const ValidatedConfig& cfg, const CounterRng& rng,
                               std::uint64_t replication);

// max(ln(max over active sources of (1+gamma_D)/(1+gamma_E)), 0);
// zero when no backhaul is active.
double secrecy_rate_realization(const Realization& r);

// Same with the plain SNR ratio gamma_D/gamma_E.
double ratio_rate_realization(const Realization& r);

// Sample-mean estimate with standard error (plain sample variance).
// Deterministic for fixed (cfg, settings): batches are reduced in index
// order whatever the thread count. Throws InvalidParameter for fewer than
// 1000 replications. max_threads = 0 uses the hardware concurrency.
EsrEstimate mc_esr(const ValidatedConfig& cfg, const McSettings& settings,
                   McMode mode, unsigned max_threads = 0);

}  // namespace esr
