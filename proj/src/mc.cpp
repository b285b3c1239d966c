#include "esr/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <thread>

#include "esr/summation.hpp"

namespace esr {

namespace {

struct VarLayout {
  int k_count;
  int n_count;
  std::uint64_t dest(int k) const { return static_cast<std::uint64_t>(k); }
  std::uint64_t eve(int k, int n) const {
    return static_cast<std::uint64_t>(k_count + k * n_count + n);
  }
  std::uint64_t backhaul(int k) const {
    return static_cast<std::uint64_t>(k_count + k_count * n_count + k);
  }
};

// Rate of one replication without materializing a Realization. Inactive
// sources are skipped entirely; with a counter-based stream this cannot
// shift any other draw.
double replication_rate(const ValidatedConfig& cfg, const CounterRng& rng,
                        std::uint64_t rep, const VarLayout& vars, McMode mode) {
  double best = 0.0;
  bool any_active = false;
  for (int k = 0; k < vars.k_count; ++k) {
    if (rng.u01(rep, vars.backhaul(k)) > cfg.delta(k)) continue;
    any_active = true;
    const double gd = -std::log(rng.u01(rep, vars.dest(k))) / cfg.beta(k);
    double ge = 0.0;
    for (int n = 0; n < vars.n_count; ++n) {
      ge = std::max(ge, -std::log(rng.u01(rep, vars.eve(k, n))) / cfg.alpha(k));
    }
    const double r = (mode == McMode::exact)
                         ? (1.0 + gd) / (1.0 + ge)
                         : gd / std::max(ge, DBL_MIN);  // ge == 0 has measure zero
    best = std::max(best, r);
  }
  if (!any_active) return 0.0;
  return std::max(std::log(best), 0.0);
}

struct BatchMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

}  // namespace

Realization sample_realization(const ValidatedConfig& cfg, const CounterRng& rng,
                               std::uint64_t replication) {
  const VarLayout vars{cfg.num_sources(), cfg.num_eavesdroppers()};
  Realization r;
  r.dest_snr.resize(vars.k_count);
  r.eve_snr_max.resize(vars.k_count);
  r.backhaul_active.resize(vars.k_count);
  for (int k = 0; k < vars.k_count; ++k) {
    r.dest_snr[k] = -std::log(rng.u01(replication, vars.dest(k))) / cfg.beta(k);
    double ge = 0.0;
    for (int n = 0; n < vars.n_count; ++n) {
      ge = std::max(ge, -std::log(rng.u01(replication, vars.eve(k, n))) / cfg.alpha(k));
    }
    r.eve_snr_max[k] = ge;
    r.backhaul_active[k] = rng.u01(replication, vars.backhaul(k)) <= cfg.delta(k);
  }
  return r;
}

double secrecy_rate_realization(const Realization& r) {
  double best = 0.0;
  bool any_active = false;
  for (std::size_t k = 0; k < r.dest_snr.size(); ++k) {
    if (!r.backhaul_active[k]) continue;
    any_active = true;
    best = std::max(best, (1.0 + r.dest_snr[k]) / (1.0 + r.eve_snr_max[k]));
  }
  return any_active ? std::max(std::log(best), 0.0) : 0.0;
}

double ratio_rate_realization(const Realization& r) {
  double best = 0.0;
  bool any_active = false;
  for (std::size_t k = 0; k < r.dest_snr.size(); ++k) {
    if (!r.backhaul_active[k]) continue;
    any_active = true;
    best = std::max(best, r.dest_snr[k] / std::max(r.eve_snr_max[k], DBL_MIN));
  }
  return any_active ? std::max(std::log(best), 0.0) : 0.0;
}

EsrEstimate mc_esr(const ValidatedConfig& cfg, const McSettings& settings,
                   McMode mode, unsigned max_threads) {
  if (settings.replications < 1000) {
    throw InvalidParameter("mc_esr: at least 1000 replications are required");
  }
  if (settings.batch_size < 1) {
    throw InvalidParameter("mc_esr: batch size must be positive");
  }
  const CounterRng rng(settings.seed);
  const VarLayout vars{cfg.num_sources(), cfg.num_eavesdroppers()};
  const std::int64_t reps = settings.replications;
  const std::int64_t batch = settings.batch_size;
  const std::int64_t num_batches = (reps + batch - 1) / batch;

  std::vector<BatchMoments> moments(static_cast<std::size_t>(num_batches));
  auto run_batch = [&](std::int64_t b) {
    const std::int64_t lo = b * batch;
    const std::int64_t hi = std::min(lo + batch, reps);
    BatchMoments m;
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      const double v =
          replication_rate(cfg, rng, static_cast<std::uint64_t>(rep), vars, mode);
      m.sum += v;
      m.sum_sq += v * v;
    }
    moments[static_cast<std::size_t>(b)] = m;
  };

  unsigned workers = max_threads != 0 ? max_threads
                                      : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(
      std::min<std::int64_t>(workers, num_batches));
  if (workers <= 1) {
    for (std::int64_t b = 0; b < num_batches; ++b) run_batch(b);
  } else {
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
          if (b >= num_batches) break;
          run_batch(b);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Deterministic reduction in batch order, independent of scheduling.
  CompensatedSum sum, sum_sq;
  for (const auto& m : moments) {
    sum.add(m.sum);
    sum_sq.add(m.sum_sq);
  }
  const double n = static_cast<double>(reps);
  const double mean = sum.value() / n;
  const double variance =
      std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0));
  return EsrEstimate{mean, std::sqrt(variance / n)};
}

}  // namespace esr
