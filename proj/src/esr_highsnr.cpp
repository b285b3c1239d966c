#include "esr/esr_highsnr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "esr/summation.hpp"

namespace esr {

namespace {

void require_nonempty_subset(SourceSet s, const ValidatedConfig& cfg,
                             const char* who) {
  if (s == 0) {
    throw InvalidParameter(std::string(who) + ": subset must be nonempty");
  }
  if (s >= (1u << cfg.num_sources())) {
    throw InvalidParameter(std::string(who) + ": subset has members beyond the config");
  }
}

// Expanded term count of one weight: sum over Q of N^|Q| = (N+1)^(|S|-1).
double weight_term_count(int subset_size, int num_eavesdroppers) {
  return std::pow(static_cast<double>(num_eavesdroppers + 1),
                  static_cast<double>(subset_size - 1));
}

}  // namespace

double cdf_gamma_highsnr(double x, SourceSet s, const ValidatedConfig& cfg) {
  require_nonempty_subset(s, cfg, "cdf_gamma_highsnr");
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "cdf_gamma_highsnr: x = " << x << " must be > 0";
    throw InvalidParameter(msg.str());
  }
  const int n_count = cfg.num_eavesdroppers();
  double prod = 1.0;
  for (int k = 0; k < cfg.num_sources(); ++k) {
    if (!set_contains(s, k)) continue;
    const double a = cfg.a(k);
    CompensatedSum tail;
    for (int n = 1; n <= n_count; ++n) {
      tail.add(psi(n, n_count) * n * a / (x + n * a));
    }
    prod *= std::clamp(1.0 - tail.value(), 0.0, 1.0);
  }
  return std::clamp(prod, 0.0, 1.0);
}

double weight_w(int k, int n, SourceSet s, const ValidatedConfig& cfg) {
  require_nonempty_subset(s, cfg, "weight_w");
  const int n_count = cfg.num_eavesdroppers();
  if (!set_contains(s, k)) {
    throw InvalidParameter("weight_w: source index is not a member of the subset");
  }
  if (n < 1 || n > n_count) {
    throw InvalidParameter("weight_w: eavesdropper index out of range");
  }
  if (weight_term_count(set_size(s), n_count) > static_cast<double>(kTermBudget)) {
    throw GuardExceeded("weight_w: expanded terms exceed the budget");
  }

  const double na_k = n * cfg.a(k);
  const SourceSet rest = s & ~(1u << k);
  CompensatedSum sum;
  for (SourceSet q_mask : submasks_ascending(rest)) {
    const auto members = set_members(q_mask);
    const int q = static_cast<int>(members.size());
    if (q == 0) {
      sum.add(1.0);  // empty product
      continue;
    }
    std::array<double, kMaxSources> a{};
    for (int j = 0; j < q; ++j) a[j] = cfg.a(members[j]);
    for_each_multi_index(q, n_count, [&](std::span<const int> values) {
      double prod = 1.0;
      for (int j = 0; j < q; ++j) {
        const double ia = values[j] * a[j];
        prod *= psi(values[j], n_count) * ia / (na_k - ia);
      }
      sum.add(prod);
    });
  }
  return psi(n, n_count) * sum.value();
}

WeightTable build_weight_table(const ValidatedConfig& cfg) {
  const int k_count = cfg.num_sources();
  const int n_count = cfg.num_eavesdroppers();
  if (k_count > kMaxSources) {
    throw GuardExceeded("build_weight_table: source count exceeds the subset guard");
  }
  double planned = 0.0;
  for (int size = 1; size <= k_count; ++size) {
    planned += binomial(k_count, size) * size * n_count *
               weight_term_count(size, n_count);
  }
  if (planned > static_cast<double>(kTermBudget)) {
    std::ostringstream msg;
    msg << "build_weight_table: " << planned << " expanded terms exceed the budget of "
        << kTermBudget;
    throw GuardExceeded(msg.str());
  }

  WeightTable table;
  table.num_sources = k_count;
  table.num_eavesdroppers = n_count;
  table.per_subset.assign(std::size_t{1} << k_count,
                          std::vector<double>(k_count * n_count, 0.0));
  std::vector<CompensatedSum> mu(static_cast<std::size_t>(k_count) * n_count);
  for (const auto& sw : subset_distribution(cfg.config().backhaul_reliability)) {
    if (sw.subset == 0) continue;
    auto& row = table.per_subset[sw.subset];
    for (int k = 0; k < k_count; ++k) {
      if (!set_contains(sw.subset, k)) continue;
      for (int n = 1; n <= n_count; ++n) {
        const double w = weight_w(k, n, sw.subset, cfg);
        row[k * n_count + (n - 1)] = w;
        mu[k * n_count + (n - 1)].add(sw.probability * w);
      }
    }
  }
  table.mu.resize(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) table.mu[i] = mu[i].value();
  return table;
}

double esr_highsnr_subset(SourceSet s, const ValidatedConfig& cfg) {
  require_nonempty_subset(s, cfg, "esr_highsnr_subset");
  const int n_count = cfg.num_eavesdroppers();
  CompensatedSum total;
  for (int k = 0; k < cfg.num_sources(); ++k) {
    if (!set_contains(s, k)) continue;
    for (int n = 1; n <= n_count; ++n) {
      total.add(std::log1p(n * cfg.a(k)) * weight_w(k, n, s, cfg));
    }
  }
  return total.value();
}

EsrEstimate esr_highsnr(const ValidatedConfig& cfg) {
  const WeightTable table = build_weight_table(cfg);
  const int n_count = cfg.num_eavesdroppers();
  CompensatedSum total;
  for (int k = 0; k < cfg.num_sources(); ++k) {
    for (int n = 1; n <= n_count; ++n) {
      total.add(table.mu_at(k, n) * std::log1p(n * cfg.a(k)));
    }
  }
  return EsrEstimate{std::max(total.value(), 0.0), std::nullopt};
}

AsymptoteLine asymptote(const AsymptoticConfig& cfg, double tol,
                        const JitterOptions& jitter) {
  const ValidatedConfig vcfg = validate_config(cfg.to_system_config(), tol, jitter);
  const int k_count = vcfg.num_sources();
  const int n_count = vcfg.num_eavesdroppers();

  double p_empty = 1.0;
  for (int k = 0; k < k_count; ++k) p_empty *= 1.0 - vcfg.delta(k);
  const double slope = 1.0 - p_empty;
  if (slope <= 0.0) {
    throw DegenerateAsymptote("asymptote: slope is zero (all backhauls down), "
                              "offset undefined");
  }

  const WeightTable table = build_weight_table(vcfg);
  CompensatedSum acc;
  for (int k = 0; k < k_count; ++k) {
    for (int n = 1; n <= n_count; ++n) {
      // ln(1/(n alpha_k)) - ln(rho_k)
      acc.add(table.mu_at(k, n) *
              -std::log(n * cfg.eve_rate[k] * cfg.snr_fraction[k]));
    }
  }
  return AsymptoteLine{slope, acc.value() / slope};
}

double esr_iid_highsnr(int num_sources, std::span<const double> deltas, double a) {
  if (num_sources < 1) {
    throw InvalidParameter("esr_iid_highsnr: source count must be positive");
  }
  if (static_cast<int>(deltas.size()) != num_sources) {
    throw InvalidParameter("esr_iid_highsnr: delta vector length differs from source count");
  }
  for (double d : deltas) {
    if (!(d >= 0.0 && d <= 1.0)) {
      throw InvalidParameter("esr_iid_highsnr: backhaul reliabilities must lie in [0,1]");
    }
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidParameter("esr_iid_highsnr: ratio a must be positive and finite");
  }

  // Partial sums G[t] = sum_{j=1..t} q^j / j with q = a/(1+a).
  const double q = a / (1.0 + a);
  std::vector<double> partial(num_sources, 0.0);
  double q_pow = 1.0;
  for (int j = 1; j <= num_sources - 1; ++j) {
    q_pow *= q;
    partial[j] = partial[j - 1] + q_pow / j;
  }
  // inner(m) = sum_{k=1..m} (-1)^k C(m,k) G[k-1]
  std::vector<double> inner(num_sources + 1, 0.0);
  for (int m = 1; m <= num_sources; ++m) {
    CompensatedSum acc;
    for (int k = 1; k <= m; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      acc.add(sign * binomial(m, k) * partial[k - 1]);
    }
    inner[m] = acc.value();
  }

  double p_empty = 1.0;
  for (double d : deltas) p_empty *= 1.0 - d;
  CompensatedSum total;
  total.add((1.0 - p_empty) * std::log1p(a));
  for (const auto& sw : subset_distribution(deltas)) {
    if (sw.subset == 0 || sw.probability == 0.0) continue;
    total.add(sw.probability * inner[set_size(sw.subset)]);
  }
  double value = total.value();
  if (value < 0.0 && value > -1e-12) value = 0.0;
  return value;
}

AsymptoteLine iid_asymptote(int num_sources, double delta, double alpha) {
  if (num_sources < 1) {
    throw InvalidParameter("iid_asymptote: source count must be positive");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw InvalidParameter("iid_asymptote: delta must lie in [0,1]");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidParameter("iid_asymptote: alpha must be positive and finite");
  }
  const double slope = 1.0 - std::pow(1.0 - delta, num_sources);
  if (slope <= 0.0) {
    throw DegenerateAsymptote("iid_asymptote: slope is zero (delta = 0), "
                              "offset undefined");
  }
  CompensatedSum acc;
  for (int k = 1; k <= num_sources; ++k) {
    acc.add(binomial(num_sources, k) * std::pow(delta, k) *
            std::pow(1.0 - delta, num_sources - k) * harmonic(k - 1));
  }
  return AsymptoteLine{slope, -std::log(alpha) - acc.value() / slope};
}

double harmonic(int n) {
  if (n < 0) throw InvalidParameter("harmonic: index must be >= 0");
  double h = 0.0;
  for (int j = n; j >= 1; --j) h += 1.0 / j;  // small terms first
  return h;
}

}  // namespace esr
