#include "esr/esr_exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "esr/expint.hpp"
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

}  // namespace

double cdf_gamma_exact(double x, SourceSet s, const ValidatedConfig& cfg) {
  require_nonempty_subset(s, cfg, "cdf_gamma_exact");
  if (!(x > 1.0)) {
    std::ostringstream msg;
    msg << "cdf_gamma_exact: x = " << x << " must be > 1";
    throw InvalidParameter(msg.str());
  }
  const int n_count = cfg.num_eavesdroppers();
  double prod = 1.0;
  for (int k = 0; k < cfg.num_sources(); ++k) {
    if (!set_contains(s, k)) continue;
    const double a = cfg.a(k);
    CompensatedSum tail;  // alternating in n
    for (int n = 1; n <= n_count; ++n) {
      tail.add(psi(n, n_count) * n * a / (x + n * a));
    }
    // c_k e^(-beta_k x) fused as e^(beta_k (1 - x)); x > 1 keeps it <= 1.
    const double factor = 1.0 - std::exp(cfg.beta(k) * (1.0 - x)) * tail.value();
    prod *= std::clamp(factor, 0.0, 1.0);
  }
  return std::clamp(prod, 0.0, 1.0);
}

PartialFractionCoeffs partial_fraction_coeffs_exact(const MultiIndex& idx,
                                                    const ValidatedConfig& cfg) {
  const std::size_t m = idx.sources.size();
  if (m == 0 || idx.values.size() != m) {
    throw InvalidParameter("partial_fraction_coeffs_exact: malformed multi-index");
  }
  std::array<double, kMaxSources> products{};
  for (std::size_t k = 0; k < m; ++k) {
    products[k] = idx.values[k] * cfg.a(idx.sources[k]);
  }
  PartialFractionCoeffs coeffs;
  coeffs.ak.resize(m);
  double denom0 = 1.0;
  for (std::size_t k = 0; k < m; ++k) denom0 *= products[k];
  coeffs.a0 = 1.0 / denom0;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;  // (-1)^|M|
  for (std::size_t k = 0; k < m; ++k) {
    double denom = products[k];
    for (std::size_t j = 0; j < m; ++j) {
      if (j != k) denom *= products[k] - products[j];
    }
    coeffs.ak[k] = sign / denom;
  }
  return coeffs;
}

double esr_exact_subset_term_count(int subset_size, int num_eavesdroppers) {
  double total = 0.0;
  for (int m = 1; m <= subset_size; ++m) {
    total += binomial(subset_size, m) *
             std::pow(static_cast<double>(num_eavesdroppers), m) * (m + 1);
  }
  return total;
}

double esr_exact_subset(SourceSet s, const ValidatedConfig& cfg) {
  require_nonempty_subset(s, cfg, "esr_exact_subset");
  const int n_count = cfg.num_eavesdroppers();
  const double planned = esr_exact_subset_term_count(set_size(s), n_count);
  if (planned > static_cast<double>(kTermBudget)) {
    std::ostringstream msg;
    msg << "esr_exact_subset: " << planned << " expanded terms exceed the budget of "
        << kTermBudget;
    throw GuardExceeded(msg.str());
  }

  const auto members_all = set_members(s);
  CompensatedSum total;
  for (SourceSet m_mask : submasks_ascending(s)) {
    if (m_mask == 0) continue;  // the empty-subset constant cancels against 1 - F
    const auto members = set_members(m_mask);
    const int m = static_cast<int>(members.size());
    double beta_m = 0.0;
    std::array<double, kMaxSources> a{};
    for (int k = 0; k < m; ++k) {
      beta_m += cfg.beta(members[k]);
      a[k] = cfg.a(members[k]);
    }
    // (-1)^(|M|+1) from moving the signed expansion of F into 1 - F.
    const double outer_sign = (m % 2 == 1) ? 1.0 : -1.0;
    const double pf_sign = (m % 2 == 0) ? 1.0 : -1.0;  // (-1)^|M| in the residues
    const double e1s_beta = exp_int_e1_scaled(beta_m);

    for_each_multi_index(m, n_count, [&](std::span<const int> values) {
      std::array<double, kMaxSources> prod{};
      double weight = 1.0;  // prod_k psi_{i_k} * i_k a_k
      double denom0 = 1.0;  // prod_k i_k a_k
      for (int k = 0; k < m; ++k) {
        prod[k] = values[k] * a[k];
        weight *= psi(values[k], n_count) * prod[k];
        denom0 *= prod[k];
      }
      // Integral of the decomposed kernel against e^(-beta_M x) over
      // [1, inf), with every e^(beta_M ...) Ei(-beta_M ...) pair evaluated
      // through the scaled form e^z E1(z); nothing here can overflow.
      CompensatedSum bracket;
      bracket.add(e1s_beta / denom0);
      for (int k = 0; k < m; ++k) {
        double denom = prod[k];
        for (int j = 0; j < m; ++j) {
          if (j != k) denom *= prod[k] - prod[j];
        }
        bracket.add((pf_sign / denom) * exp_int_e1_scaled(beta_m * (1.0 + prod[k])));
      }
      total.add(outer_sign * weight * bracket.value());
    });
  }
  double value = total.value();
  if (value < 0.0 && value > -1e-9) value = 0.0;  // roundoff at the zero-rate floor
  return value;
}

EsrEstimate esr_exact(const ValidatedConfig& cfg) {
  const int k_count = cfg.num_sources();
  const int n_count = cfg.num_eavesdroppers();
  if (k_count > kMaxSources) {
    throw GuardExceeded("esr_exact: source count exceeds the subset guard");
  }
  double planned = 0.0;
  for (int size = 1; size <= k_count; ++size) {
    planned += binomial(k_count, size) * esr_exact_subset_term_count(size, n_count);
  }
  if (planned > static_cast<double>(kTermBudget)) {
    std::ostringstream msg;
    msg << "esr_exact: " << planned << " expanded terms exceed the budget of "
        << kTermBudget;
    throw GuardExceeded(msg.str());
  }
  CompensatedSum total;
  for (const auto& sw : subset_distribution(cfg.config().backhaul_reliability)) {
    if (sw.subset == 0 || sw.probability == 0.0) continue;
    total.add(sw.probability * esr_exact_subset(sw.subset, cfg));
  }
  return EsrEstimate{std::max(total.value(), 0.0), std::nullopt};
}

}  // namespace esr
