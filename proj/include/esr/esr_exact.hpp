#pragma once

// Exact ergodic secrecy rate of optimal source selection.
//
// For an active-backhaul set S the selected rate is
// max(ln Gamma_S, 0) with Gamma_S = max_{k in S} (1+gamma_Dk)/(1+gamma_Ek).
// Its CDF for x > 1 is the product over k in S of
//
//   1 - sum_n psi_n * n a_k c_k e^(-beta_k x) / (x + n a_k),
//
// with a_k = alpha_k/beta_k and c_k = exp(beta_k). Expanding the product
// into signed subset terms and integrating (1 - F(x))/x over [1, inf)
// term by term via partial fractions yields a closed form in scaled
// exponential integrals e^z E1(z); the expected rate for the whole system
// is the backhaul-probability mixture over all subsets.

#include <vector>

#include "esr/model.hpp"

namespace esr {

// Residues of 1/(x * prod_k (x + p_k)) for distinct positive p_k = i_k*a_k:
// a0 pairs with 1/x and ak[k] with 1/(x + p_k).
struct PartialFractionCoeffs {
  double a0 = 0.0;
  std::vector<double> ak;  // aligned with the subset members
};

// CDF of Gamma_S at x > 1 (product form). Result is clamped to [0, 1].
double cdf_gamma_exact(double x, SourceSet s, const ValidatedConfig& cfg);

// Residues for the multiplier assignment `idx`; distinctness of the
// products is guaranteed by config validation.
PartialFractionCoeffs partial_fraction_coeffs_exact(const MultiIndex& idx,
                                                    const ValidatedConfig& cfg);

// Expected secrecy rate E[max(ln Gamma_S, 0)] for one nonempty subset.
double esr_exact_subset(SourceSet s, const ValidatedConfig& cfg);

// Backhaul-weighted ergodic secrecy rate over all subsets (the empty set
// contributes zero).
EsrEstimate esr_exact(const ValidatedConfig& cfg);

// Number of expanded closed-form terms an esr_exact_subset evaluation
// touches; used for the term-budget guard.
double esr_exact_subset_term_count(int subset_size, int num_eavesdroppers);

}  // namespace esr
