// Prints the oracle-derived reference values that the unit tests freeze.

#include <cstdio>

#include "esr/esr_exact.hpp"
#include "esr/model.hpp"
#include "oracle.hpp"

int main() {
  std::printf("E1(1)  quadrature = %.17g\n", oracle::e1_quadrature(1.0));
  std::printf("E1(2)  quadrature = %.17g\n", oracle::e1_quadrature(2.0));
  std::printf("E1(0.5) quadrature = %.17g\n", oracle::e1_quadrature(0.5));
  std::printf("E1(10) quadrature = %.17g\n", oracle::e1_quadrature(10.0));

  {
    esr::SystemConfig cfg;
    cfg.eve_rate = {1.0};
    cfg.dest_rate = {1.0};
    cfg.backhaul_reliability = {1.0};
    cfg.num_eavesdroppers = 1;
    const auto vcfg = esr::validate_config(cfg);
    std::printf("unit config subset quadrature = %.17g\n",
                oracle::esr_exact_quadrature_subset(1u, vcfg));
    std::printf("unit config esr_exact          = %.17g\n",
                esr::esr_exact(vcfg).value);
  }
  {
    esr::SystemConfig cfg;
    cfg.eve_rate = {0.001};
    cfg.dest_rate = {0.001};
    cfg.backhaul_reliability = {1.0};
    cfg.num_eavesdroppers = 1;
    const auto vcfg = esr::validate_config(cfg);
    std::printf("a=1 beta=0.001 subset quadrature = %.17g\n",
                oracle::esr_exact_quadrature_subset(1u, vcfg));
    std::printf("a=1 beta=0.001 esr_exact         = %.17g\n",
                esr::esr_exact(vcfg).value);
  }
  {
    esr::SystemConfig cfg;
    cfg.eve_rate = {1.0};
    cfg.dest_rate = {100.0};
    cfg.backhaul_reliability = {1.0};
    cfg.num_eavesdroppers = 1;
    const auto vcfg = esr::validate_config(cfg);
    std::printf("beta=100 esr_exact               = %.17g\n",
                esr::esr_exact(vcfg).value);
  }
  {
    // Two IID unit-ratio sources, single eavesdropper: high-SNR rate by
    // quadrature of the max-of-two ratio CDF (x/(x+1))^2.
    const double quad = oracle::esr_subset_quadrature(
        [](double x) {
          const double r = x / (x + 1.0);
          return r * r;
        },
        60.0);
    std::printf("iid K=2 a=1 quadrature         = %.17g\n", quad);
  }
  {
    // Four-source reference scenario at 40 dB, N=1, delta=1: closed forms
    // against quadrature of the product CDFs.
    esr::AsymptoticConfig base;
    base.eve_rate = {std::pow(10.0, -0.3), std::pow(10.0, -0.6),
                     std::pow(10.0, -0.9), std::pow(10.0, -1.2)};
    base.snr_fraction = {0.1, 0.2, 0.3, 0.4};
    base.backhaul_reliability = {1.0, 1.0, 1.0, 1.0};
    base.num_eavesdroppers = 1;
    const auto vcfg = esr::validate_config(base.to_system_config(40.0));
    std::printf("fig1 40dB exact   = %.15g  quadrature = %.15g\n",
                esr::esr_exact(vcfg).value, oracle::esr_exact_quadrature(vcfg));
    std::printf("fig1 40dB highsnr = %.15g  quadrature = %.15g\n",
                esr::esr_highsnr(vcfg).value,
                oracle::esr_highsnr_quadrature(vcfg));
  }
  return 0;
}
