#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "esr/esr_exact.hpp"
#include "esr/esr_highsnr.hpp"
#include "esr/mc.hpp"
#include "oracle.hpp"

using namespace esr;

namespace {

ValidatedConfig simple_config(int n_count = 1, double delta = 1.0) {
  SystemConfig cfg;
  cfg.eve_rate = {1.0};
  cfg.dest_rate = {1.0};
  cfg.backhaul_reliability = {delta};
  cfg.num_eavesdroppers = n_count;
  return validate_config(cfg);
}

}  // namespace

TEST_CASE("sampled destination SNR has the exponential mean") {
  SystemConfig cfg;
  cfg.eve_rate = {1.0, 0.5};
  cfg.dest_rate = {2.0, 0.25};
  cfg.backhaul_reliability = {0.8, 0.8};
  cfg.num_eavesdroppers = 1;
  const auto vcfg = validate_config(cfg);
  const CounterRng rng(1);
  const int reps = 1'000'000;
  double sum0 = 0.0, sum1 = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const Realization r = sample_realization(vcfg, rng, rep);
    sum0 += r.dest_snr[0];
    sum1 += r.dest_snr[1];
  }
  CHECK(std::abs(sum0 / reps - 0.5) <= 0.005 * 0.5);
  CHECK(std::abs(sum1 / reps - 4.0) <= 0.005 * 4.0);
}

TEST_CASE("eavesdropper maximum follows the max-of-N exponential law") {
  const auto vcfg = simple_config(3);
  const CounterRng rng(2);
  const int reps = 1'000'000;
  int below = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const Realization r = sample_realization(vcfg, rng, rep);
    if (r.eve_snr_max[0] <= 1.0) ++below;
  }
  const double expected = std::pow(1.0 - std::exp(-1.0), 3);  // ~0.2524
  CHECK(std::abs(static_cast<double>(below) / reps - expected) <= 0.005);
}

TEST_CASE("backhaul activity matches its Bernoulli probability") {
  const auto vcfg = simple_config(1, 0.8);
  const CounterRng rng(3);
  const int reps = 1'000'000;
  int active = 0;
  for (int rep = 0; rep < reps; ++rep) {
    if (sample_realization(vcfg, rng, rep).backhaul_active[0]) ++active;
  }
  CHECK(std::abs(static_cast<double>(active) / reps - 0.8) <= 0.003 * 0.8);
}

TEST_CASE("per-realization rates") {
  Realization r;
  SUBCASE("no backhaul active gives zero") {
    r.dest_snr = {3.0};
    r.eve_snr_max = {1.0};
    r.backhaul_active = {false};
    CHECK(secrecy_rate_realization(r) == 0.0);
    CHECK(ratio_rate_realization(r) == 0.0);
  }
  SUBCASE("single active source") {
    r.dest_snr = {3.0};
    r.eve_snr_max = {1.0};
    r.backhaul_active = {true};
    CHECK(secrecy_rate_realization(r) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(ratio_rate_realization(r) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  }
  SUBCASE("the best active ratio wins; the floor clips losses") {
    // Ratios (1+gd)/(1+ge): 0.5 and 2.0.
    r.dest_snr = {0.0, 3.0};
    r.eve_snr_max = {1.0, 1.0};
    r.backhaul_active = {true, true};
    CHECK(secrecy_rate_realization(r) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    r.backhaul_active = {true, false};
    CHECK(secrecy_rate_realization(r) == 0.0);  // max(ln 0.5, 0)
  }
}

TEST_CASE("estimates are deterministic and match the statistics route") {
  const auto vcfg = simple_config();
  McSettings settings;
  settings.replications = 50'000;
  settings.seed = 77;
  settings.batch_size = 1024;
  const auto first = mc_esr(vcfg, settings, McMode::exact);
  const auto second = mc_esr(vcfg, settings, McMode::exact);
  CHECK(first.value == second.value);
  CHECK(*first.std_error == *second.std_error);

  // Same estimate when recomputed from public per-replication pieces.
  const CounterRng rng(settings.seed);
  double sum = 0.0;
  for (int rep = 0; rep < settings.replications; ++rep) {
    sum += secrecy_rate_realization(sample_realization(vcfg, rng, rep));
  }
  CHECK(first.value == doctest::Approx(sum / settings.replications).epsilon(1e-12));
}

TEST_CASE("threaded and serial runs are bit-identical") {
  const auto vcfg = simple_config();
  McSettings settings;
  settings.replications = 60'000;
  settings.seed = 2718;
  settings.batch_size = 4096;
  const auto serial = mc_esr(vcfg, settings, McMode::exact, 1);
  const auto threaded = mc_esr(vcfg, settings, McMode::exact, 4);
  CHECK(serial.value == threaded.value);
  CHECK(*serial.std_error == *threaded.std_error);
}

TEST_CASE("batch size does not change the estimate materially") {
  const auto vcfg = simple_config();
  McSettings a;
  a.replications = 40'000;
  a.seed = 5;
  a.batch_size = 37;
  McSettings b = a;
  b.batch_size = 40'000;
  const auto ea = mc_esr(vcfg, a, McMode::exact);
  const auto eb = mc_esr(vcfg, b, McMode::exact);
  // Identical replication values; only the reduction grouping differs.
  CHECK(ea.value == doctest::Approx(eb.value).epsilon(1e-13));
}

TEST_CASE("exact mode reproduces the closed form within three sigma") {
  const auto vcfg = simple_config();
  McSettings settings;
  settings.replications = 1'000'000;
  settings.seed = 101;
  const auto est = mc_esr(vcfg, settings, McMode::exact);
  REQUIRE(est.std_error.has_value());
  CHECK(*est.std_error > 0.0);
  CHECK(std::abs(est.value - 0.23501874543497203) <= 3.0 * *est.std_error);
}

TEST_CASE("ratio mode reproduces ln 2 within three sigma") {
  const auto vcfg = simple_config();
  McSettings settings;
  settings.replications = 1'000'000;
  settings.seed = 101;
  const auto est = mc_esr(vcfg, settings, McMode::ratio);
  CHECK(std::abs(est.value - std::log(2.0)) <= 3.0 * *est.std_error);
}

TEST_CASE("dead backhaul yields exactly zero with zero variance") {
  const auto vcfg = simple_config(1, 0.0);
  McSettings settings;
  settings.replications = 10'000;
  settings.seed = 9;
  const auto est = mc_esr(vcfg, settings, McMode::exact);
  CHECK(est.value == 0.0);
  CHECK(*est.std_error == 0.0);
}

TEST_CASE("too few replications are rejected") {
  McSettings settings;
  settings.replications = 999;
  CHECK_THROWS_AS(mc_esr(simple_config(), settings, McMode::exact), InvalidParameter);
  settings.replications = 1000;
  settings.batch_size = 0;
  CHECK_THROWS_AS(mc_esr(simple_config(), settings, McMode::exact), InvalidParameter);
}

TEST_CASE("disjoint seeds agree within combined uncertainty") {
  oracle::ConfigSampler sampler(21);
  for (std::uint64_t id = 0; id < 3; ++id) {
    const auto vcfg = sampler.draw(id);
    McSettings a;
    a.replications = 100'000;
    a.seed = 1000 + id;
    McSettings b = a;
    b.seed = 2000 + id;
    const auto ea = mc_esr(vcfg, a, McMode::exact);
    const auto eb = mc_esr(vcfg, b, McMode::exact);
    const double combined = std::hypot(*ea.std_error, *eb.std_error);
    CHECK(std::abs(ea.value - eb.value) <= 6.0 * combined + 1e-12);
  }
}

TEST_CASE("ratio mode dominates exact mode") {
  oracle::ConfigSampler sampler(65);
  McSettings settings;
  settings.replications = 50'000;
  settings.seed = 31;
  for (std::uint64_t id = 0; id < 5; ++id) {
    const auto vcfg = sampler.draw(id);
    const auto exact = mc_esr(vcfg, settings, McMode::exact);
    const auto ratio = mc_esr(vcfg, settings, McMode::ratio);
    CHECK(ratio.value >= exact.value - 3.0 * *exact.std_error);
  }
}

TEST_CASE("both modes track their analytical counterparts") {
  oracle::ConfigSampler sampler(87);
  McSettings settings;
  settings.replications = 200'000;
  settings.seed = 4242;
  for (std::uint64_t id = 0; id < 3; ++id) {
    const auto vcfg = sampler.draw(id);
    const auto exact = mc_esr(vcfg, settings, McMode::exact);
    const auto ratio = mc_esr(vcfg, settings, McMode::ratio);
    CHECK(std::abs(exact.value - esr_exact(vcfg).value) <=
          4.0 * *exact.std_error + 1e-12);
    CHECK(std::abs(ratio.value - esr_highsnr(vcfg).value) <=
          4.0 * *ratio.std_error + 1e-12);
  }
}
