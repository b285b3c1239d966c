// secrecy-esr: command-line front end.
//
//   secrecy-esr sweep <spec.json>     evaluate a spec and emit CSV
//   secrecy-esr validate <spec.json>  parse and validate only
//   secrecy-esr selftest              run the built-in invariant checks
//
// Exit codes: 0 success, 1 selftest/internal failure, 2 validation error,
// 3 numerical guard tripped.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "esr/esr_exact.hpp"
#include "esr/esr_highsnr.hpp"
#include "esr/expint.hpp"
#include "esr/mc.hpp"
#include "esr/rng.hpp"
#include "esr/sweep.hpp"
#include "esr/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitGuard = 3;

int run_sweep_command(const std::string& spec_path, const std::string& out_path,
                      const esr::RunOptions& opts) {
  const esr::SweepSpec spec = esr::load_spec(spec_path);
  const auto rows = esr::run_sweep(spec, opts);
  esr::CsvMeta meta;
  meta.version = esr::kVersion;
  meta.seed = esr::effective_mc_settings(spec, opts).seed;
  meta.methods = spec.methods;
  const std::string csv = esr::emit_csv(rows, meta);
  if (out_path.empty()) {
    std::cout << csv;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot open output file '" << out_path << "'\n";
    return kExitFailure;
  }
  out << csv;
  return kExitOk;
}

int run_validate_command(const std::string& spec_path, bool jitter) {
  const esr::SweepSpec spec = esr::load_spec(spec_path);
  // Exercise the numerical validation once; distinctness does not depend on
  // the swept SNR, and only the general-path methods require it.
  if (esr::spec_requires_distinct_ratios(spec)) {
    esr::JitterOptions jopts;
    jopts.enabled = jitter;
    esr::validate_config(spec.base.to_system_config(spec.inv_beta_db.front()),
                         esr::kDefaultDistinctTol, jopts);
  }
  std::cout << "OK: " << spec.base.num_sources() << " source(s), "
            << spec.base.num_eavesdroppers << " eavesdropper(s), "
            << spec.inv_beta_db.size() << " grid point(s), methods:";
  for (esr::Method m : spec.methods) std::cout << " " << esr::method_name(m);
  std::cout << "\n";
  return kExitOk;
}

struct SelfTest {
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  }
};

esr::ValidatedConfig random_config(esr::CounterRng& rng, std::uint64_t id) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t rep = id * 97 + attempt;
    const int k_count = 1 + static_cast<int>(rng.u01(rep, 0) * 4.0) % 4;
    const int n_count = 1 + static_cast<int>(rng.u01(rep, 1) * 3.0) % 3;
    esr::SystemConfig cfg;
    cfg.num_eavesdroppers = n_count;
    for (int k = 0; k < k_count; ++k) {
      const double inv_alpha_db = 12.0 * rng.u01(rep, 10 + k);
      const double inv_beta_db = 30.0 * rng.u01(rep, 30 + k);
      cfg.eve_rate.push_back(std::pow(10.0, -inv_alpha_db / 10.0));
      cfg.dest_rate.push_back(std::pow(10.0, -inv_beta_db / 10.0));
      const double u = rng.u01(rep, 50 + k);
      cfg.backhaul_reliability.push_back(u < 0.34 ? 0.2 : (u < 0.67 ? 0.8 : 1.0));
    }
    try {
      return esr::validate_config(cfg);
    } catch (const esr::DegenerateProducts&) {
      continue;
    }
  }
}

int run_selftest() {
  SelfTest t;
  esr::CounterRng rng(0xe5717e57u);

  // Signed binomial weights sum to one.
  {
    bool ok = true;
    for (int n_count = 1; n_count <= 8; ++n_count) {
      double sum = 0.0;
      for (int n = 1; n <= n_count; ++n) sum += esr::psi(n, n_count);
      ok = ok && std::abs(sum - 1.0) < 1e-12;
    }
    t.check("psi weights sum to 1", ok);
  }

  // Subset probabilities form a distribution.
  {
    bool ok = true;
    for (int k_count = 1; k_count <= 8; ++k_count) {
      std::vector<double> deltas;
      for (int k = 0; k < k_count; ++k) deltas.push_back(rng.u01(1, k));
      double sum = 0.0;
      for (const auto& sw : esr::subset_distribution(deltas)) sum += sw.probability;
      ok = ok && std::abs(sum - 1.0) < 1e-12;
    }
    t.check("subset probabilities sum to 1", ok);
  }

  // Exponential-integral bounds and branch continuity.
  {
    bool ok = true;
    for (int i = 0; i <= 40; ++i) {
      const double x = std::pow(10.0, 2.0 * i / 40.0);  // [1, 100]
      const double e1 = esr::exp_int_e1(x).value;
      ok = ok && e1 > std::exp(-x) / (x + 1.0) && e1 < std::exp(-x) / x;
    }
    const double lo = esr::exp_int_e1(std::nextafter(1.0, 0.0)).value;
    const double hi = esr::exp_int_e1(std::nextafter(1.0, 2.0)).value;
    ok = ok && std::abs(lo - hi) / hi < 1e-12;
    t.check("exponential integral sandwich and crossover", ok);
  }

  // Single-source closed form against its hand reduction.
  {
    esr::SystemConfig cfg;
    cfg.eve_rate = {1.0};
    cfg.dest_rate = {1.0};
    cfg.backhaul_reliability = {1.0};
    cfg.num_eavesdroppers = 1;
    const auto vcfg = esr::validate_config(cfg);
    const double value = esr::esr_exact(vcfg).value;
    const double kernel = std::exp(1.0) * (esr::exp_int_e1(1.0).value -
                                           std::exp(1.0) * esr::exp_int_e1(2.0).value);
    const double high = esr::esr_highsnr(vcfg).value;
    t.check("unit-parameter exact rate matches E1 kernel",
            std::abs(value - kernel) < 1e-12);
    t.check("unit-parameter high-SNR rate is ln 2",
            std::abs(high - std::log(2.0)) < 1e-12);
  }

  // Weight sums and the two evaluation routes.
  {
    bool weights_ok = true;
    bool routes_ok = true;
    for (std::uint64_t id = 0; id < 20; ++id) {
      const auto vcfg = random_config(rng, id);
      const auto full = esr::full_set(vcfg.num_sources());
      for (esr::SourceSet s = 1; s <= full; ++s) {
        double sum = 0.0;
        for (int k = 0; k < vcfg.num_sources(); ++k) {
          if (!esr::set_contains(s, k)) continue;
          for (int n = 1; n <= vcfg.num_eavesdroppers(); ++n) {
            sum += esr::weight_w(k, n, s, vcfg);
          }
        }
        weights_ok = weights_ok && std::abs(sum - 1.0) < 1e-9;
      }
      const double via_mu = esr::esr_highsnr(vcfg).value;
      double via_subsets = 0.0;
      for (const auto& sw :
           esr::subset_distribution(vcfg.config().backhaul_reliability)) {
        if (sw.subset == 0) continue;
        via_subsets += sw.probability * esr::esr_highsnr_subset(sw.subset, vcfg);
      }
      routes_ok = routes_ok &&
                  std::abs(via_mu - via_subsets) <= 1e-10 * std::max(1.0, via_mu);
    }
    t.check("subset weights sum to 1", weights_ok);
    t.check("high-SNR mixture equals weighted form", routes_ok);
  }

  // Monte Carlo determinism and analytical agreement.
  {
    const auto vcfg = random_config(rng, 99);
    esr::McSettings settings;
    settings.replications = 100'000;
    settings.seed = 7;
    const auto first = esr::mc_esr(vcfg, settings, esr::McMode::exact);
    const auto second = esr::mc_esr(vcfg, settings, esr::McMode::exact);
    t.check("Monte Carlo estimate is deterministic",
            first.value == second.value && *first.std_error == *second.std_error);
    const double exact = esr::esr_exact(vcfg).value;
    t.check("Monte Carlo within 4 sigma of closed form",
            std::abs(first.value - exact) <= 4.0 * *first.std_error + 1e-12);
  }

  std::cout << (t.failures == 0 ? "selftest: all checks passed\n"
                                : "selftest: FAILURES detected\n");
  return t.failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secrecy-esr: ergodic secrecy rate of optimal source selection "
               "with unreliable wireless backhaul"};
  app.set_version_flag("--version", std::string("secrecy-esr v") + esr::kVersion);
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  esr::RunOptions opts;
  std::uint64_t seed = 0;
  std::int64_t reps = 0;

  auto* sweep = app.add_subcommand("sweep", "evaluate a spec over its SNR grid and emit CSV");
  sweep->add_option("spec", spec_path, "JSON spec file")->required();
  sweep->add_option("--out", out_path, "output CSV path (default: stdout)");
  auto* seed_opt = sweep->add_option("--seed", seed, "override the Monte Carlo seed");
  auto* reps_opt = sweep->add_option("--reps", reps, "override the Monte Carlo replication count");
  sweep->add_flag("--jitter", opts.jitter, "jitter degenerate ratio products instead of rejecting");

  std::string validate_path;
  bool validate_jitter = false;
  auto* validate = app.add_subcommand("validate", "parse and validate a spec");
  validate->add_option("spec", validate_path, "JSON spec file")->required();
  validate->add_flag("--jitter", validate_jitter, "jitter degenerate ratio products instead of rejecting");

  auto* selftest = app.add_subcommand("selftest", "run the built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      if (*seed_opt) opts.seed_override = seed;
      if (*reps_opt) opts.replications_override = reps;
      return run_sweep_command(spec_path, out_path, opts);
    }
    if (validate->parsed()) {
      return run_validate_command(validate_path, validate_jitter);
    }
    if (selftest->parsed()) {
      return run_selftest();
    }
  } catch (const esr::GuardExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const esr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
