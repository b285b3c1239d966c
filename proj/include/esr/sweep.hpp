#pragma once

// Sweep front end: JSON experiment specs, grid evaluation across the
// analytical methods and the Monte Carlo oracle, CSV emission.
//
// Spec schema (all SNRs use the power convention, linear = 10^(dB/10)):
//
// {
//   "num_eavesdroppers": 1,
//   "eve_avg_snr": {"units": "db", "values": [3, 6, 9, 12]},   // 1/alpha_k
//   "snr_fraction": [0.1, 0.2, 0.3, 0.4],                      // rho_k; scalar broadcasts
//   "backhaul_reliability": 0.8,                               // delta_k; scalar broadcasts
//   "inv_beta_db": [0, 5, 10, 15, 20],                         // strictly increasing
//   "methods": ["exact", "highsnr", "mc-exact"],
//   "mc": {"replications": 1000000, "seed": 12345, "batch_size": 65536}  // optional
// }

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "esr/mc.hpp"
#include "esr/model.hpp"

namespace esr {

enum class Method { exact, highsnr, asymptote, iid, mc_exact, mc_ratio };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct SweepSpec {
  AsymptoticConfig base;            // common_inv_beta_db unused; the grid drives it
  std::vector<double> inv_beta_db;  // nonempty, strictly increasing
  std::vector<Method> methods;      // canonical order, no duplicates
  std::optional<McSettings> mc;
};

struct SweepRow {
  double inv_beta_db = 0.0;
  std::optional<double> exact;
  std::optional<double> highsnr;
  std::optional<double> asymptote;
  std::optional<double> iid;
  std::optional<double> mc_exact;
  std::optional<double> mc_exact_se;
  std::optional<double> mc_ratio;
  std::optional<double> mc_ratio_se;
};

struct RunOptions {
  bool jitter = false;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::int64_t> replications_override;
  double distinct_tol = kDefaultDistinctTol;
};

// Parse and validate a spec document / file. Parse failures and schema
// violations throw InvalidParameter with the offending field named.
SweepSpec parse_spec(const std::string& json_text);
SweepSpec load_spec(const std::filesystem::path& path);

// Full consistency check of a programmatically built spec; load_spec and
// run_sweep both apply it.
void validate_spec(const SweepSpec& spec);

// Whether any requested method runs through the general partial-fraction
// machinery and therefore needs the distinct-products property. The iid
// method and the IID-served asymptote do not; Monte Carlo does only
// because its inputs are validated configs.
bool spec_requires_distinct_ratios(const SweepSpec& spec);

// Effective Monte Carlo settings after defaults and overrides.
McSettings effective_mc_settings(const SweepSpec& spec, const RunOptions& opts);

// One row per grid point, in grid order; deterministic given (spec, opts),
// including the Monte Carlo columns. A method failing at a grid point
// aborts with a diagnostic naming the point.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const RunOptions& opts = {});

struct CsvMeta {
  std::string version;          // semantic version stamped into the header
  std::uint64_t seed = 0;       // effective Monte Carlo seed
  std::vector<Method> methods;  // columns to emit
};

// CSV with a single comment line, a header line, and one line per row;
// '\n' endings, shortest round-trip number formatting.
std::string emit_csv(const std::vector<SweepRow>& rows, const CsvMeta& meta);

}  // namespace esr
