#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "esr/sweep.hpp"
#include "esr/version.hpp"

using namespace esr;

namespace {

const char* kFig1Spec = R"({
  "num_eavesdroppers": 1,
  "eve_avg_snr": {"units": "db", "values": [3, 6, 9, 12]},
  "snr_fraction": [0.1, 0.2, 0.3, 0.4],
  "backhaul_reliability": 0.8,
  "inv_beta_db": [0, 10, 20, 30, 40],
  "methods": ["exact", "highsnr"]
})";

std::string unit_spec(const std::string& methods,
                      const std::string& grid = "[0]",
                      const std::string& mc = "") {
  std::ostringstream os;
  os << R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "linear", "values": [1.0]},
    "backhaul_reliability": 1.0,
    "inv_beta_db": )" << grid << R"(,
    "methods": )" << methods;
  if (!mc.empty()) os << ", \"mc\": " << mc;
  os << "}";
  return os.str();
}

}  // namespace

TEST_CASE("the four-source reference spec parses") {
  const SweepSpec spec = parse_spec(kFig1Spec);
  CHECK(spec.base.num_sources() == 4);
  CHECK(spec.base.num_eavesdroppers == 1);
  // 1/alpha = 3 dB -> alpha = 10^-0.3
  CHECK(spec.base.eve_rate[0] == doctest::Approx(std::pow(10.0, -0.3)).epsilon(1e-12));
  CHECK(spec.base.eve_rate[3] == doctest::Approx(std::pow(10.0, -1.2)).epsilon(1e-12));
  CHECK(spec.base.snr_fraction[1] == 0.2);
  CHECK(spec.base.backhaul_reliability == std::vector<double>(4, 0.8));
  CHECK(spec.inv_beta_db.size() == 5);
  CHECK(spec.methods == std::vector<Method>{Method::exact, Method::highsnr});
  CHECK_FALSE(spec.mc.has_value());
}

TEST_CASE("linear units bypass the dB conversion") {
  const SweepSpec spec = parse_spec(unit_spec(R"(["exact"])"));
  CHECK(spec.base.eve_rate[0] == 1.0);      // average SNR 1 -> alpha 1
  CHECK(spec.base.snr_fraction[0] == 1.0);  // defaulted
}

TEST_CASE("schema violations are rejected with the field named") {
  auto rejects = [](const std::string& text, const char* needle) {
    try {
      parse_spec(text);
      FAIL_CHECK("expected InvalidParameter for: " << needle);
    } catch (const InvalidParameter& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  rejects("{", "spec");  // parse error
  rejects(R"({"num_eavesdroppers": 1})", "eve_avg_snr");
  rejects(unit_spec(R"(["exact"])", "[]"), "inv_beta_db");
  rejects(unit_spec(R"(["exact"])", "[0, 10, 10]"), "inv_beta_db");
  rejects(unit_spec(R"(["exact"])", "[10, 0]"), "inv_beta_db");
  rejects(unit_spec(R"([])"), "methods");
  rejects(unit_spec(R"(["nope"])"), "method");
  rejects(unit_spec(R"(["exact"])", "[0]", R"({"replications": 10})"), "replications");
  rejects(R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "linear", "values": [1.0]},
    "backhaul_reliability": 1.5,
    "inv_beta_db": [0],
    "methods": ["exact"]
  })", "backhaul_reliability");
  rejects(R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "parsec", "values": [1.0]},
    "backhaul_reliability": 1.0,
    "inv_beta_db": [0],
    "methods": ["exact"]
  })", "units");
  rejects(R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "linear", "values": [1.0]},
    "backhaul_reliability": 1.0,
    "inv_beta_db": [0],
    "methods": ["exact"],
    "typo_field": 3
  })", "typo_field");
}

TEST_CASE("the iid method requires an IID-compatible base") {
  const std::string bad = R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "db", "values": [3, 6]},
    "backhaul_reliability": 1.0,
    "inv_beta_db": [0],
    "methods": ["iid"]
  })";
  CHECK_THROWS_AS(parse_spec(bad), InvalidParameter);
  const std::string good = R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "db", "values": [3, 3]},
    "backhaul_reliability": 1.0,
    "inv_beta_db": [0],
    "methods": ["iid"]
  })";
  CHECK_NOTHROW(parse_spec(good));
}

TEST_CASE("sweep of the unit config reproduces the golden values") {
  const SweepSpec spec = parse_spec(unit_spec(
      R"(["exact", "mc-exact"])", "[0]",
      R"({"replications": 200000, "seed": 77})"));
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].exact.has_value());
  REQUIRE(rows[0].mc_exact.has_value());
  CHECK(*rows[0].exact == doctest::Approx(0.23501874543497203).epsilon(1e-9));
  CHECK(std::abs(*rows[0].mc_exact - *rows[0].exact) <= 3.0 * *rows[0].mc_exact_se);
}

TEST_CASE("rows are emitted for every grid point with requested columns only") {
  const SweepSpec spec = parse_spec(kFig1Spec);
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 5);
  for (const auto& row : rows) {
    CHECK(row.exact.has_value());
    CHECK(row.highsnr.has_value());
    CHECK_FALSE(row.asymptote.has_value());
    CHECK_FALSE(row.mc_exact.has_value());
    CHECK(*row.exact >= 0.0);
    CHECK(*row.highsnr >= *row.exact - 1e-10);
  }
}

TEST_CASE("asymptote gap shrinks along the grid at high SNR") {
  const std::string text = R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "db", "values": [3, 6, 9, 12]},
    "backhaul_reliability": 1.0,
    "inv_beta_db": [20, 25, 30, 35, 40],
    "methods": ["highsnr", "asymptote"]
  })";
  const auto rows = run_sweep(parse_spec(text));
  double prev_gap = 1e300;
  for (const auto& row : rows) {
    const double gap = std::abs(*row.highsnr - *row.asymptote);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("asymptote column is clamped at the zero-rate floor") {
  const std::string text = R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "db", "values": [12, 14]},
    "backhaul_reliability": 0.4,
    "inv_beta_db": [-30, 40],
    "methods": ["asymptote"]
  })";
  const auto rows = run_sweep(parse_spec(text));
  CHECK(*rows[0].asymptote == 0.0);  // the raw line is negative here
  CHECK(*rows[1].asymptote > 0.0);
}

TEST_CASE("IID fallback serves the asymptote for equal-ratio configs") {
  const std::string text = R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "db", "values": [3, 3, 3, 3]},
    "backhaul_reliability": 1.0,
    "inv_beta_db": [30, 40],
    "methods": ["iid", "asymptote"]
  })";
  const auto rows = run_sweep(parse_spec(text));
  double prev_gap = 1e300;
  for (const auto& row : rows) {
    REQUIRE(row.iid.has_value());
    REQUIRE(row.asymptote.has_value());
    // The line tracks the rate and tightens with SNR.
    const double gap = std::abs(*row.iid - *row.asymptote);
    CHECK(gap <= 2e-2);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("per-point failures name the grid point") {
  // Degenerate ratios (equal alphas) break the exact method.
  const std::string text = R"({
    "num_eavesdroppers": 1,
    "eve_avg_snr": {"units": "db", "values": [3, 3]},
    "backhaul_reliability": 1.0,
    "inv_beta_db": [0, 10],
    "methods": ["exact"]
  })";
  try {
    run_sweep(parse_spec(text));
    FAIL("expected DegenerateProducts");
  } catch (const DegenerateProducts& e) {
    CHECK(std::string(e.what()).find("inv_beta_db=0") != std::string::npos);
  }
  // Jitter rescues the same spec.
  RunOptions opts;
  opts.jitter = true;
  CHECK_NOTHROW(run_sweep(parse_spec(text), opts));
}

TEST_CASE("CSV layout: comment, header, one line per row") {
  const SweepSpec spec = parse_spec(unit_spec(R"(["highsnr"])"));
  const auto rows = run_sweep(spec);
  CsvMeta meta{kVersion, 12345, spec.methods};
  const std::string csv = emit_csv(rows, meta);
  std::istringstream is(csv);
  std::string line1, line2, line3, line4;
  CHECK(std::getline(is, line1));
  CHECK(std::getline(is, line2));
  CHECK(std::getline(is, line3));
  CHECK_FALSE(std::getline(is, line4));
  CHECK(line1.rfind("# secrecy-esr v" + std::string(kVersion) + " seed=12345", 0) == 0);
  CHECK(line2 == "inv_beta_db,highsnr");
  CHECK(line3.rfind("0,", 0) == 0);
  CHECK(csv.back() == '\n');
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("CSV columns follow the canonical order and pair MC with stderr") {
  const SweepSpec spec = parse_spec(unit_spec(
      R"(["mc-ratio", "exact", "mc-exact", "asymptote"])", "[0, 10]",
      R"({"replications": 1000, "seed": 3})"));
  const auto rows = run_sweep(spec);
  CsvMeta meta{kVersion, 3, spec.methods};
  const std::string csv = emit_csv(rows, meta);
  std::istringstream is(csv);
  std::string comment, header;
  std::getline(is, comment);
  std::getline(is, header);
  CHECK(header == "inv_beta_db,exact,asymptote,mc_exact,mc_exact_se,mc_ratio,mc_ratio_se");
}

TEST_CASE("CSV numbers round-trip exactly") {
  const SweepSpec spec = parse_spec(unit_spec(R"(["exact", "highsnr"])", "[0, 7, 13]"));
  const auto rows = run_sweep(spec);
  CsvMeta meta{kVersion, 0, spec.methods};
  const std::string csv = emit_csv(rows, meta);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);  // comment
  std::getline(is, line);  // header
  std::size_t row_idx = 0;
  while (std::getline(is, line)) {
    std::istringstream fields(line);
    std::string field;
    std::getline(fields, field, ',');
    CHECK(std::strtod(field.c_str(), nullptr) == rows[row_idx].inv_beta_db);
    std::getline(fields, field, ',');
    CHECK(std::strtod(field.c_str(), nullptr) == *rows[row_idx].exact);
    std::getline(fields, field, ',');
    CHECK(std::strtod(field.c_str(), nullptr) == *rows[row_idx].highsnr);
    ++row_idx;
  }
  CHECK(row_idx == rows.size());
}

TEST_CASE("spec to CSV is a pure function") {
  const std::string text = unit_spec(R"(["exact", "mc-exact"])", "[0, 5]",
                                     R"({"replications": 20000, "seed": 99})");
  auto render = [&] {
    const SweepSpec spec = parse_spec(text);
    CsvMeta meta{kVersion, effective_mc_settings(spec, {}).seed, spec.methods};
    return emit_csv(run_sweep(spec), meta);
  };
  CHECK(render() == render());
}

TEST_CASE("seed and replication overrides take effect") {
  const SweepSpec spec = parse_spec(unit_spec(
      R"(["mc-exact"])", "[0]", R"({"replications": 20000, "seed": 1})"));
  RunOptions opts;
  opts.seed_override = 2;
  const auto base = run_sweep(spec);
  const auto overridden = run_sweep(spec, opts);
  CHECK(*base[0].mc_exact != *overridden[0].mc_exact);
  CHECK(effective_mc_settings(spec, opts).seed == 2);
  opts.replications_override = 40'000;
  CHECK(effective_mc_settings(spec, opts).replications == 40'000);
}

TEST_CASE("load_spec reports missing files") {
  CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), InvalidParameter);
}
