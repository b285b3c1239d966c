#include "esr/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "esr/esr_exact.hpp"
#include "esr/esr_highsnr.hpp"

namespace esr {

namespace {

using nlohmann::json;

constexpr Method kMethodOrder[] = {Method::exact,    Method::highsnr,
                                   Method::asymptote, Method::iid,
                                   Method::mc_exact, Method::mc_ratio};

[[noreturn]] void spec_error(const std::string& what) {
  throw InvalidParameter("spec: " + what);
}

double require_finite(const json& v, const std::string& field) {
  if (!v.is_number()) spec_error(field + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) spec_error(field + " must be finite");
  return x;
}

// Array of K numbers, or a scalar broadcast to K.
std::vector<double> number_list(const json& v, std::size_t k_count,
                                const std::string& field) {
  std::vector<double> out;
  if (v.is_number()) {
    out.assign(k_count, require_finite(v, field));
    return out;
  }
  if (!v.is_array()) spec_error(field + " must be a number or an array");
  if (v.size() != k_count) {
    std::ostringstream msg;
    msg << field << " has " << v.size() << " entries, expected " << k_count;
    spec_error(msg.str());
  }
  out.reserve(k_count);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::ostringstream name;
    name << field << "[" << i << "]";
    out.push_back(require_finite(v[i], name.str()));
  }
  return out;
}

// Shortest decimal that round-trips to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool has_method(const SweepSpec& spec, Method m) {
  return std::find(spec.methods.begin(), spec.methods.end(), m) != spec.methods.end();
}

bool all_equal(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

// N = 1 with common alpha and rho: the configuration the IID closed form
// covers (and the one the general partial-fraction path must reject).
bool iid_compatible(const AsymptoticConfig& base) {
  return base.num_eavesdroppers == 1 && all_equal(base.eve_rate) &&
         all_equal(base.snr_fraction);
}

// The IID asymptote additionally needs uniform reliability and unit
// fractions.
bool iid_asymptote_applies(const AsymptoticConfig& base) {
  return iid_compatible(base) && all_equal(base.backhaul_reliability) &&
         base.snr_fraction.front() == 1.0;
}

template <typename Fn>
auto with_grid_context(double inv_beta_db, const char* method, Fn&& fn) {
  auto context = [&](const std::string& what) {
    std::ostringstream msg;
    msg << "method '" << method << "' failed at inv_beta_db=" << inv_beta_db
        << ": " << what;
    return msg.str();
  };
  try {
    return fn();
  } catch (const GuardExceeded& e) {
    throw GuardExceeded(context(e.what()));
  } catch (const DegenerateProducts& e) {
    throw DegenerateProducts(context(e.what()), e.collisions());
  } catch (const DegenerateAsymptote& e) {
    throw DegenerateAsymptote(context(e.what()));
  } catch (const Error& e) {
    throw InvalidParameter(context(e.what()));
  }
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::highsnr: return "highsnr";
    case Method::asymptote: return "asymptote";
    case Method::iid: return "iid";
    case Method::mc_exact: return "mc-exact";
    case Method::mc_ratio: return "mc-ratio";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  for (Method m : kMethodOrder) {
    if (name == method_name(m)) return m;
  }
  spec_error("unknown method '" + name + "'");
}

SweepSpec parse_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidParameter(std::string("spec: ") + e.what());
  }
  if (!doc.is_object()) spec_error("top level must be an object");

  static const char* known_keys[] = {"num_eavesdroppers", "eve_avg_snr",
                                     "snr_fraction",      "backhaul_reliability",
                                     "inv_beta_db",       "methods",
                                     "mc"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find_if(std::begin(known_keys), std::end(known_keys),
                     [&](const char* k) { return key == k; }) ==
        std::end(known_keys)) {
      spec_error("unknown field '" + key + "'");
    }
  }
  for (const char* key : {"num_eavesdroppers", "eve_avg_snr",
                          "backhaul_reliability", "inv_beta_db", "methods"}) {
    if (!doc.contains(key)) spec_error(std::string("missing field '") + key + "'");
  }

  SweepSpec spec;
  if (!doc["num_eavesdroppers"].is_number_integer()) {
    spec_error("num_eavesdroppers must be an integer");
  }
  spec.base.num_eavesdroppers = doc["num_eavesdroppers"].get<int>();

  const json& snr = doc["eve_avg_snr"];
  if (!snr.is_object() || !snr.contains("units") || !snr.contains("values")) {
    spec_error("eve_avg_snr must be an object with 'units' and 'values'");
  }
  const std::string units = snr["units"].is_string() ? snr["units"].get<std::string>() : "";
  if (units != "db" && units != "linear") {
    spec_error("eve_avg_snr.units must be \"db\" or \"linear\"");
  }
  if (!snr["values"].is_array() || snr["values"].empty()) {
    spec_error("eve_avg_snr.values must be a nonempty array");
  }
  const std::size_t k_count = snr["values"].size();
  spec.base.eve_rate.reserve(k_count);
  for (std::size_t i = 0; i < k_count; ++i) {
    std::ostringstream name;
    name << "eve_avg_snr.values[" << i << "]";
    double v = require_finite(snr["values"][i], name.str());
    if (units == "db") v = db_to_linear(v);
    if (!(v > 0.0)) spec_error(name.str() + " must convert to a positive SNR");
    spec.base.eve_rate.push_back(1.0 / v);  // average SNR 1/alpha -> rate alpha
  }

  spec.base.snr_fraction =
      doc.contains("snr_fraction")
          ? number_list(doc["snr_fraction"], k_count, "snr_fraction")
          : std::vector<double>(k_count, 1.0);
  spec.base.backhaul_reliability =
      number_list(doc["backhaul_reliability"], k_count, "backhaul_reliability");

  if (!doc["inv_beta_db"].is_array()) spec_error("inv_beta_db must be an array");
  for (std::size_t i = 0; i < doc["inv_beta_db"].size(); ++i) {
    std::ostringstream name;
    name << "inv_beta_db[" << i << "]";
    spec.inv_beta_db.push_back(require_finite(doc["inv_beta_db"][i], name.str()));
  }

  if (!doc["methods"].is_array()) spec_error("methods must be an array");
  std::vector<Method> requested;
  for (const auto& m : doc["methods"]) {
    if (!m.is_string()) spec_error("methods entries must be strings");
    requested.push_back(method_from_name(m.get<std::string>()));
  }
  for (Method m : kMethodOrder) {
    if (std::count(requested.begin(), requested.end(), m) > 0) {
      spec.methods.push_back(m);
    }
  }

  if (doc.contains("mc")) {
    const json& mc = doc["mc"];
    if (!mc.is_object()) spec_error("mc must be an object");
    McSettings settings;
    for (const auto& [key, _] : mc.items()) {
      if (key != "replications" && key != "seed" && key != "batch_size") {
        spec_error("unknown field 'mc." + key + "'");
      }
    }
    if (mc.contains("replications")) {
      if (!mc["replications"].is_number_integer()) spec_error("mc.replications must be an integer");
      settings.replications = mc["replications"].get<std::int64_t>();
    }
    if (mc.contains("seed")) {
      if (!mc["seed"].is_number_unsigned() && !mc["seed"].is_number_integer()) {
        spec_error("mc.seed must be an unsigned integer");
      }
      settings.seed = mc["seed"].get<std::uint64_t>();
    }
    if (mc.contains("batch_size")) {
      if (!mc["batch_size"].is_number_integer()) spec_error("mc.batch_size must be an integer");
      settings.batch_size = mc["batch_size"].get<std::int64_t>();
    }
    spec.mc = settings;
  }

  validate_spec(spec);
  return spec;
}

SweepSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidParameter("spec: cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_spec(buf.str());
  } catch (const InvalidParameter& e) {
    throw InvalidParameter(path.string() + ": " + e.what());
  }
}

void validate_spec(const SweepSpec& spec) {
  const std::size_t k_count = spec.base.eve_rate.size();
  if (k_count == 0) spec_error("at least one source is required");
  if (spec.base.snr_fraction.size() != k_count ||
      spec.base.backhaul_reliability.size() != k_count) {
    spec_error("per-source field lengths differ");
  }
  if (spec.base.num_eavesdroppers < 1) {
    spec_error("num_eavesdroppers must be >= 1");
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    if (!(spec.base.eve_rate[k] > 0.0) || !std::isfinite(spec.base.eve_rate[k])) {
      spec_error("eve_avg_snr entries must be positive");
    }
    if (!(spec.base.snr_fraction[k] > 0.0)) spec_error("snr_fraction entries must be positive");
    const double d = spec.base.backhaul_reliability[k];
    if (!(d >= 0.0 && d <= 1.0)) {
      std::ostringstream msg;
      msg << "backhaul_reliability[" << k << "] = " << d << " outside [0,1]";
      spec_error(msg.str());
    }
  }
  if (spec.inv_beta_db.empty()) spec_error("inv_beta_db grid must be nonempty");
  for (std::size_t i = 1; i < spec.inv_beta_db.size(); ++i) {
    if (!(spec.inv_beta_db[i] > spec.inv_beta_db[i - 1])) {
      spec_error("inv_beta_db grid must be strictly increasing");
    }
  }
  if (spec.methods.empty()) spec_error("methods must be nonempty");
  if (has_method(spec, Method::iid) && !iid_compatible(spec.base)) {
    spec_error("method 'iid' requires a single eavesdropper and identical "
               "eve_avg_snr and snr_fraction across sources");
  }
  if (spec.mc) {
    if (spec.mc->replications < 1000) spec_error("mc.replications must be >= 1000");
    if (spec.mc->batch_size < 1) spec_error("mc.batch_size must be >= 1");
  }
}

bool spec_requires_distinct_ratios(const SweepSpec& spec) {
  if (has_method(spec, Method::exact) || has_method(spec, Method::highsnr) ||
      has_method(spec, Method::mc_exact) || has_method(spec, Method::mc_ratio)) {
    return true;
  }
  return has_method(spec, Method::asymptote) && !iid_asymptote_applies(spec.base);
}

McSettings effective_mc_settings(const SweepSpec& spec, const RunOptions& opts) {
  McSettings settings = spec.mc.value_or(McSettings{});
  if (opts.seed_override) settings.seed = *opts.seed_override;
  if (opts.replications_override) settings.replications = *opts.replications_override;
  return settings;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const RunOptions& opts) {
  validate_spec(spec);
  const McSettings mc = effective_mc_settings(spec, opts);
  JitterOptions jitter;
  jitter.enabled = opts.jitter;

  // The line is SNR-independent; resolve it once. IID configs (equal ratios)
  // are out of reach of the partial-fraction path, so fall back to the
  // dedicated IID asymptote when the setup allows it.
  std::optional<AsymptoteLine> line;
  if (has_method(spec, Method::asymptote)) {
    line = with_grid_context(spec.inv_beta_db.front(), "asymptote", [&] {
      AsymptoticConfig base = spec.base;
      base.common_inv_beta_db = spec.inv_beta_db.front();
      if (iid_asymptote_applies(base) && !opts.jitter) {
        return iid_asymptote(base.num_sources(),
                             base.backhaul_reliability.front(),
                             base.eve_rate.front());
      }
      return asymptote(base, opts.distinct_tol, jitter);
    });
  }

  std::vector<SweepRow> rows;
  rows.reserve(spec.inv_beta_db.size());
  for (double db : spec.inv_beta_db) {
    SweepRow row;
    row.inv_beta_db = db;
    std::optional<ValidatedConfig> vcfg;
    auto validated = [&]() -> const ValidatedConfig& {
      if (!vcfg) {
        vcfg = validate_config(spec.base.to_system_config(db), opts.distinct_tol,
                               jitter);
      }
      return *vcfg;
    };
    for (Method m : spec.methods) {
      with_grid_context(db, method_name(m), [&] {
        switch (m) {
          case Method::exact:
            row.exact = esr_exact(validated()).value;
            break;
          case Method::highsnr:
            row.highsnr = esr_highsnr(validated()).value;
            break;
          case Method::asymptote:
            // Clamp at the zero-rate floor; the raw line goes negative
            // below its abscissa intercept.
            row.asymptote = std::max(
                0.0, line->slope * (std::log(db_to_linear(db)) - line->offset));
            break;
          case Method::iid: {
            const double beta = std::pow(10.0, -db / 10.0);
            const double a =
                spec.base.eve_rate.front() * spec.base.snr_fraction.front() / beta;
            row.iid = esr_iid_highsnr(spec.base.num_sources(),
                                      spec.base.backhaul_reliability, a);
            break;
          }
          case Method::mc_exact: {
            const EsrEstimate e = mc_esr(validated(), mc, McMode::exact);
            row.mc_exact = e.value;
            row.mc_exact_se = e.std_error;
            break;
          }
          case Method::mc_ratio: {
            const EsrEstimate e = mc_esr(validated(), mc, McMode::ratio);
            row.mc_ratio = e.value;
            row.mc_ratio_se = e.std_error;
            break;
          }
        }
      });
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string emit_csv(const std::vector<SweepRow>& rows, const CsvMeta& meta) {
  std::string out;
  out += "# secrecy-esr v" + meta.version + " seed=" + std::to_string(meta.seed) +
         " db=pow10\n";
  std::string header = "inv_beta_db";
  for (Method m : kMethodOrder) {
    if (std::find(meta.methods.begin(), meta.methods.end(), m) == meta.methods.end()) {
      continue;
    }
    switch (m) {
      case Method::exact: header += ",exact"; break;
      case Method::highsnr: header += ",highsnr"; break;
      case Method::asymptote: header += ",asymptote"; break;
      case Method::iid: header += ",iid"; break;
      case Method::mc_exact: header += ",mc_exact,mc_exact_se"; break;
      case Method::mc_ratio: header += ",mc_ratio,mc_ratio_se"; break;
    }
  }
  out += header + "\n";
  auto append = [&](std::string& line, const std::optional<double>& v) {
    line += ",";
    line += format_double(v.value_or(std::numeric_limits<double>::quiet_NaN()));
  };
  for (const SweepRow& row : rows) {
    std::string line = format_double(row.inv_beta_db);
    for (Method m : kMethodOrder) {
      if (std::find(meta.methods.begin(), meta.methods.end(), m) == meta.methods.end()) {
        continue;
      }
      switch (m) {
        case Method::exact: append(line, row.exact); break;
        case Method::highsnr: append(line, row.highsnr); break;
        case Method::asymptote: append(line, row.asymptote); break;
        case Method::iid: append(line, row.iid); break;
        case Method::mc_exact:
          append(line, row.mc_exact);
          append(line, row.mc_exact_se);
          break;
        case Method::mc_ratio:
          append(line, row.mc_ratio);
          append(line, row.mc_ratio_se);
          break;
      }
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace esr
