#pragma once

#include "oabounds/asymptotics.hpp"
#include "oabounds/core.hpp"
#include "oabounds/simulate.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace oabounds {

using json = nlohmann::json;

inline ArraySpec spec_from_json(const json& j) {
  if (!j.contains("alphabet_sizes") || !j.contains("block_lengths") || !j.contains("strength"))
    throw std::invalid_argument("spec json needs alphabet_sizes, block_lengths, strength");
  return ArraySpec(j.at("alphabet_sizes").get<std::vector<int>>(),
                   j.at("block_lengths").get<std::vector<int>>(),
                   j.at("strength").get<int>());
}

inline ArraySpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("spec file is not valid json: " + std::string(e.what()));
  }
  return spec_from_json(j);
}

inline json to_json(const TiltProfile& tp) {
  return json{{"lambda_star", tp.lambda_star},
              {"thetas", tp.thetas},
              {"constrained", tp.constrained},
              {"budget", tp.budget},
              {"rate", tp.rate}};
}

inline json to_json(const IsResult& r) {
  json j{{"log_estimate", r.log_estimate},
         {"mantissa", r.mantissa},
         {"exponent10", r.exponent10},
         {"std_error", r.std_error},
         {"ci_low", r.ci_low},
         {"ci_high", r.ci_high},
         {"log_second_moment", r.log_second_moment},
         {"hit_fraction", r.hit_fraction},
         {"samples", r.samples},
         {"seed", r.seed},
         {"method", r.method}};
  if (r.tilt) j["tilt"] = to_json(*r.tilt);
  return j;
}

inline json exact_result_json(const BigCount& value) {
  const SciParts sci = to_sci(value);
  return json{{"value", value.str()},
              {"mantissa", sci.mantissa},
              {"exponent10", sci.exponent10}};
}

inline json error_json(const std::string& message) { return json{{"error", message}}; }

// fixed 12 significant digits keeps the CSVs diffable across platforms
inline std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline void write_sweep_csv(std::ostream& out, const std::vector<std::array<double, 3>>& rows) {
  out << "mu,rao_rate,gv_rate\n";
  for (const auto& r : rows)
    out << csv_num(r[0]) << ',' << csv_num(r[1]) << ',' << csv_num(r[2]) << '\n';
}

// limiting surface sampled on a uniform grid
inline void write_limit_csv(std::ostream& out, const ArraySpec& spec, BoundKind kind, int resolution) {
  const ScaledParams p = scaled(spec);
  const double budget = kind == BoundKind::RaoSum ? p.mu / 2.0 : p.mu;
  out << "x,tau,value\n";
  for (int ix = 0; ix <= resolution; ++ix) {
    const double x = budget * ix / resolution;
    for (int it = 0; it <= resolution; ++it) {
      const double tau = 1.0 * it / resolution;
      out << csv_num(x) << ',' << csv_num(tau) << ',' << csv_num(value_function(spec, x, tau, kind)) << '\n';
    }
  }
}

// finite-n surface in the same scaled coordinates: x/n, k/n
inline void write_prelimit_csv(std::ostream& out, const ArraySpec& spec, BoundKind kind) {
  const PrelimitGrid g = prelimit_grid(spec, kind);
  const double n = spec.factors();
  out << "x,tau,value\n";
  for (int k = 0; k <= g.horizon; ++k)
    for (int x = 0; x <= g.threshold; ++x)
      out << csv_num(x / n) << ',' << csv_num(k / n) << ',' << csv_num(g.values[k][x]) << '\n';
}

}  // namespace oabounds
