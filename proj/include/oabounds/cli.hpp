#pragma once

#include "oabounds/exact.hpp"
#include "oabounds/io.hpp"
#include "oabounds/simulate.hpp"

#include <iostream>
#include <string>

namespace oabounds {

// Everything one invocation needs, already parsed. The binary in tools/
// maps flags onto this; tests drive it directly.
struct RunRequest {
  std::string command;            // exact | rate | simulate | sweep | levelcurves | opcount
  std::string spec_path;
  std::string bound = "rao";      // rao | gv | gv-expectation
  std::string method = "dp";      // exact: direct | dp | oracle
  long long samples = 10000;
  std::uint64_t seed = 1;
  bool plain = false;             // simulate without the tilt
  std::string gv_horizon = "n-1"; // gv-expectation: n-1 | n
  std::string gv_prefactor = "s"; // gv-expectation: s | 1
  double mu_from = 0.0;
  double mu_to = 1.0;
  int steps = 50;
  int grid = 60;                  // levelcurves resolution for the limit surface
  std::string output;             // json | csv; empty picks the command's native format
};

namespace detail {

inline BoundKind parse_kind(const std::string& bound) {
  if (bound == "rao") return BoundKind::RaoSum;
  if (bound == "gv") return BoundKind::GvSum;
  if (bound == "gv-expectation") return BoundKind::GvExpectation;
  throw std::invalid_argument("unknown bound: " + bound);
}

inline BoundTarget parse_target(const ArraySpec& spec, const RunRequest& req) {
  switch (parse_kind(req.bound)) {
    case BoundKind::RaoSum: return BoundTarget::rao_sum(spec);
    case BoundKind::GvSum: return BoundTarget::gv_sum(spec);
    case BoundKind::GvExpectation: {
      int horizon;
      if (req.gv_horizon == "n") horizon = spec.factors();
      else if (req.gv_horizon == "n-1") horizon = spec.factors() - 1;
      else throw std::invalid_argument("gv horizon must be 'n' or 'n-1'");
      long long prefactor;
      if (req.gv_prefactor == "1") prefactor = 1;
      else if (req.gv_prefactor == "s") prefactor = spec.last_alphabet();
      else throw std::invalid_argument("gv prefactor must be 's' or '1'");
      return BoundTarget::gv_expectation(spec, horizon, prefactor);
    }
  }
  throw std::invalid_argument("unknown bound: " + req.bound);
}

// rate / value_function / levelcurves work on the two budget families; every
// gv flavor shares the budget mu.
inline BoundKind rate_kind(const std::string& bound) {
  const BoundKind k = parse_kind(bound);
  return k == BoundKind::RaoSum ? BoundKind::RaoSum : BoundKind::GvExpectation;
}

inline void check_output_format(const RunRequest& req) {
  if (req.output.empty()) return;
  const bool csv_command = req.command == "sweep" || req.command == "levelcurves";
  if (csv_command && req.output != "csv")
    throw std::invalid_argument(req.command + " emits csv only");
  if (!csv_command && req.output != "json")
    throw std::invalid_argument(req.command + " emits json only");
}

inline int run_exact(const ArraySpec& spec, const RunRequest& req, std::ostream& out) {
  const BoundTarget target = parse_target(spec, req);
  BigCount value;
  if (req.method == "dp") value = dp_bound(spec, target);
  else if (req.method == "direct") value = direct_bound(spec, target);
  else if (req.method == "oracle") value = brute_force_oracle(spec, target);
  else throw std::invalid_argument("unknown method: " + req.method);
  out << exact_result_json(value).dump(2) << '\n';
  return 0;
}

inline int run_rate(const ArraySpec& spec, const RunRequest& req, std::ostream& out) {
  const BoundKind kind = rate_kind(req.bound);
  const TiltProfile tp = optimal_tilt(spec, kind);
  const LdEstimate est = ld_estimate(spec, kind);
  json j{{"rate", est.rate},
         {"log_value", est.log_value},
         {"mantissa", est.mantissa},
         {"exponent10", est.exponent10},
         {"tilt", to_json(tp)}};
  out << j.dump(2) << '\n';
  return 0;
}

inline int run_simulate(const ArraySpec& spec, const RunRequest& req, std::ostream& out) {
  const BoundTarget target = parse_target(spec, req);
  IsConfig cfg;
  cfg.samples = req.samples;
  cfg.seed = req.seed;
  cfg.use_tilt = !req.plain;
  const IsResult res = is_estimate(spec, target, cfg);
  json j = to_json(res);
  j["kind"] = to_string(target.kind);
  out << j.dump(2) << '\n';
  return 0;
}

inline int run_sweep(const ArraySpec& spec, const RunRequest& req, std::ostream& out) {
  if (req.steps < 1) throw std::invalid_argument("sweep needs at least one step");
  if (req.mu_from < 0 || req.mu_to > 1 || req.mu_from > req.mu_to)
    throw std::invalid_argument("sweep range must satisfy 0 <= mu_from <= mu_to <= 1");
  std::vector<std::array<double, 3>> rows;
  rows.reserve(req.steps + 1);
  for (int i = 0; i <= req.steps; ++i) {
    const double mu = req.mu_from + (req.mu_to - req.mu_from) * i / req.steps;
    rows.push_back({mu, rate_for_budget(spec, mu / 2.0, true), rate_for_budget(spec, mu, false)});
  }
  write_sweep_csv(out, rows);
  return 0;
}

// two grids, limit first, separated by one blank line; each carries its own
// header so either half parses as a standalone csv
inline int run_levelcurves(const ArraySpec& spec, const RunRequest& req, std::ostream& out) {
  const BoundKind kind = rate_kind(req.bound);
  if (req.grid < 1) throw std::invalid_argument("grid resolution must be >= 1");
  write_limit_csv(out, spec, kind, req.grid);
  out << '\n';
  write_prelimit_csv(out, spec, kind);
  return 0;
}

}  // namespace detail

// Execute one request; human-facing results on out, one json error object
// on err and exit code 1 on any failure.
inline int run_request(const RunRequest& req, std::ostream& out, std::ostream& err) {
  try {
    detail::check_output_format(req);
    const ArraySpec spec = load_spec(req.spec_path);
    if (req.command == "opcount") {
      out << exact_result_json(direct_op_count(spec)).dump(2) << '\n';
      return 0;
    }
    if (req.command == "exact") return detail::run_exact(spec, req, out);
    if (req.command == "rate") return detail::run_rate(spec, req, out);
    if (req.command == "simulate") return detail::run_simulate(spec, req, out);
    if (req.command == "sweep") return detail::run_sweep(spec, req, out);
    if (req.command == "levelcurves") return detail::run_levelcurves(spec, req, out);
    throw std::invalid_argument("unknown command: " + req.command);
  } catch (const std::exception& e) {
    err << error_json(e.what()).dump() << '\n';
    return 1;
  }
}

}  // namespace oabounds
