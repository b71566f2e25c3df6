#include "oabounds/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Rao and Gilbert-Varshamov bounds on mixed-level orthogonal array sizes:\n"
               "exact sums, dynamic programming, large-deviations rates, importance sampling"};
  app.require_subcommand(1);

  oabounds::RunRequest req;

  auto add_spec = [&](CLI::App* cmd) {
    cmd->add_option("--spec", req.spec_path, "path to a spec json file")->required();
  };
  auto add_bound = [&](CLI::App* cmd) {
    cmd->add_option("--bound", req.bound, "rao | gv | gv-expectation")
        ->check(CLI::IsMember({"rao", "gv", "gv-expectation"}));
  };
  auto add_gv_shape = [&](CLI::App* cmd) {
    cmd->add_option("--gv-horizon", req.gv_horizon, "gv-expectation horizon: n-1 (default) or n")
        ->check(CLI::IsMember({"n-1", "n"}));
    cmd->add_option("--gv-prefactor", req.gv_prefactor, "gv-expectation prefactor: s (default) or 1")
        ->check(CLI::IsMember({"s", "1"}));
  };

  CLI::App* exact = app.add_subcommand("exact", "evaluate a bound exactly (arbitrary precision)");
  add_spec(exact);
  add_bound(exact);
  add_gv_shape(exact);
  exact->add_option("--method", req.method, "direct | dp | oracle")
      ->check(CLI::IsMember({"direct", "dp", "oracle"}));

  CLI::App* rate = app.add_subcommand("rate", "large-deviations rate and tilt for a bound family");
  add_spec(rate);
  add_bound(rate);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a walk-shaped bound");
  add_spec(simulate);
  add_bound(simulate);
  add_gv_shape(simulate);
  simulate->add_option("--samples", req.samples, "number of paths (default 10000)");
  simulate->add_option("--seed", req.seed, "rng seed (default 1)");
  simulate->add_flag("--plain", req.plain, "fair-coin sampling instead of the optimal tilt");

  CLI::App* sweep = app.add_subcommand("sweep", "rao/gv rates over a range of mu (csv)");
  add_spec(sweep);
  sweep->add_option("--mu-from", req.mu_from, "range start (default 0)");
  sweep->add_option("--mu-to", req.mu_to, "range end (default 1)");
  sweep->add_option("--steps", req.steps, "number of intervals (default 50)");

  CLI::App* levelcurves = app.add_subcommand("levelcurves", "limit and finite-n value surfaces (two csv grids)");
  add_spec(levelcurves);
  add_bound(levelcurves);
  levelcurves->add_option("--grid", req.grid, "limit surface resolution (default 60)");

  CLI::App* opcount = app.add_subcommand("opcount", "term count of the direct rao evaluation");
  add_spec(opcount);

  for (CLI::App* cmd : {exact, rate, simulate, sweep, levelcurves, opcount})
    cmd->add_option("--output", req.output, "json | csv (each command has one native format)")
        ->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  req.command = app.get_subcommands().front()->get_name();
  return oabounds::run_request(req, std::cout, std::cerr);
}
