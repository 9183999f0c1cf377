// Command line front end: verify, solve, einstein, curvature and
// geodesic-compare over metric specification files, JSON reports out.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gmap/cli.hpp"
#include "gmap/version.hpp"

namespace {

void add_common(CLI::App* cmd, gmap::RunOptions& opts, std::string& backend) {
  cmd->add_option("--grid", opts.grid, "grid points per axis (default 5 for n<=3, 3 beyond)");
  cmd->add_option("--backend", backend, "derivative backend: analytic or fd")
      ->check(CLI::IsMember({"analytic", "fd"}));
  cmd->add_option("--tol", opts.tol, "residual tolerance (default 1e-8 analytic, 1e-4 fd)");
  cmd->add_option("--out", opts.out_path, "write the JSON report to this file");
  cmd->add_option("--seed", opts.seed, "seed for randomized runs");
}

int finish(const gmap::RunResult& result, const gmap::RunOptions& opts) {
  gmap::emit_report(result, opts);
  std::cout << result.doc.dump(2) << "\n";
  return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesic mapping analysis between metrics in local coordinates"};
  app.set_version_flag("--version", std::string(gmap::kToolVersion));
  app.require_subcommand(1);

  std::string g_path, gbar_path, backend = "analytic";

  gmap::RunOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "test whether a metric pair is a geodesic mapping");
  verify->add_option("g", g_path, "source metric file")->required();
  verify->add_option("gbar", gbar_path, "target metric file")->required();
  add_common(verify, verify_opts, backend);

  gmap::SolveOptions solve_opts;
  gmap::SolveSeed seed;
  std::string from_pair;
  auto* solve = app.add_subcommand("solve", "integrate the closed system and reconstruct the target metric");
  solve->add_option("g", g_path, "source metric file")->required();
  solve->add_option("--from-pair", from_pair, "seed from the mapping fields of (g, PAIR) at the base point");
  solve->add_option("--seed-a", seed.a_upper, "upper-triangle a values (row major)");
  solve->add_option("--seed-lambda", seed.lambda, "lambda values");
  solve->add_option("--seed-mu", seed.mu, "mu value");
  solve->add_option("--base", solve_opts.base, "base point coordinates (default: central grid node)");
  solve->add_option("--step", solve_opts.step, "integrator step");
  solve->add_option("--loop-side", solve_opts.loop_side, "side of the holonomy probe loop");
  add_common(solve, solve_opts.run, backend);

  gmap::RunOptions einstein_opts;
  auto* einstein = app.add_subcommand("einstein", "einstein-space transfer suite for a metric pair");
  einstein->add_option("g", g_path, "source metric file")->required();
  einstein->add_option("gbar", gbar_path, "target metric file")->required();
  add_common(einstein, einstein_opts, backend);

  gmap::RunOptions curvature_opts;
  auto* curvature = app.add_subcommand("curvature", "dump connection and curvature over the grid");
  curvature->add_option("g", g_path, "metric file")->required();
  add_common(curvature, curvature_opts, backend);

  gmap::GeodesicCompareOptions geo_opts;
  auto* geo = app.add_subcommand("geodesic-compare", "integrate random geodesics and test the unparametrized correspondence");
  geo->add_option("g", g_path, "source metric file")->required();
  geo->add_option("gbar", gbar_path, "target metric file")->required();
  geo->add_option("--count", geo_opts.count, "number of random geodesics");
  geo->add_option("--t-end", geo_opts.t_end, "integration horizon");
  geo->add_option("--step", geo_opts.step, "integrator step");
  add_common(geo, geo_opts.run, backend);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      verify_opts.backend = gmap::backend_from_name(backend);
      return finish(gmap::run_verify(g_path, gbar_path, verify_opts), verify_opts);
    }
    if (solve->parsed()) {
      solve_opts.run.backend = gmap::backend_from_name(backend);
      if (!from_pair.empty()) seed.from_pair = from_pair;
      return finish(gmap::run_solve(g_path, seed, solve_opts), solve_opts.run);
    }
    if (einstein->parsed()) {
      einstein_opts.backend = gmap::backend_from_name(backend);
      return finish(gmap::run_einstein(g_path, gbar_path, einstein_opts), einstein_opts);
    }
    if (curvature->parsed()) {
      curvature_opts.backend = gmap::backend_from_name(backend);
      return finish(gmap::run_curvature(g_path, curvature_opts), curvature_opts);
    }
    if (geo->parsed()) {
      geo_opts.run.backend = gmap::backend_from_name(backend);
      return finish(gmap::run_geodesic_compare(g_path, gbar_path, geo_opts), geo_opts.run);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
