#ifndef GMAP_CLI_HPP
#define GMAP_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "gmap/metric.hpp"
#include "gmap/sinyukov.hpp"

namespace gmap {

/// Common knobs shared by the report-producing commands.
struct RunOptions {
  int grid = 0;  // 0 means the per-dimension default
  Backend backend = Backend::Analytic;
  double tol = -1.0;  // negative means the backend default
  std::uint64_t seed = 12345;
  std::string out_path;  // empty means stdout only
};

/// Report plus the process exit code.
/// Exit codes: 0 success/pass, 1 computed but failed, 2 error.
struct RunResult {
  nlohmann::ordered_json doc;
  int exit_code = 2;
};

/// Residual verification of a metric pair: Levi-Civita and Sinyukov forms,
/// curvature transformation, Weyl invariance and the integrability
/// hierarchy, plus the mapping classification.
/// Exit 0 when the pair is a geodesic mapping (trivial or not), 1 otherwise.
RunResult run_verify(const std::string& g_path, const std::string& gbar_path,
                     const RunOptions& opts);

/// Seed for the Cauchy solver: either explicit state data or "from-pair",
/// which evaluates the mapping fields of (g, pair_path) at the base point.
struct SolveSeed {
  std::optional<std::string> from_pair;
  std::vector<double> a_upper;  // row-major upper triangle, n(n+1)/2 values
  std::vector<double> lambda;
  double mu = 0.0;
};

struct SolveOptions {
  RunOptions run;
  std::vector<double> base;  // empty means the central grid node
  double step = 5e-3;
  double loop_side = 0.2;
};

RunResult run_solve(const std::string& g_path, const SolveSeed& seed,
                    const SolveOptions& opts);

/// Einstein-space transfer suite. Exit 0 iff the suite passes; a source
/// that is not an Einstein space is an error (exit 2).
RunResult run_einstein(const std::string& g_path, const std::string& gbar_path,
                       const RunOptions& opts);

/// Single-metric curvature dump over the sampling grid.
RunResult run_curvature(const std::string& g_path, const RunOptions& opts);

struct GeodesicCompareOptions {
  RunOptions run;
  int count = 20;
  double t_end = 0.35;
  double step = 1e-3;
};

/// Direct test of the geodesic-mapping definition: random source geodesics
/// must be unparametrized target geodesics. Exit 0 iff all defects are
/// below tolerance.
RunResult run_geodesic_compare(const std::string& g_path, const std::string& gbar_path,
                               const GeodesicCompareOptions& opts);

/// Write the document to opts.out_path when set.
void emit_report(const RunResult& result, const RunOptions& opts);

} // namespace gmap

#endif
