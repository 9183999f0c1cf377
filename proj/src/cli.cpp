#include "gmap/cli.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <random>

#include "gmap/curvature.hpp"
#include "gmap/geodesic.hpp"
#include "gmap/mapping.hpp"
#include "gmap/metric_file.hpp"
#include "gmap/version.hpp"

namespace gmap {

namespace {

using nlohmann::ordered_json;

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json fin(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

ordered_json json_point(const VecN& p) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < p.n; ++i) a.push_back(fin(p[i]));
  return a;
}

ordered_json json_mat(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.dim(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(fin(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

ordered_json json_residual(const ResidualReport& r) {
  ordered_json j;
  j["equation"] = r.equation;
  j["backend"] = backend_name(r.backend);
  j["points"] = r.points;
  j["max_abs"] = fin(r.max_abs);
  j["rms"] = fin(r.rms);
  j["tolerance"] = fin(r.tolerance);
  j["pass"] = r.pass;
  j["argmax_point"] = json_point(r.argmax_point);
  return j;
}

ordered_json report_skeleton(const std::string& command, const RunOptions& opts) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
  doc["command"] = command;
  doc["timestamp"] = timestamp_utc();
  doc["settings"] = {{"backend", backend_name(opts.backend)},
                     {"grid_per_axis", opts.grid},
                     {"tolerance", opts.tol},
                     {"seed", opts.seed}};
  return doc;
}

int resolve_grid(const RunOptions& opts, int dim) {
  return opts.grid > 0 ? opts.grid : default_grid_per_axis(dim);
}

double resolve_tol(const RunOptions& opts) {
  return opts.tol > 0.0 ? opts.tol : default_tolerance(opts.backend);
}

void patch_settings(ordered_json& doc, int grid, double tol) {
  doc["settings"]["grid_per_axis"] = grid;
  doc["settings"]["tolerance"] = tol;
}

RunResult error_result(ordered_json doc, const std::string& message) {
  doc["status"] = "error";
  doc["error"] = message;
  doc["exit_code"] = 2;
  return RunResult{std::move(doc), 2};
}

} // namespace

void emit_report(const RunResult& result, const RunOptions& opts) {
  if (opts.out_path.empty()) return;
  std::ofstream out(opts.out_path);
  if (!out) throw InputError("cannot write report to '" + opts.out_path + "'");
  out << result.doc.dump(2) << "\n";
}

RunResult run_verify(const std::string& g_path, const std::string& gbar_path,
                     const RunOptions& opts) {
  ordered_json doc = report_skeleton("verify", opts);
  doc["inputs"] = {{"g", g_path}, {"gbar", gbar_path}};
  try {
    MetricSpecFile g = load_metric_spec(g_path);
    MetricSpecFile gbar = load_metric_spec(gbar_path);
    if (!g.field.chart().compatible_with(gbar.field.chart()))
      throw InputError("incompatible charts (dimension, coordinates or domain)");

    const int grid_n = resolve_grid(opts, g.field.dim());
    const double tol = resolve_tol(opts);
    patch_settings(doc, grid_n, tol);
    auto grid = g.field.chart().grid(grid_n);

    LeviCivitaReport lc = levi_civita_residual(g.field, gbar.field, grid, opts.backend, tol);
    ResidualReport sin = sinyukov_residual(g.field, gbar.field, grid, opts.backend, tol);
    CurvatureTransformReport ct =
        curvature_transform_residual(g.field, gbar.field, grid, opts.backend, tol);
    ResidualReport r7 = integrability_residual(g.field, gbar.field, grid, opts.backend, tol);
    ResidualReport r8 = second_sinyukov_residual(g.field, gbar.field, grid, opts.backend, tol);

    ordered_json residuals = ordered_json::array();
    residuals.push_back(json_residual(lc.metric_form));
    residuals.push_back(json_residual(lc.connection_form));
    residuals.push_back(json_residual(sin));
    residuals.push_back(json_residual(ct.riemann));
    residuals.push_back(json_residual(ct.ricci));
    residuals.push_back(json_residual(ct.weyl));
    residuals.push_back(json_residual(r7));
    residuals.push_back(json_residual(r8));

    ordered_json skipped = ordered_json::array();
    if (opts.backend == Backend::Analytic) {
      ResidualReport r9 = third_sinyukov_residual(g.field, gbar.field, grid,
                                                   Backend::Analytic,
                                                   opts.tol > 0 ? opts.tol : 1e-7);
      residuals.push_back(json_residual(r9));
    } else {
      skipped.push_back({{"equation", "third_sinyukov"},
                         {"reason", "needs third derivatives; finite-difference "
                                    "backend lacks the precision"}});
    }

    MappingClass cls = classify_mapping(lc);
    ordered_json results;
    results["classification"] = mapping_class_name(cls);
    results["max_abs_psi"] = fin(lc.max_abs_psi);
    results["max_lambda_route_gap"] = fin(lc.max_lambda_route_gap);
    results["equivalence_agrees"] = lc.metric_form.pass == sin.pass;
    results["residuals"] = residuals;
    results["skipped"] = skipped;
    doc["results"] = results;
    doc["status"] = "ok";
    int code = cls == MappingClass::NotGeodesic ? 1 : 0;
    doc["exit_code"] = code;
    return RunResult{std::move(doc), code};
  } catch (const std::exception& err) {
    return error_result(std::move(doc), err.what());
  }
}

RunResult run_solve(const std::string& g_path, const SolveSeed& seed,
                    const SolveOptions& opts) {
  ordered_json doc = report_skeleton("solve", opts.run);
  doc["inputs"] = {{"g", g_path}};
  if (seed.from_pair) doc["inputs"]["seed_pair"] = *seed.from_pair;
  try {
    if (opts.run.backend != Backend::Analytic)
      throw InputError("the solver integrates third-derivative data; "
                       "only the analytic backend is supported");
    MetricSpecFile g = load_metric_spec(g_path);
    const int n = g.field.dim();
    const int grid_n = resolve_grid(opts.run, n);
    patch_settings(doc, grid_n, resolve_tol(opts.run));

    auto grid = g.field.chart().grid(grid_n);
    VecN base(n);
    if (opts.base.empty()) {
      base = grid[grid.size() / 2];  // central node for odd grids
    } else {
      if (static_cast<int>(opts.base.size()) != n)
        throw InputError("base point dimension mismatch");
      base = VecN::from(opts.base);
    }

    SinyukovState s0(n);
    if (seed.from_pair) {
      MetricSpecFile pair = load_metric_spec(*seed.from_pair);
      if (!g.field.chart().compatible_with(pair.field.chart()))
        throw InputError("seed pair has an incompatible chart");
      MappingEval ev = mapping_eval(g.field, pair.field, base.span());
      s0.a = ev.a;
      s0.lambda = ev.lambda_alg;
      s0.mu = ev.mu;
    } else {
      if (static_cast<int>(seed.a_upper.size()) != n * (n + 1) / 2)
        throw InputError("seed a needs n(n+1)/2 upper-triangle values");
      if (static_cast<int>(seed.lambda.size()) != n)
        throw InputError("seed lambda needs n values");
      std::size_t idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          s0.a(i, j) = seed.a_upper[idx];
          s0.a(j, i) = seed.a_upper[idx];
          ++idx;
        }
      for (int i = 0; i < n; ++i) s0.lambda[i] = seed.lambda[i];
      s0.mu = seed.mu;
    }

    GridSolveResult result = solve_on_grid(g.field, s0, base, grid_n, opts.step);

    PathSpec loop = square_loop(base, opts.loop_side, opts.step);
    bool loop_in_domain = true;
    for (const VecN& w : loop.waypoints)
      loop_in_domain = loop_in_domain && g.field.chart().contains(w.span());
    double defect = std::numeric_limits<double>::quiet_NaN();
    if (loop_in_domain) defect = holonomy_defect(g.field, loop, s0);

    ordered_json nodes = ordered_json::array();
    for (std::size_t i = 0; i < result.grid.size(); ++i) {
      ordered_json node;
      node["x"] = json_point(result.grid[i]);
      node["a"] = json_mat(result.states[i].a);
      node["lambda"] = json_point(result.states[i].lambda);
      node["mu"] = fin(result.states[i].mu);
      node["gbar"] = json_mat(result.reconstructions[i].gbar);
      node["Psi"] = fin(result.reconstructions[i].Psi);
      nodes.push_back(node);
    }

    ordered_json results;
    results["base"] = json_point(base);
    results["step"] = opts.step;
    results["trivial"] = result.trivial;
    results["max_lambda"] = fin(result.max_lambda);
    results["max_a_anisotropy"] = fin(result.max_a_anisotropy);
    results["classification"] = mapping_class_name(result.classification);
    results["holonomy_probe"] = {{"loop_side", opts.loop_side},
                                 {"in_domain", loop_in_domain},
                                 {"defect", fin(defect)}};
    results["verification"] = ordered_json::array(
        {json_residual(result.verification.metric_form),
         json_residual(result.verification.connection_form)});
    results["nodes"] = nodes;
    doc["results"] = results;
    doc["status"] = "ok";
    int code =
        (result.trivial || result.verification.metric_form.pass) ? 0 : 1;
    doc["exit_code"] = code;
    return RunResult{std::move(doc), code};
  } catch (const std::exception& err) {
    return error_result(std::move(doc), err.what());
  }
}

RunResult run_einstein(const std::string& g_path, const std::string& gbar_path,
                       const RunOptions& opts) {
  ordered_json doc = report_skeleton("einstein", opts);
  doc["inputs"] = {{"g", g_path}, {"gbar", gbar_path}};
  try {
    MetricSpecFile g = load_metric_spec(g_path);
    MetricSpecFile gbar = load_metric_spec(gbar_path);
    if (!g.field.chart().compatible_with(gbar.field.chart()))
      throw InputError("incompatible charts (dimension, coordinates or domain)");
    const int grid_n = resolve_grid(opts, g.field.dim());
    const double tol = resolve_tol(opts);
    patch_settings(doc, grid_n, tol);
    auto grid = g.field.chart().grid(grid_n);

    EinsteinReport source = einstein_check(g.field, grid, opts.backend, tol);
    ordered_json source_json = {{"is_einstein", source.is_einstein},
                                {"K", fin(source.K)},
                                {"K_spread", fin(source.K_spread)},
                                {"max_residual", fin(source.max_residual)}};
    if (!source.is_einstein) {
      doc["results"] = {{"source_check", source_json}};
      return error_result(std::move(doc), "source not Einstein");
    }

    EinsteinSuiteReport suite = einstein_suite(g.field, gbar.field, grid,
                                               opts.backend, tol);
    EinsteinReport target = einstein_check(gbar.field, grid, opts.backend, tol);

    ordered_json results;
    results["pass"] = suite.pass;
    results["K"] = fin(suite.K);
    results["K_spread"] = fin(suite.K_spread);
    results["Kbar"] = fin(suite.Kbar);
    results["Kbar_spread"] = fin(suite.Kbar_spread);
    results["residuals"] = ordered_json::array({json_residual(suite.lambda_riemann),
                                                json_residual(suite.lambda_cov),
                                                json_residual(suite.psi_transfer),
                                                json_residual(suite.target_ricci)});
    results["source_check"] = source_json;
    results["target_check"] = {{"is_einstein", target.is_einstein},
                               {"K", fin(target.K)},
                               {"K_spread", fin(target.K_spread)},
                               {"max_residual", fin(target.max_residual)}};
    doc["results"] = results;
    doc["status"] = "ok";
    int code = suite.pass ? 0 : 1;
    doc["exit_code"] = code;
    return RunResult{std::move(doc), code};
  } catch (const std::exception& err) {
    return error_result(std::move(doc), err.what());
  }
}

RunResult run_curvature(const std::string& g_path, const RunOptions& opts) {
  ordered_json doc = report_skeleton("curvature", opts);
  doc["inputs"] = {{"g", g_path}};
  try {
    MetricSpecFile g = load_metric_spec(g_path);
    const int n = g.field.dim();
    const int grid_n = resolve_grid(opts, n);
    const double tol = resolve_tol(opts);
    patch_settings(doc, grid_n, tol);
    auto grid = g.field.chart().grid(grid_n);

    ordered_json points = ordered_json::array();
    double max_bianchi = 0.0;
    for (const VecN& p : grid) {
      MetricJet jet = g.field.jet(p.span(), 2, opts.backend);
      CurvatureEval c = curvature(jet);
      double bianchi = 0.0;
      for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              bianchi = std::max(bianchi,
                                 std::abs(c.riemann(h, i, j, k) + c.riemann(h, j, k, i) +
                                          c.riemann(h, k, i, j)));
      max_bianchi = std::max(max_bianchi, bianchi);

      ordered_json gamma = ordered_json::array();
      for (int h = 0; h < n; ++h) {
        ordered_json block = ordered_json::array();
        for (int i = 0; i < n; ++i) {
          ordered_json row = ordered_json::array();
          for (int j = 0; j < n; ++j) row.push_back(fin(c.gamma(h, i, j)));
          block.push_back(row);
        }
        gamma.push_back(block);
      }

      ordered_json entry;
      entry["x"] = json_point(p);
      entry["det_g"] = fin(jet.detg);
      entry["gamma"] = gamma;
      entry["ricci"] = json_mat(c.ricci);
      entry["scalar"] = fin(c.scalar);
      entry["riemann_max"] = fin(c.riemann.norm_inf());
      entry["weyl_max"] = fin(c.weyl.norm_inf());
      points.push_back(entry);
    }

    EinsteinReport einstein = einstein_check(g.field, grid, opts.backend, tol);
    ordered_json results;
    results["points"] = points;
    results["max_bianchi_residual"] = fin(max_bianchi);
    results["einstein"] = {{"is_einstein", einstein.is_einstein},
                           {"K", fin(einstein.K)},
                           {"K_spread", fin(einstein.K_spread)},
                           {"max_residual", fin(einstein.max_residual)}};
    doc["results"] = results;
    doc["status"] = "ok";
    doc["exit_code"] = 0;
    return RunResult{std::move(doc), 0};
  } catch (const std::exception& err) {
    return error_result(std::move(doc), err.what());
  }
}

RunResult run_geodesic_compare(const std::string& g_path, const std::string& gbar_path,
                               const GeodesicCompareOptions& opts) {
  ordered_json doc = report_skeleton("geodesic-compare", opts.run);
  doc["inputs"] = {{"g", g_path}, {"gbar", gbar_path}};
  try {
    MetricSpecFile g = load_metric_spec(g_path);
    MetricSpecFile gbar = load_metric_spec(gbar_path);
    if (!g.field.chart().compatible_with(gbar.field.chart()))
      throw InputError("incompatible charts (dimension, coordinates or domain)");
    const int n = g.field.dim();
    const double tol = opts.run.tol > 0.0 ? opts.run.tol : 1e-6;
    patch_settings(doc, 0, tol);

    std::mt19937_64 rng(opts.run.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    ordered_json curves = ordered_json::array();
    double max_defect = 0.0, min_defect = std::numeric_limits<double>::infinity();
    double max_drift = 0.0;
    for (int trial = 0; trial < opts.count; ++trial) {
      VecN x0 = g.field.chart().random_point(rng);
      VecN v0(n);
      double norm = 0.0;
      while (norm < 1e-6) {
        for (int i = 0; i < n; ++i) v0[i] = normal(rng);
        norm = v0.norm2();
      }
      for (int i = 0; i < n; ++i) v0[i] /= norm;

      GeodesicCurve curve =
          integrate_geodesic(g.field, x0, v0, opts.t_end, opts.step, opts.run.backend);
      curve.metric_name = g.name;
      double defect = correspondence_defect(curve, g.field, gbar.field, opts.run.backend);
      double drift = energy_drift(curve, g.field, opts.run.backend);
      max_defect = std::max(max_defect, defect);
      min_defect = std::min(min_defect, defect);
      max_drift = std::max(max_drift, drift);

      ordered_json entry;
      entry["x0"] = json_point(x0);
      entry["v0"] = json_point(v0);
      entry["samples"] = static_cast<int>(curve.positions.size());
      entry["truncated"] = curve.truncated;
      entry["defect"] = fin(defect);
      entry["energy_drift"] = fin(drift);
      curves.push_back(entry);
    }

    ordered_json results;
    results["count"] = opts.count;
    results["t_end"] = opts.t_end;
    results["step"] = opts.step;
    results["max_defect"] = fin(max_defect);
    results["min_defect"] = fin(min_defect);
    results["max_energy_drift"] = fin(max_drift);
    results["pass"] = max_defect < tol;
    results["curves"] = curves;
    doc["results"] = results;
    doc["status"] = "ok";
    int code = max_defect < tol ? 0 : 1;
    doc["exit_code"] = code;
    return RunResult{std::move(doc), code};
  } catch (const std::exception& err) {
    return error_result(std::move(doc), err.what());
  }
}

} // namespace gmap
