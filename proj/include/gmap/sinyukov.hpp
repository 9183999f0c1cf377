#ifndef GMAP_SINYUKOV_HPP
#define GMAP_SINYUKOV_HPP

#include <vector>

#include "gmap/mapping.hpp"

namespace gmap {

/// Unknowns of the closed first-order system in (a_ij, lambda_i, mu);
/// packed dimension n(n+1)/2 + n + 1.
struct SinyukovState {
  int n = 0;
  Mat a;
  VecN lambda;
  double mu = 0.0;

  SinyukovState() = default;
  explicit SinyukovState(int dim) : n(dim), a(dim), lambda(dim) {}

  int packed_size() const { return n * (n + 1) / 2 + n + 1; }
  std::vector<double> pack() const;
  static SinyukovState unpack(int n, std::span<const double> data);
};

/// Polyline with a fixed integrator step (fourth-order Runge-Kutta).
struct PathSpec {
  std::vector<VecN> waypoints;
  double step = 1e-2;
};

PathSpec axis_staircase_path(const VecN& from, const VecN& to, double step);

PathSpec square_loop(const VecN& base, double side, double step,
                     int axis_a = 0, int axis_b = 1);

/// Integrability conditions of the a-equation:
/// a_{ia} R^a_{jkl} + a_{ja} R^a_{ikl}
///   = g_ik lambda_{j,l} + g_jk lambda_{i,l} - g_il lambda_{j,k} - g_jl lambda_{i,k}
ResidualReport integrability_residual(const MetricSource& g, const MetricSource& gbar,
                                      const std::vector<VecN>& grid,
                                      Backend backend = Backend::Analytic,
                                      double tol = -1.0);

/// Contracted form fixing the lambda derivatives:
/// n lambda_{i,l} = mu g_il - a_{ia} R^a_l - a_{ab} R^a{}_{il}{}^b
ResidualReport second_sinyukov_residual(const MetricSource& g, const MetricSource& gbar,
                                        const std::vector<VecN>& grid,
                                        Backend backend = Backend::Analytic,
                                        double tol = -1.0);

/// Closure equation for the mu gradient:
/// (n-1) mu_{,k} = -(n+2) lambda_a R^a_k - lambda_k R - a_{ka} R^{,a} / 2
///                 - a^{ab} R_{bk,a} + a^{ab} R_{ab,k}
/// Needs third metric derivatives; requesting the finite-difference backend
/// is an error (its third-order stencils lack the precision).
ResidualReport third_sinyukov_residual(const MetricSource& g, const MetricSource& gbar,
                                       const std::vector<VecN>& grid,
                                       Backend backend = Backend::Analytic,
                                       double tol = 1e-7);

/// Right-hand side of the closed system: d(state)/dx^direction at p.
/// Linear in the state for fixed point and direction.
SinyukovState cauchy_rhs(const MetricSource& g, std::span<const double> p,
                         int direction, const SinyukovState& s);

/// Fixed-step RK4 along the polyline; the per-axis right-hand sides are
/// contracted with each segment's tangent. Throws BlowUpError with the arc
/// position when the state stops being finite.
SinyukovState integrate_along_path(const MetricSource& g, const PathSpec& path,
                                   const SinyukovState& s0);

/// Sup-norm change of the packed state after integrating around a closed
/// loop; a numerical probe of the integrability conditions.
double holonomy_defect(const MetricSource& g, const PathSpec& loop,
                       const SinyukovState& s0);

/// Metric defined pointwise by integrating the Sinyukov system from a base
/// point along axis-ordered staircase paths and applying the reconstruction.
/// Jets are taken by finite differences of the reconstructed values; the
/// backend argument is ignored.
class ReconstructedMetric : public MetricSource {
public:
  ReconstructedMetric(const MetricSource& g, VecN base, SinyukovState seed,
                      double step);

  const Chart& chart() const override { return g_.chart(); }
  Mat value(std::span<const double> p) const;
  MetricJet jet(std::span<const double> p, int order, Backend backend) const override;

private:
  const MetricSource& g_;
  VecN base_;
  SinyukovState seed_;
  double step_;
};

struct GridSolveResult {
  std::vector<VecN> grid;
  std::vector<SinyukovState> states;
  std::vector<Reconstruction> reconstructions;
  double max_lambda = 0.0;        // sup |lambda_i| over the grid
  double max_a_anisotropy = 0.0;  // sup |a - (tr a / tr g) g| over the grid
  bool trivial = false;
  LeviCivitaReport verification;  // of (g, reconstructed gbar), FD jets
  MappingClass classification = MappingClass::NotGeodesic;
};

/// Integrate from s0 at the base point to every grid node along staircase
/// paths, reconstruct gbar, and verify the reconstructed pair.
GridSolveResult solve_on_grid(const MetricSource& g, const SinyukovState& s0,
                              const VecN& base, int grid_per_axis, double step);

} // namespace gmap

#endif
