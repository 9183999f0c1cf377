#ifndef GMAP_GEODESIC_HPP
#define GMAP_GEODESIC_HPP

#include <string>
#include <vector>

#include "gmap/curvature.hpp"

namespace gmap {

struct GeodesicCurve {
  std::string metric_name;
  std::vector<double> times;
  std::vector<VecN> positions;
  std::vector<VecN> velocities;
  bool truncated = false;  // left the chart domain before t_end
};

/// RK4 integration of x'' + Gamma(x)(x', x') = 0 with fixed step h.
/// Stops cleanly (truncated flag) when the trajectory leaves the domain box.
GeodesicCurve integrate_geodesic(const MetricSource& g, const VecN& x0,
                                 const VecN& v0, double t_end, double h,
                                 Backend backend = Backend::Analytic);

/// Largest drift of g(x', x') along the curve, a check of affine
/// parametrization.
double energy_drift(const GeodesicCurve& curve, const MetricSource& g,
                    Backend backend = Backend::Analytic);

/// Unparametrized-geodesic defect of the curve with respect to gbar.
///
/// At each sample the gbar-acceleration A^h = x''^h + Gammabar^h_ij x'^i x'^j
/// must be parallel to the velocity; the defect is the largest 2x2 minor of
/// the matrix with rows A and x', normalized by |x'| (|A| + |x'|^2), which
/// is invariant under rescaling the velocity. Works for null directions,
/// where orthogonal projection would degenerate.
double correspondence_defect(const GeodesicCurve& curve, const MetricSource& g,
                             const MetricSource& gbar,
                             Backend backend = Backend::Analytic);

} // namespace gmap

#endif
