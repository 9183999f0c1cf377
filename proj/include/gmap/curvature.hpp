#ifndef GMAP_CURVATURE_HPP
#define GMAP_CURVATURE_HPP

#include <vector>

#include "gmap/metric.hpp"

namespace gmap {

/// Connection, curvature and (optionally) first covariant curvature
/// derivatives of a single metric at one point.
///
/// Conventions used throughout this library:
///   R^h_ijk = d_j Gamma^h_ik - d_k Gamma^h_ij
///             + Gamma^h_{j a} Gamma^a_{ik} - Gamma^h_{k a} Gamma^a_{ij}
///   R_ij    = R^a_{iaj}   (contraction with the first antisymmetric slot)
///   R       = g^{ij} R_ij
/// With these signs the round unit sphere has R_ij = (n-1) g_ij and the
/// Einstein constant K defined by R_ij = -K (n-1) g_ij comes out negative
/// for spheres and positive for hyperbolic space. Only the relative signs
/// matter for the mapping identities; the suite in mapping.hpp validates
/// the whole package on known geodesic pairs.
struct CurvatureEval {
  int n = 0;
  VecN point;
  Tensor3 gamma;        // gamma(h,i,j)    = Gamma^h_ij
  Tensor4 dgamma;       // dgamma(h,i,j,k) = d_k Gamma^h_ij
  Tensor4 riemann;      // riemann(h,i,j,k) = R^h_ijk
  Mat ricci;            // R_ij
  Mat ricci_mixed;      // R^i_j = g^{ia} R_aj
  double scalar = 0.0;  // R
  Tensor4 weyl;         // projective Weyl W^h_ijk
  bool has_derivatives = false;
  Tensor3 dricci;       // dricci(i,j,k) = R_{ij,k} (covariant)
  VecN dscalar;         // R_{,k} = g^{ij} R_{ij,k}

  /// R^{a}{}_{il}{}^{b} = g^{bk} R^a_{ilk}
  double riemann_up3(const Mat& ginv, int a, int i, int l, int b) const {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += ginv(b, k) * riemann(a, i, l, k);
    return s;
  }
};

/// Christoffel symbols of the second kind from a jet of order >= 1.
Tensor3 christoffel(const MetricJet& jet);

/// Full curvature evaluation; requires jet order >= 2, or >= 3 when
/// `need_derivatives` is set.
CurvatureEval curvature(const MetricJet& jet, bool need_derivatives = false);

/// Projective Weyl tensor W^h_ijk = R^h_ijk + (d^h_k R_ij - d^h_j R_ik)/(n-1).
/// Identically zero for n = 2.
Tensor4 weyl_projective(const CurvatureEval& c);

struct EinsteinReport {
  bool is_einstein = false;
  double K = 0.0;          // grid mean of the pointwise constant
  double K_spread = 0.0;   // max deviation of pointwise K from the mean
  double max_residual = 0.0;
  int points = 0;
};

/// Tests R_ij = -K (n-1) g_ij over the grid with the pointwise extraction
/// K = -R_ij g^{ij} / (n (n-1)); Einstein means small residual and constant K.
EinsteinReport einstein_check(const MetricSource& m, const std::vector<VecN>& grid,
                              Backend backend = Backend::Analytic,
                              double tol = 1e-8);

} // namespace gmap

#endif
