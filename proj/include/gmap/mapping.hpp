#ifndef GMAP_MAPPING_HPP
#define GMAP_MAPPING_HPP

#include <vector>

#include "gmap/curvature.hpp"
#include "gmap/residual.hpp"

namespace gmap {

/// Pointwise data of a metric pair (g, gbar) on a shared chart.
///
/// Psi    = ln|det gbar / det g| / (2(n+1)),  psi_i = d_i Psi
/// a_ij   = e^{2 Psi} gbar^{ab} g_{ai} g_{bj}
/// lambda_i is computed both algebraically and as the gradient of
/// lambda = a_{ab} g^{ab} / 2; the two routes are stored with their gap.
/// K and Kbar are the pointwise Einstein factors of source and target in
/// the convention R_ij = -K (n-1) g_ij (see curvature.hpp for signs).
struct MappingEval {
  int n = 0;
  VecN point;
  double Psi = 0.0;
  VecN psi;
  Mat psi_partial;   // d_j psi_i
  Mat psi_cov;       // psi_{i,j}
  Mat psi_ij;        // psi_{i,j} - psi_i psi_j
  Mat a;
  Tensor3 da;        // d_k a_ij
  VecN lambda_alg;   // from the algebraic formula
  VecN lambda_grad;  // d_i (a_{ab} g^{ab} / 2)
  double lambda_route_gap = 0.0;
  double lambda = 0.0;
  VecN lambda_up;    // g^{ha} lambda_a
  Mat lambda_partial; // d_j lambda_i
  Mat lambda_cov;    // lambda_{i,j}
  double mu = 0.0;   // lambda_{a,b} g^{ab}
  double K = 0.0;
  double Kbar = 0.0;
  Mat Lambda;        // lambda_{i,j} - K a_ij
};

MappingEval mapping_eval(const MetricSource& g, const MetricSource& gbar,
                         std::span<const double> p,
                         Backend backend = Backend::Analytic);

/// Gradient of mu = lambda_{a,b} g^{ab}; needs third metric derivatives,
/// so the analytic backend is required.
VecN mapping_mu_gradient(const MetricSource& g, const MetricSource& gbar,
                         std::span<const double> p);

struct LeviCivitaReport {
  ResidualReport metric_form;      // gbar_{ij,k} = 2 psi_k gbar_ij + psi_i gbar_jk + psi_j gbar_ik
  ResidualReport connection_form;  // Gammabar^h_ij = Gamma^h_ij + psi_i d^h_j + psi_j d^h_i
  double max_abs_psi = 0.0;
  double max_lambda_route_gap = 0.0;
};

LeviCivitaReport levi_civita_residual(const MetricSource& g, const MetricSource& gbar,
                                      const std::vector<VecN>& grid,
                                      Backend backend = Backend::Analytic,
                                      double tol = -1.0);

/// a_{ij,k} = lambda_i g_jk + lambda_j g_ik
ResidualReport sinyukov_residual(const MetricSource& g, const MetricSource& gbar,
                                 const std::vector<VecN>& grid,
                                 Backend backend = Backend::Analytic,
                                 double tol = -1.0);

struct CurvatureTransformReport {
  ResidualReport riemann;  // Rbar^h_ijk = R^h_ijk + d^h_k psi_ij - d^h_j psi_ik
  ResidualReport ricci;    // Rbar_ij = R_ij - (n-1) psi_ij
  ResidualReport weyl;     // Wbar = W
};

CurvatureTransformReport curvature_transform_residual(
    const MetricSource& g, const MetricSource& gbar, const std::vector<VecN>& grid,
    Backend backend = Backend::Analytic, double tol = -1.0);

/// Einstein-space transfer identities for a pair whose source passes
/// einstein_check. All four blocks vanish on geodesic mappings of Einstein
/// spaces; Kbar is extracted pointwise by g-contraction of the psi transfer
/// identity and must come out constant.
struct EinsteinSuiteReport {
  ResidualReport lambda_riemann;   // lambda_a R^a_ijk = K (g_ij lambda_k - g_ik lambda_j)
  ResidualReport lambda_cov;       // lambda_{i,j} = mu_B g_ij + K a_ij
  ResidualReport psi_transfer;     // psi_ij = -K g_ij + Kbar gbar_ij
  ResidualReport target_ricci;     // Rbar_ij = -(n-1) Kbar gbar_ij
  double K = 0.0;
  double K_spread = 0.0;
  double Kbar = 0.0;
  double Kbar_spread = 0.0;
  bool pass = false;
};

EinsteinSuiteReport einstein_suite(const MetricSource& g, const MetricSource& gbar,
                                   const std::vector<VecN>& grid,
                                   Backend backend = Backend::Analytic,
                                   double tol = -1.0,
                                   double constancy_tol = 1e-9);

enum class MappingClass { NotGeodesic, TrivialAffine, NontrivialGeodesic };

std::string mapping_class_name(MappingClass c);

/// Trivial means the pair passes with psi below the nontriviality threshold.
MappingClass classify_mapping(const LeviCivitaReport& report,
                              double psi_threshold = 1e-6);

/// Forward map, pure point algebra: a_ij = e^{2 Psi} gbar^{ab} g_{ai} g_{bj}.
Mat mapping_a_point(const Mat& g, const Mat& gbar);

struct Reconstruction {
  Mat gbar;
  double Psi = 0.0;
};

/// Inverse map, pure point algebra: invert ||g^{ia} g^{jb} a_ab||, rescale by
/// the determinant ratio. Throws SingularMatrixError for degenerate a.
Reconstruction reconstruct_gbar_point(const Mat& g, const Mat& a);

/// Pointwise reconstruction of gbar from an a-field sampled on a grid.
std::vector<Reconstruction> reconstruct_gbar(const MetricSource& g,
                                             std::span<const Mat> a_values,
                                             std::span<const VecN> grid,
                                             Backend backend = Backend::Analytic);

} // namespace gmap

#endif
