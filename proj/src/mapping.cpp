#include "gmap/mapping.hpp"

#include <cmath>

namespace gmap {

namespace {

inline Mat dmat(const MetricJet& j, int k) {
  Mat m(j.n);
  for (int a = 0; a < j.n; ++a)
    for (int b = 0; b < j.n; ++b) m(a, b) = j.dg(a, b, k);
  return m;
}

inline Mat d2mat(const MetricJet& j, int k, int l) {
  Mat m(j.n);
  for (int a = 0; a < j.n; ++a)
    for (int b = 0; b < j.n; ++b) m(a, b) = j.d2g(a, b, k, l);
  return m;
}

inline Mat d3mat(const MetricJet& j, int k, int l, int q) {
  Mat m(j.n);
  for (int a = 0; a < j.n; ++a)
    for (int b = 0; b < j.n; ++b) m(a, b) = j.d3g(a, b, k, l, q);
  return m;
}

inline double tr(const Mat& m) { return m.trace(); }

// Derivatives of ln|det g| via the Jacobi identity d ln|det g| = tr(g^{-1} dg).
struct DetLogDerivs {
  VecN t;       // t_i = d_i ln|det g|
  Mat dt;       // dt(i,j) = d_j t_i
  Tensor3 d2t;  // d2t(i,j,k) = d_k d_j t_i
};

DetLogDerivs detlog_derivs(const MetricJet& jet, int order) {
  const int n = jet.n;
  const Mat& gi = jet.ginv;
  DetLogDerivs out;
  out.t = VecN(n);
  std::vector<Mat> A;   // first derivative matrices
  A.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) A.push_back(dmat(jet, i));
  for (int i = 0; i < n; ++i) out.t[i] = tr(gi * A[static_cast<std::size_t>(i)]);
  if (order >= 2) {
    out.dt = Mat(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.dt(i, j) = -tr(gi * A[static_cast<std::size_t>(j)] * gi * A[static_cast<std::size_t>(i)]) +
                       tr(gi * d2mat(jet, i, j));
  }
  if (order >= 3) {
    out.d2t = Tensor3(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          const Mat& Ai = A[static_cast<std::size_t>(i)];
          const Mat& Aj = A[static_cast<std::size_t>(j)];
          const Mat& Ak = A[static_cast<std::size_t>(k)];
          double v = tr(gi * Ak * gi * Aj * gi * Ai) +
                     tr(gi * Aj * gi * Ak * gi * Ai) -
                     tr(gi * d2mat(jet, j, k) * gi * Ai) -
                     tr(gi * Aj * gi * d2mat(jet, i, k)) -
                     tr(gi * Ak * gi * d2mat(jet, i, j)) +
                     tr(gi * d3mat(jet, i, j, k));
          out.d2t(i, j, k) = v;
          out.d2t(i, k, j) = v;
        }
  }
  return out;
}

inline VecN column(const Mat& m, int j) {
  VecN c(m.dim());
  for (int i = 0; i < m.dim(); ++i) c[i] = m(i, j);
  return c;
}

// Everything the mapping operations need at one point, filled up to the
// requested derivative depth (1: algebraic level, 2: first covariant
// derivatives, 3: the mu gradient chain).
struct PairCore {
  int n = 0;
  MetricJet jg, jb;
  Tensor3 gamma;           // of g
  double Psi = 0.0;
  double E = 0.0;          // e^{2 Psi}
  VecN psi;
  Mat dpsi;                // d_j psi_i           (depth >= 2)
  Tensor3 d2psi;           // d_k d_j psi_i       (depth 3)
  Mat a;
  Tensor3 da;              // d_k a_ij
  VecN lambda_alg;
  VecN lambda_grad;
  double lambda = 0.0;
  Mat dlambda;             // d_j lambda_i        (depth >= 2)
  Tensor3 d2lambda;        // d_k d_j lambda_i    (depth 3)

  Mat lambda_cov() const {
    Mat out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = dlambda(i, j);
        for (int al = 0; al < n; ++al) s -= gamma(al, i, j) * lambda_alg[al];
        out(i, j) = s;
      }
    return out;
  }

  Mat psi_cov() const {
    Mat out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = dpsi(i, j);
        for (int al = 0; al < n; ++al) s -= gamma(al, i, j) * psi[al];
        out(i, j) = s;
      }
    return out;
  }

  Mat psi_tensor() const {  // psi_{i,j} - psi_i psi_j
    Mat out = psi_cov();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) -= psi[i] * psi[j];
    return out;
  }

  double mu() const {
    Mat lc = lambda_cov();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += jg.ginv(i, j) * lc(i, j);
    return s;
  }

  Mat a_cov(int k) const {  // a_{ij,k} as a matrix in (i,j)
    Mat out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = da(i, j, k);
        for (int al = 0; al < n; ++al)
          s -= gamma(al, i, k) * a(al, j) + gamma(al, j, k) * a(i, al);
        out(i, j) = s;
      }
    return out;
  }
};

PairCore pair_core(const MetricSource& g, const MetricSource& gbar,
                   std::span<const double> p, Backend backend, int depth) {
  if (!g.chart().compatible_with(gbar.chart()))
    throw InputError("metric pair does not share a chart");

  PairCore core;
  core.jg = g.jet(p, depth, backend);
  core.jb = gbar.jet(p, depth, backend);
  const int n = core.jg.n;
  core.n = n;
  core.gamma = christoffel(core.jg);

  const double c = 1.0 / (2.0 * static_cast<double>(n + 1));
  DetLogDerivs Lg = detlog_derivs(core.jg, depth);
  DetLogDerivs Lb = detlog_derivs(core.jb, depth);

  core.Psi = c * std::log(std::abs(core.jb.detg / core.jg.detg));
  core.E = std::pow(std::abs(core.jb.detg / core.jg.detg),
                    1.0 / static_cast<double>(n + 1));
  core.psi = VecN(n);
  for (int i = 0; i < n; ++i) core.psi[i] = c * (Lb.t[i] - Lg.t[i]);

  const Mat& G = core.jg.g;
  const Mat& Gi = core.jg.ginv;
  const Mat& B = core.jb.ginv;

  std::vector<Mat> dG, dGbar, dB;
  for (int k = 0; k < n; ++k) {
    dG.push_back(dmat(core.jg, k));
    dGbar.push_back(dmat(core.jb, k));
    dB.push_back(-1.0 * (B * dGbar.back() * B));
  }

  const Mat GBG = G * B * G;
  core.a = core.E * GBG;
  core.da = Tensor3(n);
  std::vector<Mat> dA;
  for (int k = 0; k < n; ++k) {
    double dEk = 2.0 * core.psi[k] * core.E;
    Mat d = dEk * GBG +
            core.E * (dG[static_cast<std::size_t>(k)] * B * G +
                      G * dB[static_cast<std::size_t>(k)] * G +
                      G * B * dG[static_cast<std::size_t>(k)]);
    dA.push_back(d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) core.da(i, j, k) = d(i, j);
  }

  const Mat GB = G * B;
  core.lambda_alg = -core.E * (GB * core.psi);

  core.lambda = 0.5 * tr(core.a * Gi);
  core.lambda_grad = VecN(n);
  for (int i = 0; i < n; ++i)
    core.lambda_grad[i] =
        0.5 * tr(dA[static_cast<std::size_t>(i)] * Gi) -
        0.5 * tr(core.a * Gi * dG[static_cast<std::size_t>(i)] * Gi);

  if (depth >= 2) {
    core.dpsi = Mat(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        core.dpsi(i, j) = c * (Lb.dt(i, j) - Lg.dt(i, j));

    core.dlambda = Mat(n);
    for (int j = 0; j < n; ++j) {
      double dEj = 2.0 * core.psi[j] * core.E;
      VecN col = dEj * (GB * core.psi) +
                 core.E * (dG[static_cast<std::size_t>(j)] * (B * core.psi)) +
                 core.E * (G * (dB[static_cast<std::size_t>(j)] * core.psi)) +
                 core.E * (GB * column(core.dpsi, j));
      for (int i = 0; i < n; ++i) core.dlambda(i, j) = -col[i];
    }
  }

  if (depth >= 3) {
    core.d2psi = Tensor3(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          core.d2psi(i, j, k) = c * (Lb.d2t(i, j, k) - Lg.d2t(i, j, k));

    std::vector<Mat> d2B(static_cast<std::size_t>(n * n));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        d2B[static_cast<std::size_t>(k * n + l)] =
            B * dGbar[static_cast<std::size_t>(l)] * B * dGbar[static_cast<std::size_t>(k)] * B +
            B * dGbar[static_cast<std::size_t>(k)] * B * dGbar[static_cast<std::size_t>(l)] * B -
            B * d2mat(core.jb, k, l) * B;

    core.d2lambda = Tensor3(n);
    const VecN Bpsi = B * core.psi;
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double dEj = 2.0 * core.psi[j] * core.E;
        double dEk = 2.0 * core.psi[k] * core.E;
        double d2E = (4.0 * core.psi[j] * core.psi[k] + 2.0 * core.dpsi(j, k)) * core.E;
        VecN dpsij = column(core.dpsi, j);
        VecN dpsik = column(core.dpsi, k);
        VecN d2psijk(n);
        for (int i = 0; i < n; ++i) d2psijk[i] = core.d2psi(i, j, k);
        const Mat& Gj = dG[static_cast<std::size_t>(j)];
        const Mat& Gk = dG[static_cast<std::size_t>(k)];
        const Mat& Bj = dB[static_cast<std::size_t>(j)];
        const Mat& Bk = dB[static_cast<std::size_t>(k)];
        const Mat& Bjk = d2B[static_cast<std::size_t>(j * n + k)];

        VecN col = d2E * (G * Bpsi);
        col = col + dEj * (Gk * Bpsi + G * (Bk * core.psi) + GB * dpsik);
        col = col + dEk * (Gj * Bpsi + G * (Bj * core.psi) + GB * dpsij);
        VecN inner = d2mat(core.jg, j, k) * Bpsi;
        inner = inner + Gj * (Bk * core.psi) + Gj * (B * dpsik);
        inner = inner + Gk * (Bj * core.psi) + G * (Bjk * core.psi);
        inner = inner + G * (Bj * dpsik) + Gk * (B * dpsij);
        inner = inner + G * (Bk * dpsij) + GB * d2psijk;
        col = col + core.E * inner;
        for (int i = 0; i < n; ++i) {
          core.d2lambda(i, j, k) = -col[i];
          core.d2lambda(i, k, j) = -col[i];
        }
      }
  }

  return core;
}

double resolve_tol(Backend backend, double tol) {
  return tol > 0.0 ? tol : default_tolerance(backend);
}

} // namespace

MappingEval mapping_eval(const MetricSource& g, const MetricSource& gbar,
                         std::span<const double> p, Backend backend) {
  PairCore core = pair_core(g, gbar, p, backend, 2);
  const int n = core.n;

  MappingEval out;
  out.n = n;
  out.point = VecN::from(p);
  out.Psi = core.Psi;
  out.psi = core.psi;
  out.psi_partial = core.dpsi;
  out.psi_cov = core.psi_cov();
  out.psi_ij = core.psi_tensor();
  out.a = core.a;
  out.da = core.da;
  out.lambda_alg = core.lambda_alg;
  out.lambda_grad = core.lambda_grad;
  out.lambda_route_gap = (core.lambda_alg - core.lambda_grad).norm_inf();
  out.lambda = core.lambda;
  out.lambda_up = core.jg.ginv * core.lambda_alg;
  out.lambda_partial = core.dlambda;
  out.lambda_cov = core.lambda_cov();
  out.mu = core.mu();

  CurvatureEval cg = curvature(core.jg);
  out.K = -cg.scalar / static_cast<double>(n * (n - 1));

  // Kbar from the g-contraction of psi_ij = -K g_ij + Kbar gbar_ij
  double tr_gibar = 0.0;
  double tr_psi = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      tr_gibar += core.jg.ginv(i, j) * core.jb.g(i, j);
      tr_psi += core.jg.ginv(i, j) * out.psi_ij(i, j);
    }
  out.Kbar = (tr_psi + n * out.K) / tr_gibar;

  out.Lambda = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.Lambda(i, j) = out.lambda_cov(i, j) - out.K * out.a(i, j);
  return out;
}

VecN mapping_mu_gradient(const MetricSource& g, const MetricSource& gbar,
                         std::span<const double> p) {
  PairCore core = pair_core(g, gbar, p, Backend::Analytic, 3);
  const int n = core.n;
  CurvatureEval cg = curvature(core.jg);  // for dgamma

  Mat lcov = core.lambda_cov();
  const Mat& Gi = core.jg.ginv;
  VecN out(n);
  for (int k = 0; k < n; ++k) {
    Mat dGk = dmat(core.jg, k);
    Mat dGi = -1.0 * (Gi * dGk * Gi);
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        s += dGi(i, j) * lcov(i, j);
        double dl = core.d2lambda(i, j, k);
        for (int al = 0; al < n; ++al)
          dl -= cg.dgamma(al, i, j, k) * core.lambda_alg[al] +
                core.gamma(al, i, j) * core.dlambda(al, k);
        s += Gi(i, j) * dl;
      }
    out[k] = s;
  }
  return out;
}

LeviCivitaReport levi_civita_residual(const MetricSource& g, const MetricSource& gbar,
                                      const std::vector<VecN>& grid,
                                      Backend backend, double tol) {
  double t = resolve_tol(backend, tol);
  ResidualAccumulator metric_form("levi_civita", backend, t);
  ResidualAccumulator connection_form("connection_deformation", backend, t);
  LeviCivitaReport out;

  for (const VecN& p : grid) {
    PairCore core = pair_core(g, gbar, p.span(), backend, 1);
    const int n = core.n;
    Tensor3 gammabar = christoffel(core.jb);
    out.max_abs_psi = std::max(out.max_abs_psi, core.psi.norm_inf());
    out.max_lambda_route_gap =
        std::max(out.max_lambda_route_gap,
                 (core.lambda_alg - core.lambda_grad).norm_inf());

    metric_form.add_point();
    connection_form.add_point();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          // gbar_{ij,k} with the covariant derivative of g
          double cov = core.jb.dg(i, j, k);
          for (int al = 0; al < n; ++al)
            cov -= core.gamma(al, i, k) * core.jb.g(al, j) +
                   core.gamma(al, j, k) * core.jb.g(i, al);
          double rhs = 2.0 * core.psi[k] * core.jb.g(i, j) +
                       core.psi[i] * core.jb.g(j, k) +
                       core.psi[j] * core.jb.g(i, k);
          metric_form.add(cov - rhs, p);

          double deform = gammabar(i, j, k) - core.gamma(i, j, k);
          if (i == k) deform -= core.psi[j];
          if (i == j) deform -= core.psi[k];
          connection_form.add(deform, p);
        }
  }
  out.metric_form = metric_form.finish();
  out.connection_form = connection_form.finish();
  return out;
}

ResidualReport sinyukov_residual(const MetricSource& g, const MetricSource& gbar,
                                 const std::vector<VecN>& grid,
                                 Backend backend, double tol) {
  ResidualAccumulator acc("sinyukov", backend, resolve_tol(backend, tol));
  for (const VecN& p : grid) {
    PairCore core = pair_core(g, gbar, p.span(), backend, 1);
    const int n = core.n;
    acc.add_point();
    for (int k = 0; k < n; ++k) {
      Mat acov = core.a_cov(k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double rhs = core.lambda_alg[i] * core.jg.g(j, k) +
                       core.lambda_alg[j] * core.jg.g(i, k);
          acc.add(acov(i, j) - rhs, p);
        }
    }
  }
  return acc.finish();
}

CurvatureTransformReport curvature_transform_residual(
    const MetricSource& g, const MetricSource& gbar, const std::vector<VecN>& grid,
    Backend backend, double tol) {
  double t = resolve_tol(backend, tol);
  ResidualAccumulator acc_riemann("riemann_transform", backend, t);
  ResidualAccumulator acc_ricci("ricci_transform", backend, t);
  ResidualAccumulator acc_weyl("weyl_invariance", backend, t);

  for (const VecN& p : grid) {
    PairCore core = pair_core(g, gbar, p.span(), backend, 2);
    const int n = core.n;
    CurvatureEval cg = curvature(core.jg);
    CurvatureEval cb = curvature(core.jb);
    Mat psi_ij = core.psi_tensor();

    acc_riemann.add_point();
    acc_ricci.add_point();
    acc_weyl.add_point();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        acc_ricci.add(cb.ricci(i, j) - cg.ricci(i, j) + (n - 1) * psi_ij(i, j), p);
        for (int h = 0; h < n; ++h)
          for (int k = 0; k < n; ++k) {
            double transform = cg.riemann(h, i, j, k);
            if (h == k) transform += psi_ij(i, j);
            if (h == j) transform -= psi_ij(i, k);
            acc_riemann.add(cb.riemann(h, i, j, k) - transform, p);
            acc_weyl.add(cb.weyl(h, i, j, k) - cg.weyl(h, i, j, k), p);
          }
      }
  }
  CurvatureTransformReport out;
  out.riemann = acc_riemann.finish();
  out.ricci = acc_ricci.finish();
  out.weyl = acc_weyl.finish();
  return out;
}

EinsteinSuiteReport einstein_suite(const MetricSource& g, const MetricSource& gbar,
                                   const std::vector<VecN>& grid,
                                   Backend backend, double tol,
                                   double constancy_tol) {
  double t = resolve_tol(backend, tol);
  EinsteinReport source = einstein_check(g, grid, backend, t);
  if (!source.is_einstein)
    throw InputError("source metric is not an Einstein space "
                     "(einstein_check residual " +
                     std::to_string(source.max_residual) + ")");
  const double K = source.K;

  ResidualAccumulator acc_a("einstein_lambda_riemann", backend, t);
  ResidualAccumulator acc_b("einstein_lambda_cov", backend, t);
  ResidualAccumulator acc_c("einstein_psi_transfer", backend, t);
  ResidualAccumulator acc_d("einstein_target_ricci", backend, t);

  const int n = g.dim();
  std::vector<double> kbars;
  std::vector<PairCore> cores;
  kbars.reserve(grid.size());

  // first pass extracts the pointwise Kbar
  for (const VecN& p : grid) {
    PairCore core = pair_core(g, gbar, p.span(), backend, 2);
    Mat psi_ij = core.psi_tensor();
    double tr_gibar = 0.0;
    double tr_psi = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        tr_gibar += core.jg.ginv(i, j) * core.jb.g(i, j);
        tr_psi += core.jg.ginv(i, j) * psi_ij(i, j);
      }
    kbars.push_back((tr_psi + n * K) / tr_gibar);
    cores.push_back(std::move(core));
  }
  double kbar = 0.0;
  for (double v : kbars) kbar += v;
  kbar /= static_cast<double>(kbars.size());
  double kbar_spread = 0.0;
  for (double v : kbars) kbar_spread = std::max(kbar_spread, std::abs(v - kbar));

  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const VecN& p = grid[idx];
    PairCore& core = cores[idx];
    CurvatureEval cg = curvature(core.jg);
    CurvatureEval cb = curvature(core.jb);
    Mat psi_ij = core.psi_tensor();
    Mat lcov = core.lambda_cov();
    double mu_b = (core.mu() - 2.0 * K * core.lambda) / static_cast<double>(n);

    acc_a.add_point();
    acc_b.add_point();
    acc_c.add_point();
    acc_d.add_point();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        acc_b.add(lcov(i, j) - mu_b * core.jg.g(i, j) - K * core.a(i, j), p);
        acc_c.add(psi_ij(i, j) + K * core.jg.g(i, j) - kbar * core.jb.g(i, j), p);
        acc_d.add(cb.ricci(i, j) + (n - 1) * kbar * core.jb.g(i, j), p);
        for (int k = 0; k < n; ++k) {
          double lhs = 0.0;
          for (int al = 0; al < n; ++al)
            lhs += core.lambda_alg[al] * cg.riemann(al, i, j, k);
          double rhs = K * (core.jg.g(i, j) * core.lambda_alg[k] -
                            core.jg.g(i, k) * core.lambda_alg[j]);
          acc_a.add(lhs - rhs, p);
        }
      }
  }

  EinsteinSuiteReport out;
  out.lambda_riemann = acc_a.finish();
  out.lambda_cov = acc_b.finish();
  out.psi_transfer = acc_c.finish();
  out.target_ricci = acc_d.finish();
  out.K = K;
  out.K_spread = source.K_spread;
  out.Kbar = kbar;
  out.Kbar_spread = kbar_spread;
  out.pass = out.lambda_riemann.pass && out.lambda_cov.pass &&
             out.psi_transfer.pass && out.target_ricci.pass &&
             kbar_spread < constancy_tol;
  return out;
}

std::string mapping_class_name(MappingClass c) {
  switch (c) {
    case MappingClass::NotGeodesic: return "not_geodesic";
    case MappingClass::TrivialAffine: return "trivial_affine";
    case MappingClass::NontrivialGeodesic: return "nontrivial_geodesic";
  }
  return "?";
}

MappingClass classify_mapping(const LeviCivitaReport& report, double psi_threshold) {
  if (!report.metric_form.pass) return MappingClass::NotGeodesic;
  return report.max_abs_psi < psi_threshold ? MappingClass::TrivialAffine
                                            : MappingClass::NontrivialGeodesic;
}

Mat mapping_a_point(const Mat& g, const Mat& gbar) {
  const int n = g.dim();
  double detg = determinant(g);
  double detb = determinant(gbar);
  if (detg == 0.0 || detb == 0.0)
    throw SingularMatrixError("degenerate metric value");
  double E = std::pow(std::abs(detb / detg), 1.0 / static_cast<double>(n + 1));
  return E * (g * inverse(gbar) * g);
}

Reconstruction reconstruct_gbar_point(const Mat& g, const Mat& a) {
  Mat gi = inverse(g);
  Mat m = gi * a * gi;  // ||g^{ia} g^{jb} a_ab||
  Mat gtilde = inverse(m);
  double det_ratio = determinant(gtilde) / determinant(g);
  if (det_ratio == 0.0 || !std::isfinite(det_ratio))
    throw SingularMatrixError("degenerate reconstruction");
  Reconstruction out;
  out.Psi = 0.5 * std::log(std::abs(det_ratio));
  out.gbar = std::exp(2.0 * out.Psi) * gtilde;
  return out;
}

std::vector<Reconstruction> reconstruct_gbar(const MetricSource& g,
                                             std::span<const Mat> a_values,
                                             std::span<const VecN> grid,
                                             Backend backend) {
  if (a_values.size() != grid.size())
    throw InputError("a-field and grid sizes differ");
  std::vector<Reconstruction> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    MetricJet jet = g.jet(grid[i].span(), 0, backend);
    out.push_back(reconstruct_gbar_point(jet.g, a_values[i]));
  }
  return out;
}

} // namespace gmap
