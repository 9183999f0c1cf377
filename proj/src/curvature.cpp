#include "gmap/curvature.hpp"

#include <cmath>

namespace gmap {

namespace {

// S_{aij} = d_i g_{aj} + d_j g_{ai} - d_a g_{ij}
inline double sym_deriv(const MetricJet& jet, int a, int i, int j) {
  return jet.dg(a, j, i) + jet.dg(a, i, j) - jet.dg(i, j, a);
}

inline double sym_deriv_d(const MetricJet& jet, int a, int i, int j, int k) {
  return jet.d2g(a, j, i, k) + jet.d2g(a, i, j, k) - jet.d2g(i, j, a, k);
}

inline double sym_deriv_dd(const MetricJet& jet, int a, int i, int j, int k, int l) {
  return jet.d3g(a, j, i, k, l) + jet.d3g(a, i, j, k, l) - jet.d3g(i, j, a, k, l);
}

} // namespace

Tensor3 christoffel(const MetricJet& jet) {
  if (jet.order < 1) throw InputError("christoffel needs a jet of order >= 1");
  const int n = jet.n;
  Tensor3 gamma(n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          s += jet.ginv(h, a) * sym_deriv(jet, a, i, j);
        gamma(h, i, j) = 0.5 * s;
        gamma(h, j, i) = 0.5 * s;
      }
  return gamma;
}

CurvatureEval curvature(const MetricJet& jet, bool need_derivatives) {
  if (jet.order < 2)
    throw InputError("curvature needs a jet of order >= 2");
  if (need_derivatives && jet.order < 3)
    throw InputError("curvature derivatives need a jet of order 3");

  const int n = jet.n;
  CurvatureEval c;
  c.n = n;
  c.point = jet.point;
  c.gamma = christoffel(jet);

  // d_k g^{ha} = -(g^{-1} d_k g g^{-1})^{ha}
  Tensor3 dginv(n);
  for (int k = 0; k < n; ++k)
    for (int h = 0; h < n; ++h)
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int b = 0; b < n; ++b)
          for (int d = 0; d < n; ++d)
            s += jet.ginv(h, b) * jet.dg(b, d, k) * jet.ginv(d, a);
        dginv(h, a, k) = -s;
      }

  c.dgamma = Tensor4(n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int a = 0; a < n; ++a)
            s += dginv(h, a, k) * sym_deriv(jet, a, i, j) +
                 jet.ginv(h, a) * sym_deriv_d(jet, a, i, j, k);
          c.dgamma(h, i, j, k) = 0.5 * s;
          c.dgamma(h, j, i, k) = 0.5 * s;
        }

  c.riemann = Tensor4(n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          double s = c.dgamma(h, i, k, j) - c.dgamma(h, i, j, k);
          for (int a = 0; a < n; ++a)
            s += c.gamma(h, j, a) * c.gamma(a, i, k) -
                 c.gamma(h, k, a) * c.gamma(a, i, j);
          c.riemann(h, i, j, k) = s;
          c.riemann(h, i, k, j) = -s;
        }

  c.ricci = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += c.riemann(a, i, a, j);
      c.ricci(i, j) = s;
    }

  c.ricci_mixed = jet.ginv * c.ricci;
  c.scalar = 0.0;
  for (int i = 0; i < n; ++i) c.scalar += c.ricci_mixed(i, i);

  c.weyl = weyl_projective(c);

  if (need_derivatives) {
    c.has_derivatives = true;

    // d_l d_k g^{ha}
    Tensor4 d2ginv(n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int h = 0; h < n; ++h)
          for (int a = 0; a < n; ++a) {
            double s = 0.0;
            for (int b = 0; b < n; ++b)
              for (int d = 0; d < n; ++d) {
                s += dginv(h, b, l) * jet.dg(b, d, k) * jet.ginv(d, a);
                s += jet.ginv(h, b) * jet.d2g(b, d, k, l) * jet.ginv(d, a);
                s += jet.ginv(h, b) * jet.dg(b, d, k) * dginv(d, a, l);
              }
            d2ginv(h, a, k, l) = -s;
          }

    Tensor5 d2gamma(n);
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l) {
              double s = 0.0;
              for (int a = 0; a < n; ++a) {
                s += d2ginv(h, a, k, l) * sym_deriv(jet, a, i, j);
                s += dginv(h, a, k) * sym_deriv_d(jet, a, i, j, l);
                s += dginv(h, a, l) * sym_deriv_d(jet, a, i, j, k);
                s += jet.ginv(h, a) * sym_deriv_dd(jet, a, i, j, k, l);
              }
              s *= 0.5;
              d2gamma(h, i, j, k, l) = s;
              d2gamma(h, i, j, l, k) = s;
              d2gamma(h, j, i, k, l) = s;
              d2gamma(h, j, i, l, k) = s;
            }

    // partial derivative of the Ricci tensor, then covariant correction
    auto driemann = [&](int h, int i, int j, int k, int l) {
      double s = d2gamma(h, i, k, j, l) - d2gamma(h, i, j, k, l);
      for (int a = 0; a < n; ++a) {
        s += c.dgamma(h, j, a, l) * c.gamma(a, i, k) +
             c.gamma(h, j, a) * c.dgamma(a, i, k, l);
        s -= c.dgamma(h, k, a, l) * c.gamma(a, i, j) +
             c.gamma(h, k, a) * c.dgamma(a, i, j, l);
      }
      return s;
    };

    c.dricci = Tensor3(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double partial = 0.0;
          for (int a = 0; a < n; ++a) partial += driemann(a, i, a, j, k);
          double s = partial;
          for (int a = 0; a < n; ++a)
            s -= c.gamma(a, i, k) * c.ricci(a, j) +
                 c.gamma(a, j, k) * c.ricci(i, a);
          c.dricci(i, j, k) = s;
        }

    c.dscalar = VecN(n);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += jet.ginv(i, j) * c.dricci(i, j, k);
      c.dscalar[k] = s;
    }
  }

  return c;
}

Tensor4 weyl_projective(const CurvatureEval& c) {
  const int n = c.n;
  Tensor4 w(n);
  const double inv = 1.0 / static_cast<double>(n - 1);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = c.riemann(h, i, j, k);
          if (h == k) s += inv * c.ricci(i, j);
          if (h == j) s -= inv * c.ricci(i, k);
          w(h, i, j, k) = s;
        }
  return w;
}

EinsteinReport einstein_check(const MetricSource& m, const std::vector<VecN>& grid,
                              Backend backend, double tol) {
  if (grid.empty()) throw InputError("einstein_check needs a nonempty grid");
  const int n = m.dim();
  EinsteinReport report;
  report.points = static_cast<int>(grid.size());

  std::vector<double> ks;
  ks.reserve(grid.size());
  for (const VecN& p : grid) {
    MetricJet jet = m.jet(p.span(), 2, backend);
    CurvatureEval c = curvature(jet);
    double k = -c.scalar / static_cast<double>(n * (n - 1));
    ks.push_back(k);
    double res = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        res = std::max(res, std::abs(c.ricci(i, j) +
                                     k * (n - 1) * jet.g(i, j)));
    report.max_residual = std::max(report.max_residual, res);
  }
  double mean = 0.0;
  for (double k : ks) mean += k;
  mean /= static_cast<double>(ks.size());
  double spread = 0.0;
  for (double k : ks) spread = std::max(spread, std::abs(k - mean));
  report.K = mean;
  report.K_spread = spread;
  report.is_einstein = report.max_residual < tol && spread < tol;
  return report;
}

} // namespace gmap
