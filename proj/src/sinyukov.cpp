#include "gmap/sinyukov.hpp"

#include <cmath>

namespace gmap {

std::vector<double> SinyukovState::pack() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(packed_size()));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.push_back(a(i, j));
  for (int i = 0; i < n; ++i) out.push_back(lambda[i]);
  out.push_back(mu);
  return out;
}

SinyukovState SinyukovState::unpack(int n, std::span<const double> data) {
  SinyukovState s(n);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      s.a(i, j) = data[idx];
      s.a(j, i) = data[idx];
      ++idx;
    }
  for (int i = 0; i < n; ++i) s.lambda[i] = data[idx++];
  s.mu = data[idx];
  return s;
}

PathSpec axis_staircase_path(const VecN& from, const VecN& to, double step) {
  PathSpec path;
  path.step = step;
  path.waypoints.push_back(from);
  VecN cursor = from;
  for (int axis = 0; axis < from.n; ++axis) {
    if (cursor[axis] == to[axis]) continue;
    cursor[axis] = to[axis];
    path.waypoints.push_back(cursor);
  }
  if (path.waypoints.size() == 1) path.waypoints.push_back(from);
  return path;
}

PathSpec square_loop(const VecN& base, double side, double step,
                     int axis_a, int axis_b) {
  PathSpec path;
  path.step = step;
  VecN p = base;
  path.waypoints.push_back(p);
  p[axis_a] += side;
  path.waypoints.push_back(p);
  p[axis_b] += side;
  path.waypoints.push_back(p);
  p[axis_a] -= side;
  path.waypoints.push_back(p);
  p[axis_b] -= side;
  path.waypoints.push_back(p);
  return path;
}

namespace {

double resolve_tol(Backend backend, double tol) {
  return tol > 0.0 ? tol : default_tolerance(backend);
}

} // namespace

ResidualReport integrability_residual(const MetricSource& g, const MetricSource& gbar,
                                      const std::vector<VecN>& grid,
                                      Backend backend, double tol) {
  ResidualAccumulator acc("integrability", backend, resolve_tol(backend, tol));
  for (const VecN& p : grid) {
    MappingEval ev = mapping_eval(g, gbar, p.span(), backend);
    MetricJet jet = g.jet(p.span(), 2, backend);
    CurvatureEval c = curvature(jet);
    const int n = ev.n;
    const Mat& lcov = ev.lambda_cov;
    acc.add_point();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double lhs = 0.0;
            for (int al = 0; al < n; ++al)
              lhs += ev.a(i, al) * c.riemann(al, j, k, l) +
                     ev.a(j, al) * c.riemann(al, i, k, l);
            double rhs = jet.g(i, k) * lcov(j, l) + jet.g(j, k) * lcov(i, l) -
                         jet.g(i, l) * lcov(j, k) - jet.g(j, l) * lcov(i, k);
            acc.add(lhs - rhs, p);
          }
  }
  return acc.finish();
}

ResidualReport second_sinyukov_residual(const MetricSource& g, const MetricSource& gbar,
                                        const std::vector<VecN>& grid,
                                        Backend backend, double tol) {
  ResidualAccumulator acc("second_sinyukov", backend, resolve_tol(backend, tol));
  for (const VecN& p : grid) {
    MappingEval ev = mapping_eval(g, gbar, p.span(), backend);
    MetricJet jet = g.jet(p.span(), 2, backend);
    CurvatureEval c = curvature(jet);
    const int n = ev.n;
    acc.add_point();
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        double s = n * ev.lambda_cov(i, l) - ev.mu * jet.g(i, l);
        for (int al = 0; al < n; ++al) {
          s += ev.a(i, al) * c.ricci_mixed(al, l);
          for (int be = 0; be < n; ++be)
            s += ev.a(al, be) * c.riemann_up3(jet.ginv, al, i, l, be);
        }
        acc.add(s, p);
      }
  }
  return acc.finish();
}

ResidualReport third_sinyukov_residual(const MetricSource& g, const MetricSource& gbar,
                                       const std::vector<VecN>& grid,
                                       Backend backend, double tol) {
  if (backend != Backend::Analytic)
    throw InputError("third Sinyukov residual needs third derivatives; the "
                     "finite-difference backend lacks the precision");
  ResidualAccumulator acc("third_sinyukov", Backend::Analytic,
                          tol > 0.0 ? tol : 1e-7);
  for (const VecN& p : grid) {
    MappingEval ev = mapping_eval(g, gbar, p.span(), Backend::Analytic);
    VecN dmu = mapping_mu_gradient(g, gbar, p.span());
    MetricJet jet = g.jet(p.span(), 3, Backend::Analytic);
    CurvatureEval c = curvature(jet, true);
    const int n = ev.n;

    Mat a_up(n);  // a^{ab}
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            s += jet.ginv(al, i) * ev.a(i, j) * jet.ginv(j, be);
        a_up(al, be) = s;
      }

    acc.add_point();
    for (int k = 0; k < n; ++k) {
      double s = (n - 1) * dmu[k];
      for (int al = 0; al < n; ++al) {
        s += (n + 2) * ev.lambda_alg[al] * c.ricci_mixed(al, k);
        for (int be = 0; be < n; ++be) {
          s += 0.5 * ev.a(k, al) * jet.ginv(al, be) * c.dscalar[be];
          s += a_up(al, be) * c.dricci(be, k, al);
          s -= a_up(al, be) * c.dricci(al, be, k);
        }
      }
      s += ev.lambda_alg[k] * c.scalar;
      acc.add(s, p);
    }
  }
  return acc.finish();
}

namespace {

// d(state)/ds along a fixed coordinate tangent; linear in the state.
SinyukovState rhs_directional(const MetricJet& jet, const CurvatureEval& c,
                              const VecN& tangent, const SinyukovState& s) {
  const int n = jet.n;
  SinyukovState out(n);

  Mat a_up(n);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          v += jet.ginv(al, i) * s.a(i, j) * jet.ginv(j, be);
      a_up(al, be) = v;
    }

  for (int k = 0; k < n; ++k) {
    double tk = tangent[k];
    if (tk == 0.0) continue;

    // a-equation with the connection terms restored
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = s.lambda[i] * jet.g(j, k) + s.lambda[j] * jet.g(i, k);
        for (int al = 0; al < n; ++al)
          v += c.gamma(al, k, i) * s.a(al, j) + c.gamma(al, k, j) * s.a(i, al);
        out.a(i, j) += tk * v;
        if (i != j) out.a(j, i) += tk * v;
      }

    // lambda-equation from the contracted integrability conditions
    for (int i = 0; i < n; ++i) {
      double cov = s.mu * jet.g(i, k);
      for (int al = 0; al < n; ++al) {
        cov -= s.a(i, al) * c.ricci_mixed(al, k);
        for (int be = 0; be < n; ++be)
          cov -= s.a(al, be) * c.riemann_up3(jet.ginv, al, i, k, be);
      }
      cov /= static_cast<double>(n);
      double v = cov;
      for (int al = 0; al < n; ++al) v += c.gamma(al, i, k) * s.lambda[al];
      out.lambda[i] += tk * v;
    }

    // mu-equation (scalar, covariant = partial)
    double v = 0.0;
    for (int al = 0; al < n; ++al) {
      v -= (n + 2) * s.lambda[al] * c.ricci_mixed(al, k);
      for (int be = 0; be < n; ++be) {
        v -= 0.5 * s.a(k, al) * jet.ginv(al, be) * c.dscalar[be];
        v -= a_up(al, be) * c.dricci(be, k, al);
        v += a_up(al, be) * c.dricci(al, be, k);
      }
    }
    v -= s.lambda[k] * c.scalar;
    v /= static_cast<double>(n - 1);
    out.mu += tk * v;
  }
  return out;
}

SinyukovState rhs_at(const MetricSource& g, std::span<const double> p,
                     const VecN& tangent, const SinyukovState& s) {
  MetricJet jet = g.jet(p, 3, Backend::Analytic);
  CurvatureEval c = curvature(jet, true);
  return rhs_directional(jet, c, tangent, s);
}

std::vector<double> axpy(const std::vector<double>& base, double factor,
                         const std::vector<double>& dir) {
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + factor * dir[i];
  return out;
}

} // namespace

SinyukovState cauchy_rhs(const MetricSource& g, std::span<const double> p,
                         int direction, const SinyukovState& s) {
  if (direction < 0 || direction >= g.dim())
    throw InputError("direction index out of range");
  VecN tangent(g.dim());
  tangent[direction] = 1.0;
  return rhs_at(g, p, tangent, s);
}

SinyukovState integrate_along_path(const MetricSource& g, const PathSpec& path,
                                   const SinyukovState& s0) {
  if (path.waypoints.size() < 2)
    throw InputError("path needs at least two waypoints");
  if (!(path.step > 0.0)) throw InputError("path step must be positive");
  for (const VecN& w : path.waypoints)
    if (!g.chart().contains(w.span()))
      throw InputError("path waypoint outside the chart domain");

  const int n = g.dim();
  std::vector<double> y = s0.pack();
  double arc = 0.0;

  for (std::size_t seg = 0; seg + 1 < path.waypoints.size(); ++seg) {
    const VecN& w0 = path.waypoints[seg];
    const VecN& w1 = path.waypoints[seg + 1];
    VecN tangent = w1 - w0;
    double length = tangent.norm2();
    if (length == 0.0) continue;
    int steps = std::max(1, static_cast<int>(std::ceil(length / path.step)));
    double dt = 1.0 / static_cast<double>(steps);

    auto rhs = [&](double t, const std::vector<double>& state) {
      VecN x = w0;
      for (int i = 0; i < n; ++i) x[i] += t * tangent[i];
      SinyukovState s = SinyukovState::unpack(n, state);
      return rhs_at(g, x.span(), tangent, s).pack();
    };

    for (int step = 0; step < steps; ++step) {
      double t = step * dt;
      std::vector<double> k1 = rhs(t, y);
      std::vector<double> k2 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k1));
      std::vector<double> k3 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k2));
      std::vector<double> k4 = rhs(t + dt, axpy(y, dt, k3));
      for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
      arc += dt * length;
      for (double v : y)
        if (!std::isfinite(v))
          throw BlowUpError("state blew up during path integration", arc);
    }
  }
  return SinyukovState::unpack(n, y);
}

double holonomy_defect(const MetricSource& g, const PathSpec& loop,
                       const SinyukovState& s0) {
  if (loop.waypoints.size() < 2)
    throw InputError("loop needs at least two waypoints");
  const VecN& first = loop.waypoints.front();
  const VecN& last = loop.waypoints.back();
  if ((first - last).norm_inf() > 1e-12)
    throw InputError("holonomy loop is not closed");
  SinyukovState end = integrate_along_path(g, loop, s0);
  std::vector<double> y0 = s0.pack();
  std::vector<double> y1 = end.pack();
  double defect = 0.0;
  for (std::size_t i = 0; i < y0.size(); ++i)
    defect = std::max(defect, std::abs(y1[i] - y0[i]));
  return defect;
}

ReconstructedMetric::ReconstructedMetric(const MetricSource& g, VecN base,
                                         SinyukovState seed, double step)
    : g_(g), base_(base), seed_(std::move(seed)), step_(step) {}

Mat ReconstructedMetric::value(std::span<const double> p) const {
  VecN target = VecN::from(p);
  PathSpec path = axis_staircase_path(base_, target, step_);
  SinyukovState s = integrate_along_path(g_, path, seed_);
  MetricJet jet = g_.jet(p, 0, Backend::Analytic);
  return reconstruct_gbar_point(jet.g, s.a).gbar;
}

MetricJet ReconstructedMetric::jet(std::span<const double> p, int order,
                                   Backend) const {
  if (order > 1)
    throw InputError("reconstructed metrics provide jets up to order 1");
  const int n = dim();
  MetricJet jet;
  jet.n = n;
  jet.order = order;
  jet.point = VecN::from(p);
  jet.g = value(p);
  jet.detg = determinant(jet.g);
  if (jet.detg == 0.0)
    throw SingularMetricError("reconstructed metric is singular");
  jet.ginv = inverse(jet.g);
  if (order >= 1) {
    jet.dg = Tensor3(n);
    VecN base = VecN::from(p);
    for (int k = 0; k < n; ++k) {
      double h = 1e-4 * (1.0 + std::abs(base[k]));
      VecN hi = base, lo = base;
      hi[k] += h;
      lo[k] -= h;
      Mat ghi = value(hi.span());
      Mat glo = value(lo.span());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          jet.dg(i, j, k) = (ghi(i, j) - glo(i, j)) / (2.0 * h);
    }
  }
  return jet;
}

GridSolveResult solve_on_grid(const MetricSource& g, const SinyukovState& s0,
                              const VecN& base, int grid_per_axis, double step) {
  if (!g.chart().contains(base.span()))
    throw InputError("base point outside the chart domain");

  GridSolveResult out;
  out.grid = g.chart().grid(grid_per_axis);

  bool base_on_grid = false;
  for (const VecN& p : out.grid)
    if ((p - base).norm_inf() < 1e-9) {
      base_on_grid = true;
      break;
    }
  if (!base_on_grid) throw InputError("base point is not a grid node");

  for (const VecN& node : out.grid) {
    PathSpec path = axis_staircase_path(base, node, step);
    SinyukovState s = integrate_along_path(g, path, s0);
    MetricJet jet = g.jet(node.span(), 0, Backend::Analytic);
    out.max_lambda = std::max(out.max_lambda, s.lambda.norm_inf());
    double ratio = s.a.trace() / jet.g.trace();
    out.max_a_anisotropy =
        std::max(out.max_a_anisotropy, (s.a - ratio * jet.g).norm_inf());
    out.reconstructions.push_back(reconstruct_gbar_point(jet.g, s.a));
    out.states.push_back(std::move(s));
  }
  out.trivial = out.max_lambda < 1e-8 && out.max_a_anisotropy < 1e-8;

  ReconstructedMetric gbar(g, base, s0, step);
  out.verification = levi_civita_residual(g, gbar, out.grid,
                                          Backend::FiniteDifference);
  out.classification = out.trivial ? MappingClass::TrivialAffine
                                   : classify_mapping(out.verification);
  return out;
}

} // namespace gmap
