#include "gmap/geodesic.hpp"

#include <cmath>

namespace gmap {

namespace {

VecN acceleration(const Tensor3& gamma, const VecN& v) {
  const int n = v.n;
  VecN acc(n);
  for (int h = 0; h < n; ++h) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += gamma(h, i, j) * v[i] * v[j];
    acc[h] = -s;
  }
  return acc;
}

} // namespace

GeodesicCurve integrate_geodesic(const MetricSource& g, const VecN& x0,
                                 const VecN& v0, double t_end, double h,
                                 Backend backend) {
  if (!(h > 0.0) || !(t_end > 0.0))
    throw InputError("geodesic integration needs positive step and horizon");
  if (v0.norm_inf() == 0.0) throw InputError("initial velocity is zero");
  if (!g.chart().contains(x0.span()))
    throw InputError("initial point outside the chart domain");

  const int n = g.dim();
  GeodesicCurve curve;
  // MetricField names are not visible through MetricSource; callers may
  // overwrite this label.
  curve.metric_name = "g";

  auto gamma_at = [&](const VecN& x) {
    return christoffel(g.jet(x.span(), 1, backend));
  };

  VecN x = x0, v = v0;
  double t = 0.0;
  curve.times.push_back(t);
  curve.positions.push_back(x);
  curve.velocities.push_back(v);

  int steps = static_cast<int>(std::ceil(t_end / h));
  for (int step = 0; step < steps; ++step) {
    double dt = std::min(h, t_end - t);

    VecN kx1, kv1, kx2, kv2, kx3, kv3, kx4, kv4;
    try {
      kx1 = v;
      kv1 = acceleration(gamma_at(x), v);
      kx2 = v + 0.5 * dt * kv1;
      kv2 = acceleration(gamma_at(x + 0.5 * dt * kx1), kx2);
      kx3 = v + 0.5 * dt * kv2;
      kv3 = acceleration(gamma_at(x + 0.5 * dt * kx2), kx3);
      kx4 = v + dt * kv3;
      kv4 = acceleration(gamma_at(x + dt * kx3), kx4);
    } catch (const DomainError&) {
      curve.truncated = true;
      break;
    }

    VecN xn = x + (dt / 6.0) * (kx1 + 2.0 * (kx2 + kx3) + kx4);
    VecN vn = v + (dt / 6.0) * (kv1 + 2.0 * (kv2 + kv3) + kv4);
    bool finite = true;
    for (int i = 0; i < n; ++i)
      finite = finite && std::isfinite(xn[i]) && std::isfinite(vn[i]);
    if (!finite) throw BlowUpError("geodesic state blew up", t);
    if (!g.chart().contains(xn.span())) {
      curve.truncated = true;
      break;
    }
    x = xn;
    v = vn;
    t += dt;
    curve.times.push_back(t);
    curve.positions.push_back(x);
    curve.velocities.push_back(v);
  }
  return curve;
}

double energy_drift(const GeodesicCurve& curve, const MetricSource& g,
                    Backend backend) {
  if (curve.positions.empty()) return 0.0;
  double first = 0.0;
  double drift = 0.0;
  for (std::size_t s = 0; s < curve.positions.size(); ++s) {
    MetricJet jet = g.jet(curve.positions[s].span(), 0, backend);
    const VecN& v = curve.velocities[s];
    double q = 0.0;
    for (int i = 0; i < jet.n; ++i)
      for (int j = 0; j < jet.n; ++j) q += jet.g(i, j) * v[i] * v[j];
    if (s == 0)
      first = q;
    else
      drift = std::max(drift, std::abs(q - first));
  }
  return drift;
}

double correspondence_defect(const GeodesicCurve& curve, const MetricSource& g,
                             const MetricSource& gbar, Backend backend) {
  const int n = g.dim();
  double defect = 0.0;
  for (std::size_t s = 0; s < curve.positions.size(); ++s) {
    const VecN& x = curve.positions[s];
    const VecN& v = curve.velocities[s];
    if (!gbar.chart().contains(x.span()))
      throw InputError("curve sample outside the target chart domain");
    double vnorm = v.norm2();
    if (vnorm == 0.0) throw InputError("degenerate velocity sample");

    Tensor3 gamma = christoffel(g.jet(x.span(), 1, backend));
    Tensor3 gammabar = christoffel(gbar.jet(x.span(), 1, backend));

    // gbar-acceleration of the g-geodesic: x'' = -Gamma(v,v), so
    // A = (Gammabar - Gamma)(v, v)
    VecN a(n);
    for (int h = 0; h < n; ++h) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          sum += (gammabar(h, i, j) - gamma(h, i, j)) * v[i] * v[j];
      a[h] = sum;
    }

    double minor = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        minor = std::max(minor, std::abs(a[i] * v[j] - a[j] * v[i]));
    double scale = vnorm * (a.norm2() + vnorm * vnorm);
    if (scale > 0.0) defect = std::max(defect, minor / scale);
  }
  return defect;
}

} // namespace gmap
