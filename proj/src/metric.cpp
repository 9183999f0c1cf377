#include "gmap/metric.hpp"

#include <algorithm>
#include <cmath>

namespace gmap {

std::string backend_name(Backend b) {
  return b == Backend::Analytic ? "analytic" : "fd";
}

Backend backend_from_name(const std::string& name) {
  if (name == "analytic") return Backend::Analytic;
  if (name == "fd" || name == "finite-difference") return Backend::FiniteDifference;
  throw InputError("unknown backend '" + name + "' (expected analytic or fd)");
}

MetricField::MetricField(Chart chart, std::vector<std::vector<ExprPtr>> components,
                         std::string name)
    : chart_(std::move(chart)), components_(std::move(components)),
      name_(std::move(name)), cache_(std::make_shared<DerivativeCache>()) {
  const int n = chart_.dim();
  if (static_cast<int>(components_.size()) != n)
    throw InputError("component table does not match chart dimension");
  for (const auto& row : components_)
    if (static_cast<int>(row.size()) != n)
      throw InputError("component table is not square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!components_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        throw InputError("missing metric component");
}

ExprPtr MetricField::derivative(int i, int j, std::span<const int> dindices) const {
  // cache key: component indices followed by sorted derivative indices
  std::vector<int> key;
  key.reserve(2 + dindices.size());
  key.push_back(std::min(i, j));
  key.push_back(std::max(i, j));
  std::vector<int> sorted(dindices.begin(), dindices.end());
  std::sort(sorted.begin(), sorted.end());
  key.insert(key.end(), sorted.begin(), sorted.end());

  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->entries.find(key);
    if (it != cache_->entries.end()) return it->second;
  }

  ExprPtr expr;
  if (sorted.empty()) {
    expr = component(i, j);
  } else {
    ExprPtr parent = derivative(i, j, std::span<const int>(sorted).first(sorted.size() - 1));
    expr = differentiate(parent, sorted.back());
  }

  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto [it, inserted] = cache_->entries.emplace(std::move(key), std::move(expr));
  return it->second;
}

Mat MetricField::value(std::span<const double> p) const {
  const int n = dim();
  Mat g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = component(i, j)->evaluate(p);
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

void MetricField::finish_jet(MetricJet& jet) const {
  jet.detg = determinant(jet.g);
  double scale = std::max(1.0, std::pow(jet.g.norm_inf(), jet.n));
  if (std::abs(jet.detg) < 1e-12 * scale)
    throw SingularMetricError("metric '" + (name_.empty() ? "g" : name_) +
                              "' is singular at the requested point");
  jet.ginv = inverse(jet.g);
}

MetricJet MetricField::analytic_jet(std::span<const double> p, int order) const {
  const int n = dim();
  MetricJet jet;
  jet.n = n;
  jet.order = order;
  jet.point = VecN::from(p);
  jet.g = value(p);
  finish_jet(jet);
  if (order >= 1) {
    jet.dg = Tensor3(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          int idx[1] = {k};
          double v = derivative(i, j, idx)->evaluate(p);
          jet.dg(i, j, k) = v;
          jet.dg(j, i, k) = v;
        }
  }
  if (order >= 2) {
    jet.d2g = Tensor4(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k; l < n; ++l) {
            int idx[2] = {k, l};
            double v = derivative(i, j, idx)->evaluate(p);
            jet.d2g(i, j, k, l) = v;
            jet.d2g(i, j, l, k) = v;
            jet.d2g(j, i, k, l) = v;
            jet.d2g(j, i, l, k) = v;
          }
  }
  if (order >= 3) {
    jet.d3g = Tensor5(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k; l < n; ++l)
            for (int m = l; m < n; ++m) {
              int idx[3] = {k, l, m};
              double v = derivative(i, j, idx)->evaluate(p);
              int perm[6][3] = {{k, l, m}, {k, m, l}, {l, k, m},
                                {l, m, k}, {m, k, l}, {m, l, k}};
              for (auto& q : perm) {
                jet.d3g(i, j, q[0], q[1], q[2]) = v;
                jet.d3g(j, i, q[0], q[1], q[2]) = v;
              }
            }
  }
  return jet;
}

namespace {

// Central-difference steps per derivative order, balancing truncation against
// roundoff in double precision.
double fd_step(int order, double x) {
  double base = 0.0;
  switch (order) {
    case 1: base = 1e-5; break;
    case 2: base = 2e-4; break;
    default: base = 2e-3; break;
  }
  return base * (1.0 + std::abs(x));
}

} // namespace

MetricJet MetricField::fd_jet(std::span<const double> p, int order) const {
  const int n = dim();
  MetricJet jet;
  jet.n = n;
  jet.order = order;
  jet.point = VecN::from(p);
  jet.g = value(p);
  finish_jet(jet);

  VecN base = VecN::from(p);
  auto eval = [&](int i, int j, const VecN& q) {
    return component(i, j)->evaluate(q.span());
  };
  auto shifted = [&](std::initializer_list<std::pair<int, double>> moves) {
    VecN q = base;
    for (auto [axis, delta] : moves) q[axis] += delta;
    return q;
  };

  if (order >= 1) {
    jet.dg = Tensor3(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double h = fd_step(1, base[k]);
          double v = (eval(i, j, shifted({{k, h}})) -
                      eval(i, j, shifted({{k, -h}}))) / (2.0 * h);
          jet.dg(i, j, k) = v;
          jet.dg(j, i, k) = v;
        }
  }
  if (order >= 2) {
    jet.d2g = Tensor4(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double f0 = jet.g(i, j);
        for (int k = 0; k < n; ++k)
          for (int l = k; l < n; ++l) {
            double hk = fd_step(2, base[k]);
            double hl = fd_step(2, base[l]);
            double v;
            if (k == l) {
              v = (eval(i, j, shifted({{k, hk}})) - 2.0 * f0 +
                   eval(i, j, shifted({{k, -hk}}))) / (hk * hk);
            } else {
              v = (eval(i, j, shifted({{k, hk}, {l, hl}})) -
                   eval(i, j, shifted({{k, hk}, {l, -hl}})) -
                   eval(i, j, shifted({{k, -hk}, {l, hl}})) +
                   eval(i, j, shifted({{k, -hk}, {l, -hl}}))) / (4.0 * hk * hl);
            }
            jet.d2g(i, j, k, l) = v;
            jet.d2g(i, j, l, k) = v;
            jet.d2g(j, i, k, l) = v;
            jet.d2g(j, i, l, k) = v;
          }
      }
  }
  if (order >= 3) {
    jet.d3g = Tensor5(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k; l < n; ++l)
            for (int m = l; m < n; ++m) {
              double hk = fd_step(3, base[k]);
              double hl = fd_step(3, base[l]);
              double hm = fd_step(3, base[m]);
              double v = 0.0;
              if (k == l && l == m) {
                v = (eval(i, j, shifted({{k, 2 * hk}})) -
                     2.0 * eval(i, j, shifted({{k, hk}})) +
                     2.0 * eval(i, j, shifted({{k, -hk}})) -
                     eval(i, j, shifted({{k, -2 * hk}}))) / (2.0 * hk * hk * hk);
              } else if (k == l) {  // d_m applied to the d_k^2 stencil
                v = (eval(i, j, shifted({{k, hk}, {m, hm}})) -
                     2.0 * eval(i, j, shifted({{m, hm}})) +
                     eval(i, j, shifted({{k, -hk}, {m, hm}})) -
                     eval(i, j, shifted({{k, hk}, {m, -hm}})) +
                     2.0 * eval(i, j, shifted({{m, -hm}})) -
                     eval(i, j, shifted({{k, -hk}, {m, -hm}}))) /
                    (hk * hk * 2.0 * hm);
              } else if (l == m) {  // d_k applied to the d_l^2 stencil
                v = (eval(i, j, shifted({{l, hl}, {k, hk}})) -
                     2.0 * eval(i, j, shifted({{k, hk}})) +
                     eval(i, j, shifted({{l, -hl}, {k, hk}})) -
                     eval(i, j, shifted({{l, hl}, {k, -hk}})) +
                     2.0 * eval(i, j, shifted({{k, -hk}})) -
                     eval(i, j, shifted({{l, -hl}, {k, -hk}}))) /
                    (hl * hl * 2.0 * hk);
              } else {
                for (int sk = -1; sk <= 1; sk += 2)
                  for (int sl = -1; sl <= 1; sl += 2)
                    for (int sm = -1; sm <= 1; sm += 2)
                      v += sk * sl * sm *
                           eval(i, j, shifted({{k, sk * hk}, {l, sl * hl}, {m, sm * hm}}));
                v /= 8.0 * hk * hl * hm;
              }
              int perm[6][3] = {{k, l, m}, {k, m, l}, {l, k, m},
                                {l, m, k}, {m, k, l}, {m, l, k}};
              for (auto& q : perm) {
                jet.d3g(i, j, q[0], q[1], q[2]) = v;
                jet.d3g(j, i, q[0], q[1], q[2]) = v;
              }
            }
  }
  return jet;
}

MetricJet MetricField::jet(std::span<const double> p, int order, Backend backend) const {
  if (order < 0 || order > 3) throw InputError("jet order must be 0..3");
  if (!chart_.contains(p))
    throw DomainError("point outside the chart domain", "metric jet");
  return backend == Backend::Analytic ? analytic_jet(p, order) : fd_jet(p, order);
}

MetricJet metric_jet(const MetricSource& m, std::span<const double> p, int order,
                     Backend backend) {
  return m.jet(p, order, backend);
}

MetricField scaled_metric(const MetricField& m, double factor, std::string name) {
  if (factor == 0.0) throw InputError("metric scale factor must be nonzero");
  const int n = m.dim();
  std::vector<std::vector<ExprPtr>> comps(static_cast<std::size_t>(n),
                                          std::vector<ExprPtr>(static_cast<std::size_t>(n)));
  ExprPtr c = Expr::constant(factor);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ExprPtr e = Expr::binary(BinaryOp::Mul, c, m.component(i, j));
      comps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
      comps[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = e;
    }
  return MetricField(m.chart(), std::move(comps),
                     name.empty() ? m.name() + "_scaled" : std::move(name));
}

} // namespace gmap
