#include "gmap/chart.hpp"

#include <cmath>

namespace gmap {

Chart::Chart(std::vector<std::string> coords, std::vector<Interval> domain,
             double margin)
    : coords_(std::move(coords)), domain_(std::move(domain)), margin_(margin) {
  if (coords_.size() < 2 || coords_.size() > static_cast<std::size_t>(kMaxDim))
    throw InputError("chart dimension must be between 2 and 6");
  if (domain_.size() != coords_.size())
    throw InputError("domain box does not match coordinate count");
  for (const auto& iv : domain_)
    if (!(iv.hi > iv.lo)) throw InputError("degenerate domain interval");
  if (!(margin_ > 0.0 && margin_ < 0.5))
    throw InputError("sampling margin must lie in (0, 0.5)");
  for (std::size_t i = 0; i < coords_.size(); ++i)
    for (std::size_t j = i + 1; j < coords_.size(); ++j)
      if (coords_[i] == coords_[j])
        throw InputError("duplicate coordinate name '" + coords_[i] + "'");
}

Interval Chart::inner(int axis) const {
  const Interval& iv = domain_[static_cast<std::size_t>(axis)];
  double pad = margin_ * iv.length();
  return {iv.lo + pad, iv.hi - pad};
}

bool Chart::contains(std::span<const double> p, bool respect_margin) const {
  if (static_cast<int>(p.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    Interval iv = respect_margin ? inner(i) : domain_[static_cast<std::size_t>(i)];
    const double eps = 1e-12 * (1.0 + std::abs(iv.lo) + std::abs(iv.hi));
    if (p[static_cast<std::size_t>(i)] < iv.lo - eps ||
        p[static_cast<std::size_t>(i)] > iv.hi + eps)
      return false;
  }
  return true;
}

std::vector<VecN> Chart::grid(int per_axis) const {
  if (per_axis < 1) throw InputError("grid density must be positive");
  const int n = dim();
  std::vector<double> ticks;
  std::vector<VecN> points;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(per_axis);
  points.reserve(total);
  VecN p(n);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  auto tick = [&](int axis, int j) {
    Interval iv = inner(axis);
    if (per_axis == 1) return 0.5 * (iv.lo + iv.hi);
    double t = static_cast<double>(j) / static_cast<double>(per_axis - 1);
    return iv.lo + t * iv.length();
  };
  for (std::size_t count = 0; count < total; ++count) {
    for (int axis = 0; axis < n; ++axis) p[axis] = tick(axis, idx[static_cast<std::size_t>(axis)]);
    points.push_back(p);
    for (int axis = n - 1; axis >= 0; --axis) {
      if (++idx[static_cast<std::size_t>(axis)] < per_axis) break;
      idx[static_cast<std::size_t>(axis)] = 0;
    }
  }
  return points;
}

VecN Chart::random_point(std::mt19937_64& rng) const {
  VecN p(dim());
  for (int i = 0; i < dim(); ++i) {
    Interval iv = inner(i);
    std::uniform_real_distribution<double> dist(iv.lo, iv.hi);
    p[i] = dist(rng);
  }
  return p;
}

bool Chart::compatible_with(const Chart& other) const {
  if (dim() != other.dim()) return false;
  if (coords_ != other.coords_) return false;
  for (int i = 0; i < dim(); ++i) {
    const Interval& a = domain_[static_cast<std::size_t>(i)];
    const Interval& b = other.domain_[static_cast<std::size_t>(i)];
    double scale = 1.0 + std::abs(a.lo) + std::abs(a.hi);
    if (std::abs(a.lo - b.lo) > 1e-12 * scale) return false;
    if (std::abs(a.hi - b.hi) > 1e-12 * scale) return false;
  }
  return true;
}

int default_grid_per_axis(int dim) { return dim <= 3 ? 5 : 3; }

} // namespace gmap
