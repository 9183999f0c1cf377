#ifndef GMAP_CHART_HPP
#define GMAP_CHART_HPP

#include <random>
#include <string>
#include <vector>

#include "gmap/errors.hpp"
#include "gmap/linalg.hpp"

namespace gmap {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// A single local coordinate chart: dimension, coordinate names and the
/// closed domain box the metric components are declared on. The sampling
/// margin keeps grids and random points away from the box boundary, where
/// corpus metrics may degenerate.
class Chart {
public:
  Chart() = default;
  Chart(std::vector<std::string> coords, std::vector<Interval> domain,
        double margin = 0.1);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const Interval& domain(int axis) const { return domain_[static_cast<std::size_t>(axis)]; }
  double margin() const { return margin_; }

  /// Margin-shrunk interval used for sampling.
  Interval inner(int axis) const;

  bool contains(std::span<const double> p, bool respect_margin = false) const;

  /// Uniform tensor grid of `per_axis` points per axis inside the margin,
  /// in axis-major order.
  std::vector<VecN> grid(int per_axis) const;

  VecN random_point(std::mt19937_64& rng) const;

  bool compatible_with(const Chart& other) const;

private:
  std::vector<std::string> coords_;
  std::vector<Interval> domain_;
  double margin_ = 0.1;
};

/// Default grid density: 5 per axis up to n=3, 3 per axis beyond.
int default_grid_per_axis(int dim);

} // namespace gmap

#endif
