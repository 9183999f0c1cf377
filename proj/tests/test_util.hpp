#ifndef GMAP_TESTS_TEST_UTIL_HPP
#define GMAP_TESTS_TEST_UTIL_HPP

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gmap/linalg.hpp"
#include "gmap/metric.hpp"

namespace gmap::testutil {

inline std::vector<std::string> coord_names(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

inline Chart box_chart(int n, double halfwidth = 0.45, double margin = 0.1) {
  std::vector<Interval> domain(static_cast<std::size_t>(n),
                               Interval{-halfwidth, halfwidth});
  return Chart(coord_names(n), std::move(domain), margin);
}

inline MetricField metric_from_strings(const Chart& chart,
                                       const std::vector<std::vector<std::string>>& comps,
                                       std::string name = "test") {
  const int n = chart.dim();
  std::vector<std::vector<ExprPtr>> table(static_cast<std::size_t>(n),
                                          std::vector<ExprPtr>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ExprPtr e = parse_expression(comps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                   chart.coords());
      table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
      table[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = e;
    }
  return MetricField(chart, std::move(table), std::move(name));
}

inline std::string r_squared(int n) {
  std::string s = "x1^2";
  for (int i = 2; i <= n; ++i) s += " + x" + std::to_string(i) + "^2";
  return s;
}

/// Euclidean metric, optionally scaled by a constant.
inline MetricField flat_metric(int n, double scale = 1.0, double halfwidth = 0.45) {
  std::vector<std::vector<std::string>> comps(static_cast<std::size_t>(n),
                                              std::vector<std::string>(static_cast<std::size_t>(n), "0"));
  for (int i = 0; i < n; ++i) {
    std::ostringstream os;
    os << scale;
    comps[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = os.str();
  }
  return metric_from_strings(box_chart(n, halfwidth), comps, "flat" + std::to_string(n));
}

/// Round sphere of unit curvature in gnomonic (central projection)
/// coordinates: g_ij = ((1+r^2) delta_ij - x_i x_j) / (1+r^2)^2.
/// All geodesics are straight chart lines.
inline MetricField gnomonic_sphere(int n, double halfwidth = 0.45) {
  std::vector<std::vector<std::string>> comps(static_cast<std::size_t>(n),
                                              std::vector<std::string>(static_cast<std::size_t>(n)));
  std::string u = "(1 + " + r_squared(n) + ")";
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::string xi = "x" + std::to_string(i + 1);
      std::string xj = "x" + std::to_string(j + 1);
      std::string e;
      if (i == j)
        e = "(" + u + " - " + xi + "^2)/" + u + "^2";
      else
        e = "-(" + xi + "*" + xj + ")/" + u + "^2";
      comps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
    }
  return metric_from_strings(box_chart(n, halfwidth), comps,
                             "sphere_gnomonic" + std::to_string(n));
}

/// Hyperbolic space of curvature -1 in Beltrami-Klein coordinates:
/// g_ij = ((1-r^2) delta_ij + x_i x_j) / (1-r^2)^2.
inline MetricField klein_disc(int n, double halfwidth = 0.45) {
  std::vector<std::vector<std::string>> comps(static_cast<std::size_t>(n),
                                              std::vector<std::string>(static_cast<std::size_t>(n)));
  std::string u = "(1 - (" + r_squared(n) + "))";
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::string xi = "x" + std::to_string(i + 1);
      std::string xj = "x" + std::to_string(j + 1);
      std::string e;
      if (i == j)
        e = "(" + u + " + " + xi + "^2)/" + u + "^2";
      else
        e = "(" + xi + "*" + xj + ")/" + u + "^2";
      comps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
    }
  return metric_from_strings(box_chart(n, halfwidth), comps,
                             "klein_hyperbolic" + std::to_string(n));
}

/// Flat plane in polar-type coordinates, g = diag(1, x1^2), x1 > 0.
inline MetricField polar_flat() {
  Chart chart(coord_names(2), {Interval{0.5, 3.0}, Interval{-1.2, 1.2}}, 0.1);
  return metric_from_strings(chart, {{"1", "0"}, {"0", "x1^2"}}, "polar_flat2");
}

/// Curved negative control, g = diag(1, 1 + x1^2).
inline MetricField curved_control2() {
  return metric_from_strings(box_chart(2), {{"1", "0"}, {"0", "1 + x1^2"}},
                             "nonflat2");
}

/// Classical Liouville-form pair of geodesically equivalent surfaces with
/// non-constant curvature: g = (U - V)(du^2 + dv^2) and
/// gbar = (1/V - 1/U)(du^2/U + dv^2/V), here with U = 3 + x1, V = 1 + x2^2.
struct DiniPair {
  MetricField g;
  MetricField gbar;
};

inline DiniPair dini_pair() {
  Chart chart = box_chart(2);
  MetricField g = metric_from_strings(
      chart, {{"2 + x1 - x2^2", "0"}, {"0", "2 + x1 - x2^2"}}, "dini_g");
  MetricField gbar = metric_from_strings(
      chart,
      {{"(2 + x1 - x2^2)/((3 + x1)^2*(1 + x2^2))", "0"},
       {"0", "(2 + x1 - x2^2)/((3 + x1)*(1 + x2^2)^2)"}},
      "dini_gbar");
  return DiniPair{std::move(g), std::move(gbar)};
}

/// Generic n=3 metric with no geodesic mapping partner.
inline MetricField obstruction3() {
  return metric_from_strings(box_chart(3),
                             {{"1", "0", "0"},
                              {"0", "1 + x1^2", "0"},
                              {"0", "0", "1 + x2^2"}},
                             "obstruction3");
}

/// Non-Einstein n=4 control, g = diag(1, 1 + x1^2, 1, 1).
inline MetricField non_einstein4() {
  return metric_from_strings(box_chart(4),
                             {{"1", "0", "0", "0"},
                              {"0", "1 + x1^2", "0", "0"},
                              {"0", "0", "1", "0"},
                              {"0", "0", "0", "1"}},
                             "noneinstein4");
}

inline Mat random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Mat b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = dist(rng);
  Mat a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += b(k, i) * b(k, j);
      a(i, j) = s + (i == j ? 0.5 : 0.0);
    }
  return a;
}

inline Mat random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Mat a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = dist(rng);
      a(i, j) = v;
      a(j, i) = v;
    }
  return a;
}

/// Central finite difference of a scalar function of one coordinate.
inline double fd_derivative(const std::function<double(const VecN&)>& f,
                            const VecN& p, int axis, double h) {
  VecN hi = p, lo = p;
  hi[axis] += h;
  lo[axis] -= h;
  return (f(hi) - f(lo)) / (2.0 * h);
}

} // namespace gmap::testutil

#endif
