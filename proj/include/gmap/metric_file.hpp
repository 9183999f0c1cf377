#ifndef GMAP_METRIC_FILE_HPP
#define GMAP_METRIC_FILE_HPP

#include <filesystem>
#include <string>

#include "gmap/metric.hpp"

namespace gmap {

/// A metric specification loaded from disk: the field plus optional
/// metadata from the [meta] section.
struct MetricSpecFile {
  MetricField field;
  std::string name;
  std::string expected;  // free-form expected classification, may be empty
};

/// Load a metric from the line-oriented key-value format:
///
///   [meta]
///   name = sphere_gnomonic2
///   [chart]
///   dim = 2
///   coords = x1, x2
///   range x1 = -0.45 0.45
///   range x2 = -0.45 0.45
///   margin = 0.1
///   [metric]
///   g11 = "(1 + x2^2)/(1 + x1^2 + x2^2)^2"
///   g12 = "-(x1*x2)/(1 + x1^2 + x2^2)^2"
///   g22 = "(1 + x1^2)/(1 + x1^2 + x2^2)^2"
///
/// Only upper-triangle component keys are allowed; the lower triangle is
/// filled by symmetry and missing off-diagonal entries default to zero.
/// Errors carry file and line positions.
MetricSpecFile load_metric_spec(const std::filesystem::path& path);

} // namespace gmap

#endif
