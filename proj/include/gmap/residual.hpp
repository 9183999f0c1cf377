#ifndef GMAP_RESIDUAL_HPP
#define GMAP_RESIDUAL_HPP

#include <cmath>
#include <string>

#include "gmap/linalg.hpp"
#include "gmap/metric.hpp"

namespace gmap {

/// Grid summary of one tensor equation: max-norm over all components and
/// points, RMS, and the pass verdict (pass means max below tolerance).
struct ResidualReport {
  std::string equation;
  Backend backend = Backend::Analytic;
  double tolerance = 0.0;
  int points = 0;
  double max_abs = 0.0;
  double rms = 0.0;
  VecN argmax_point;
  bool pass = false;
};

/// Streaming max/RMS reduction for residual components.
class ResidualAccumulator {
public:
  explicit ResidualAccumulator(std::string equation, Backend backend, double tol)
      : equation_(std::move(equation)), backend_(backend), tol_(tol) {}

  void add(double value, const VecN& point) {
    double a = std::abs(value);
    if (a > max_abs_) {
      max_abs_ = a;
      argmax_ = point;
    }
    sum_sq_ += value * value;
    ++count_;
  }

  void add_point() { ++points_; }

  ResidualReport finish() const {
    ResidualReport r;
    r.equation = equation_;
    r.backend = backend_;
    r.tolerance = tol_;
    r.points = points_;
    r.max_abs = max_abs_;
    r.rms = count_ ? std::sqrt(sum_sq_ / static_cast<double>(count_)) : 0.0;
    r.argmax_point = argmax_;
    r.pass = max_abs_ < tol_;
    return r;
  }

private:
  std::string equation_;
  Backend backend_;
  double tol_ = 0.0;
  int points_ = 0;
  double max_abs_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t count_ = 0;
  VecN argmax_;
};

/// Default residual tolerance per derivative backend.
inline double default_tolerance(Backend b) {
  return b == Backend::Analytic ? 1e-8 : 1e-4;
}

} // namespace gmap

#endif
