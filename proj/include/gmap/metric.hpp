#ifndef GMAP_METRIC_HPP
#define GMAP_METRIC_HPP

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gmap/chart.hpp"
#include "gmap/expr.hpp"
#include "gmap/linalg.hpp"

namespace gmap {

enum class Backend { Analytic, FiniteDifference };

std::string backend_name(Backend b);
Backend backend_from_name(const std::string& name);

/// Pointwise values of g, its inverse and determinant, and partial
/// derivatives of g up to the requested order. Derivative index blocks are
/// symmetric both in the metric indices and in the derivative indices.
struct MetricJet {
  int n = 0;
  int order = 0;
  VecN point;
  Mat g;
  Mat ginv;
  double detg = 0.0;
  Tensor3 dg;    // dg(i,j,k)       = d_k g_ij
  Tensor4 d2g;   // d2g(i,j,k,l)    = d_l d_k g_ij
  Tensor5 d3g;   // d3g(i,j,k,l,m)  = d_m d_l d_k g_ij, present for order 3
};

/// Anything that can produce metric jets at chart points. The main
/// implementation is MetricField (symbolic components); the Sinyukov solver
/// also exposes reconstructed metrics through this interface.
class MetricSource {
public:
  virtual ~MetricSource() = default;
  virtual const Chart& chart() const = 0;
  virtual MetricJet jet(std::span<const double> p, int order, Backend backend) const = 0;
  int dim() const { return chart().dim(); }
};

/// Symmetric metric with components given as expressions over the chart
/// coordinates. Symbolic partial derivatives are cached lazily; instances
/// are safe to share across threads once constructed.
class MetricField : public MetricSource {
public:
  /// `components` is a full n-by-n expression table; it must be symmetric
  /// (same expression object or equal structure for (i,j) and (j,i)).
  MetricField(Chart chart, std::vector<std::vector<ExprPtr>> components,
              std::string name = "");

  const Chart& chart() const override { return chart_; }
  const std::string& name() const { return name_; }

  const ExprPtr& component(int i, int j) const {
    return components_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  /// Symbolic derivative of g_ij by the (unordered) derivative indices.
  ExprPtr derivative(int i, int j, std::span<const int> dindices) const;

  Mat value(std::span<const double> p) const;

  MetricJet jet(std::span<const double> p, int order, Backend backend) const override;

private:
  MetricJet analytic_jet(std::span<const double> p, int order) const;
  MetricJet fd_jet(std::span<const double> p, int order) const;
  void finish_jet(MetricJet& jet) const;

  struct DerivativeCache {
    std::mutex mutex;
    std::map<std::vector<int>, ExprPtr> entries;
  };

  Chart chart_;
  std::vector<std::vector<ExprPtr>> components_;
  std::string name_;
  std::shared_ptr<DerivativeCache> cache_;  // shared across copies
};

/// Jet of `m` at `p`, filled to `order` (0..3).
MetricJet metric_jet(const MetricSource& m, std::span<const double> p, int order,
                     Backend backend = Backend::Analytic);

/// Metric scaled by a nonzero constant, sharing the chart.
MetricField scaled_metric(const MetricField& m, double factor, std::string name = "");

} // namespace gmap

#endif
