#ifndef GMAP_LINALG_HPP
#define GMAP_LINALG_HPP

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "gmap/errors.hpp"

namespace gmap {

inline constexpr int kMaxDim = 6;

/// Fixed-capacity coordinate vector for chart dimensions up to kMaxDim.
struct VecN {
  int n = 0;
  std::array<double, kMaxDim> v{};

  VecN() = default;
  explicit VecN(int dim) : n(dim) { assert(dim >= 0 && dim <= kMaxDim); }
  VecN(std::initializer_list<double> init) : n(static_cast<int>(init.size())) {
    assert(n <= kMaxDim);
    int i = 0;
    for (double x : init) v[static_cast<std::size_t>(i++)] = x;
  }
  static VecN from(std::span<const double> p) {
    VecN out(static_cast<int>(p.size()));
    for (int i = 0; i < out.n; ++i) out.v[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
    return out;
  }

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  std::span<const double> span() const { return {v.data(), static_cast<std::size_t>(n)}; }

  double norm_inf() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs((*this)[i]));
    return m;
  }
  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += (*this)[i] * (*this)[i];
    return std::sqrt(s);
  }
};

inline VecN operator+(const VecN& a, const VecN& b) {
  VecN r(a.n);
  for (int i = 0; i < a.n; ++i) r[i] = a[i] + b[i];
  return r;
}
inline VecN operator-(const VecN& a, const VecN& b) {
  VecN r(a.n);
  for (int i = 0; i < a.n; ++i) r[i] = a[i] - b[i];
  return r;
}
inline VecN operator*(double s, const VecN& a) {
  VecN r(a.n);
  for (int i = 0; i < a.n; ++i) r[i] = s * a[i];
  return r;
}

/// Dense square matrix, dimension 2..6.
class Mat {
public:
  Mat() = default;
  explicit Mat(int n) : n_(n), v_{} { assert(n >= 0 && n <= kMaxDim); }

  static Mat identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int dim() const { return n_; }
  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(i * n_ + j)]; }
  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(i * n_ + j)]; }

  double norm_inf() const {
    double m = 0.0;
    for (int i = 0; i < n_ * n_; ++i) m = std::max(m, std::abs(v_[static_cast<std::size_t>(i)]));
    return m;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

private:
  int n_ = 0;
  std::array<double, kMaxDim * kMaxDim> v_{};
};

inline Mat operator*(const Mat& a, const Mat& b) {
  Mat r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < a.dim(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}
inline Mat operator+(const Mat& a, const Mat& b) {
  Mat r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}
inline Mat operator-(const Mat& a, const Mat& b) {
  Mat r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}
inline Mat operator*(double s, const Mat& a) {
  Mat r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r(i, j) = s * a(i, j);
  return r;
}

inline VecN operator*(const Mat& a, const VecN& x) {
  VecN r(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

double determinant(const Mat& a);

/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws SingularMatrixError when no usable pivot exists.
Mat inverse(const Mat& a);

/// Rank-k dense tensor with runtime dimension; indices each run 0..n-1.
template <int Rank>
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(int n) : n_(n) {
    std::size_t size = 1;
    for (int r = 0; r < Rank; ++r) size *= static_cast<std::size_t>(n);
    v_.assign(size, 0.0);
  }

  int dim() const { return n_; }

  template <typename... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return v_[flat(idx...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return v_[flat(idx...)];
  }

  double norm_inf() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

private:
  template <typename... I>
  std::size_t flat(I... idx) const {
    std::size_t f = 0;
    ((f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return f;
  }

  int n_ = 0;
  std::vector<double> v_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;
using Tensor5 = Tensor<5>;

} // namespace gmap

#endif
