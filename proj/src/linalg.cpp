#include "gmap/linalg.hpp"

#include <cmath>

namespace gmap {

double determinant(const Mat& a) {
  int n = a.dim();
  Mat lu = a;
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
    if (lu(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(lu(pivot, c), lu(col, c));
      det = -det;
    }
    det *= lu(col, col);
    for (int r = col + 1; r < n; ++r) {
      double f = lu(r, col) / lu(col, col);
      for (int c = col; c < n; ++c) lu(r, c) -= f * lu(col, c);
    }
  }
  return det;
}

Mat inverse(const Mat& a) {
  int n = a.dim();
  Mat work = a;
  Mat inv = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    double p = work(pivot, col);
    if (p == 0.0 || !std::isfinite(p))
      throw SingularMatrixError("matrix is singular");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(work(pivot, c), work(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    double inv_p = 1.0 / work(col, col);
    for (int c = 0; c < n; ++c) {
      work(col, c) *= inv_p;
      inv(col, c) *= inv_p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = work(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        work(r, c) -= f * work(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

} // namespace gmap
