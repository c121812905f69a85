#pragma once

// Minimal dense square-matrix arithmetic for the (n+1)x(n+1) matrices of the
// group layer. Row-major storage; determinants via LU with partial pivoting.

#include <cmath>
#include <vector>

#include "triform/common.hpp"

namespace triform {

class Mat {
 public:
  Mat() = default;
  explicit Mat(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

  static Mat identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  Mat transposed() const {
    Mat t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Mat operator*(const Mat& x, const Mat& y) {
    Mat z(x.n_);
    for (int i = 0; i < x.n_; ++i)
      for (int k = 0; k < x.n_; ++k) {
        double xik = x(i, k);
        if (xik == 0.0) continue;
        for (int j = 0; j < x.n_; ++j) z(i, j) += xik * y(k, j);
      }
    return z;
  }

  std::vector<double> apply(const std::vector<double>& v) const {
    std::vector<double> w(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
      w[i] = s;
    }
    return w;
  }

  double determinant() const {
    Mat lu = *this;
    double det = 1.0;
    for (int c = 0; c < n_; ++c) {
      int p = c;
      for (int r = c + 1; r < n_; ++r)
        if (std::abs(lu(r, c)) > std::abs(lu(p, c))) p = r;
      if (lu(p, c) == 0.0) return 0.0;
      if (p != c) {
        for (int j = 0; j < n_; ++j) std::swap(lu(p, j), lu(c, j));
        det = -det;
      }
      det *= lu(c, c);
      for (int r = c + 1; r < n_; ++r) {
        double f = lu(r, c) / lu(c, c);
        for (int j = c; j < n_; ++j) lu(r, j) -= f * lu(c, j);
      }
    }
    return det;
  }

  double max_abs_diff(const Mat& other) const {
    double m = 0.0;
    for (size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - other.a_[i]));
    return m;
  }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline std::vector<double> scaled(std::vector<double> a, double c) {
  for (auto& e : a) e *= c;
  return a;
}

inline std::vector<double> axpy(double c, const std::vector<double>& x,
                                std::vector<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
  return y;
}

// Orthonormal matrix from Gram-Schmidt on the columns of a seeded Gaussian
// matrix, with the determinant sign fixed to +1 by flipping the last column.
inline Mat random_special_orthogonal(int n, SeededRng& rng) {
  std::vector<std::vector<double>> cols(n);
  for (int c = 0; c < n; ++c) {
    std::vector<double> v;
    double len = 0.0;
    do {
      v = rng.gaussian_vector(n);
      for (int p = 0; p < c; ++p) v = axpy(-dot(v, cols[p]), cols[p], v);
      len = norm(v);
    } while (len < 1e-8);  // regenerate on near-dependence
    cols[c] = scaled(v, 1.0 / len);
  }
  Mat q(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = cols[j][i];
  if (q.determinant() < 0.0)
    for (int i = 0; i < n; ++i) q(i, n - 1) = -q(i, n - 1);
  return q;
}

}  // namespace triform
