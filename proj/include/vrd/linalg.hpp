#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vrd/rng.hpp"

namespace vrd {

using Vec = std::vector<double>;

// Dense row-major matrix. All accumulations below run in index order so the
// results are reproducible bit-for-bit and can be compared exactly against
// the serial reference paths.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  std::span<double> row(int r) { return {a.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
  std::span<const double> row(int r) const {
    return {a.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }

  void fill(double v) { std::fill(a.begin(), a.end(), v); }
};

inline double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// y = M x
inline Vec matvec(const Mat& m, std::span<const double> x) {
  assert(static_cast<int>(x.size()) == m.cols);
  Vec y(m.rows, 0.0);
  for (int r = 0; r < m.rows; ++r) y[r] = dot(m.row(r), x);
  return y;
}

// y += M^T g
inline void matvec_transpose_acc(const Mat& m, std::span<const double> g, std::span<double> y) {
  assert(static_cast<int>(g.size()) == m.rows);
  assert(static_cast<int>(y.size()) == m.cols);
  for (int r = 0; r < m.rows; ++r) {
    const double gr = g[r];
    const auto row = m.row(r);
    for (int c = 0; c < m.cols; ++c) y[c] += gr * row[c];
  }
}

// G += g x^T
inline void outer_acc(Mat& grad, std::span<const double> g, std::span<const double> x) {
  assert(static_cast<int>(g.size()) == grad.rows);
  assert(static_cast<int>(x.size()) == grad.cols);
  for (int r = 0; r < grad.rows; ++r) {
    const double gr = g[r];
    auto row = grad.row(r);
    for (int c = 0; c < grad.cols; ++c) row[c] += gr * x[c];
  }
}

inline void acc(std::span<double> y, std::span<const double> x) {
  assert(y.size() == x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] += x[i];
}

// Affine map y = W x + b. Used both as a parameter block and as its own
// gradient container (same shapes).
struct Affine {
  Mat w;
  Vec b;

  Affine() = default;
  Affine(int out_dim, int in_dim) : w(out_dim, in_dim), b(out_dim, 0.0) {}

  int in_dim() const { return w.cols; }
  int out_dim() const { return w.rows; }

  Vec forward(std::span<const double> x) const {
    Vec y = matvec(w, x);
    for (int r = 0; r < w.rows; ++r) y[r] += b[r];
    return y;
  }

  // Accumulates parameter gradients for output gradient `dy` at input `x`
  // and adds the input gradient into `dx` (when non-empty).
  void backward(std::span<const double> x, std::span<const double> dy, Affine& grad,
                std::span<double> dx = {}) const {
    outer_acc(grad.w, dy, x);
    acc(grad.b, dy);
    if (!dx.empty()) matvec_transpose_acc(w, dy, dx);
  }

  void zero() {
    w.fill(0.0);
    std::fill(b.begin(), b.end(), 0.0);
  }

  // Uniform init in [-s, s] with s = 1/sqrt(fan_in).
  static Affine init(int out_dim, int in_dim, Rng& rng) {
    Affine layer(out_dim, in_dim);
    const double s = 1.0 / std::sqrt(static_cast<double>(in_dim));
    for (double& v : layer.w.a) v = rng.uniform(-s, s);
    for (double& v : layer.b) v = rng.uniform(-s, s);
    return layer;
  }
};

// Named view over a contiguous block of parameters; the unit gradient
// checks and the optimizer both walk models through these.
struct ParamRef {
  std::string name;
  double* data;
  size_t size;
};

inline void collect_affine(std::vector<ParamRef>& out, const std::string& prefix, Affine& layer) {
  out.push_back({prefix + ".W", layer.w.a.data(), layer.w.a.size()});
  out.push_back({prefix + ".b", layer.b.data(), layer.b.size()});
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace vrd
