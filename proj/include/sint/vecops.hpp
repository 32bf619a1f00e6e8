#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace sint {

/// Dense state vector over an arbitrary scalar (double in production,
/// extended precision in validation tests).
template <class S>
using Vec = std::vector<S>;

template <class S>
Vec<S> zeros(std::size_t n) {
  return Vec<S>(n, S(0));
}

template <class S>
void axpy_inplace(Vec<S>& y, const S& a, const Vec<S>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

template <class S>
Vec<S> axpy(const Vec<S>& y, const S& a, const Vec<S>& x) {
  Vec<S> r = y;
  axpy_inplace(r, a, x);
  return r;
}

template <class S>
Vec<S> scaled(const Vec<S>& x, const S& a) {
  Vec<S> r = x;
  for (auto& v : r) v *= a;
  return r;
}

template <class S>
S dot(const Vec<S>& a, const Vec<S>& b) {
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class S>
S norm_inf(const Vec<S>& x) {
  using std::abs;
  S m(0);
  for (const auto& v : x) {
    S a = abs(v);
    if (a > m) m = a;
  }
  return m;
}

template <class S>
S norm2(const Vec<S>& x) {
  using std::sqrt;
  return sqrt(dot(x, x));
}

template <class S>
S dist_inf(const Vec<S>& a, const Vec<S>& b) {
  using std::abs;
  S m(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    S d = abs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

template <class S>
S dist2(const Vec<S>& a, const Vec<S>& b) {
  using std::sqrt;
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    S d = a[i] - b[i];
    s += d * d;
  }
  return sqrt(s);
}

/// Row-major dense matrix, just enough for skew structures and tableaux.
template <class S>
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<S> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, S(0)) {}

  S& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  Vec<S> apply(const Vec<S>& x) const {
    Vec<S> y(rows, S(0));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) y[i] += data[i * cols + j] * x[j];
    return y;
  }
};

}  // namespace sint
