#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sint/errors.hpp"

namespace sint {

/// Gauss-Legendre nodes and weights on [0, 1], exact for polynomials of
/// degree 2n-1. Closed forms up to n = 5; entries are computed in the
/// target scalar type so extended-precision instantiations stay exact.
template <class S>
struct Quadrature {
  std::vector<S> nodes;
  std::vector<S> weights;
};

template <class S>
Quadrature<S> gauss_legendre_01(int n) {
  using std::sqrt;
  const S half = S(1) / S(2);
  Quadrature<S> q;
  switch (n) {
    case 1:
      q.nodes = {half};
      q.weights = {S(1)};
      break;
    case 2: {
      const S r = sqrt(S(3)) / S(6);
      q.nodes = {half - r, half + r};
      q.weights = {half, half};
      break;
    }
    case 3: {
      const S r = sqrt(S(15)) / S(10);
      q.nodes = {half - r, half, half + r};
      q.weights = {S(5) / S(18), S(4) / S(9), S(5) / S(18)};
      break;
    }
    case 4: {
      const S a = sqrt(S(30));
      const S r1 = sqrt(S(3) / S(7) - S(2) / S(7) * sqrt(S(6) / S(5))) / S(2);
      const S r2 = sqrt(S(3) / S(7) + S(2) / S(7) * sqrt(S(6) / S(5))) / S(2);
      const S w1 = (S(18) + a) / S(72);
      const S w2 = (S(18) - a) / S(72);
      q.nodes = {half - r2, half - r1, half + r1, half + r2};
      q.weights = {w2, w1, w1, w2};
      break;
    }
    case 5: {
      const S a = sqrt(S(70));
      const S r1 = sqrt(S(5) - S(2) * sqrt(S(10) / S(7))) / S(6);
      const S r2 = sqrt(S(5) + S(2) * sqrt(S(10) / S(7))) / S(6);
      const S w0 = S(64) / S(225);
      const S w1 = (S(322) + S(13) * a) / S(1800);
      const S w2 = (S(322) - S(13) * a) / S(1800);
      q.nodes = {half - r2, half - r1, half, half + r1, half + r2};
      q.weights = {w2, w1, w0, w1, w2};
      break;
    }
    default:
      throw capability_error("Gauss-Legendre quadrature supports 1..5 points, got " +
                             std::to_string(n));
  }
  return q;
}

/// Monomial coefficients (ascending powers) of the Lagrange basis
/// polynomials for the given nodes.
template <class S>
std::vector<std::vector<S>> lagrange_basis(const std::vector<S>& nodes) {
  const std::size_t s = nodes.size();
  std::vector<std::vector<S>> basis;
  basis.reserve(s);
  for (std::size_t j = 0; j < s; ++j) {
    std::vector<S> c = {S(1)};
    for (std::size_t m = 0; m < s; ++m) {
      if (m == j) continue;
      // multiply by (x - nodes[m]) / (nodes[j] - nodes[m])
      std::vector<S> next(c.size() + 1, S(0));
      const S denom = nodes[j] - nodes[m];
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k] += c[k] * (-nodes[m]) / denom;
        next[k + 1] += c[k] / denom;
      }
      c = std::move(next);
    }
    basis.push_back(std::move(c));
  }
  return basis;
}

template <class S>
S poly_eval(const std::vector<S>& coeffs, const S& x) {
  S v(0);
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
  return v;
}

/// Integral of the polynomial from 0 to x.
template <class S>
S poly_integral(const std::vector<S>& coeffs, const S& x) {
  S v(0);
  for (std::size_t k = coeffs.size(); k-- > 0;) v = (v + coeffs[k] / S(k + 1)) * x;
  return v;
}

}  // namespace sint
