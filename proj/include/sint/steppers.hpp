#pragma once

#include <cmath>
#include <functional>

#include "sint/errors.hpp"
#include "sint/quadrature.hpp"
#include "sint/tableau.hpp"
#include "sint/vecops.hpp"

namespace sint {

template <class S>
using Field = std::function<Vec<S>(const Vec<S>&)>;

template <class S>
using MatrixField = std::function<Mat<S>(const Vec<S>&)>;

/// Skew structure and Hamiltonian gradient of a Poisson system
/// x' = B(x) grad H(x).
template <class S>
struct PoissonStructure {
  MatrixField<S> B;
  Field<S> grad_H;
};

struct SolverSettings {
  double tolerance = 1e-13;
  int max_iterations = 100;
};

/// Plain fixed-point iteration y <- g(y) until the sup-norm update drops
/// below the tolerance. The initial guess is passed in by the caller; all
/// steppers use the current state (not a predictor) so that sign reversal of
/// the step stays symmetric.
template <class S>
Vec<S> solve_fixed_point(const std::function<Vec<S>(const Vec<S>&)>& g, Vec<S> guess,
                         const SolverSettings& settings, double step_size_hint = 0.0,
                         int* iterations_out = nullptr) {
  for (int it = 1; it <= settings.max_iterations; ++it) {
    Vec<S> next = g(guess);
    const S update = dist_inf(next, guess);
    guess = std::move(next);
    if (static_cast<double>(update) < settings.tolerance) {
      if (iterations_out) *iterations_out = it;
      return guess;
    }
  }
  throw nonconvergence_error("fixed-point iteration exceeded " +
                                 std::to_string(settings.max_iterations) + " iterations",
                             step_size_hint);
}

/// One Runge-Kutta step with (possibly random) step size dmu:
/// Y_i = x + dmu sum_j A_ij f(Y_j), result x + dmu sum_i b_i f(Y_i).
/// Explicit tableaux use a direct sweep, implicit ones fixed-point iteration
/// on the stacked stage vector.
template <class S>
Vec<S> rk_step(const ButcherTableau<S>& tab, const Field<S>& f, const Vec<S>& x, const S& dmu,
               const SolverSettings& settings = {}) {
  const int s = tab.stages;
  const std::size_t d = x.size();
  std::vector<Vec<S>> stage_f(s);
  if (tab.is_explicit) {
    for (int i = 0; i < s; ++i) {
      Vec<S> yi = x;
      for (int j = 0; j < i; ++j)
        if (tab.A(i, j) != S(0)) axpy_inplace(yi, dmu * tab.A(i, j), stage_f[j]);
      stage_f[i] = f(yi);
    }
  } else {
    auto g = [&](const Vec<S>& stacked) {
      std::vector<Vec<S>> fy(s);
      for (int i = 0; i < s; ++i)
        fy[i] = f(Vec<S>(stacked.begin() + i * d, stacked.begin() + (i + 1) * d));
      Vec<S> out(s * d);
      for (int i = 0; i < s; ++i) {
        Vec<S> yi = x;
        for (int j = 0; j < s; ++j)
          if (tab.A(i, j) != S(0)) axpy_inplace(yi, dmu * tab.A(i, j), fy[j]);
        for (std::size_t k = 0; k < d; ++k) out[i * d + k] = yi[k];
      }
      return out;
    };
    Vec<S> guess(s * d);
    for (int i = 0; i < s; ++i)
      for (std::size_t k = 0; k < d; ++k) guess[i * d + k] = x[k];
    const Vec<S> stages =
        solve_fixed_point<S>(g, std::move(guess), settings, static_cast<double>(dmu));
    for (int i = 0; i < s; ++i)
      stage_f[i] = f(Vec<S>(stages.begin() + i * d, stages.begin() + (i + 1) * d));
  }
  Vec<S> result = x;
  for (int i = 0; i < s; ++i) axpy_inplace(result, dmu * tab.b[i], stage_f[i]);
  return result;
}

/// Averaged-vector-field step: x1 = x + dmu * integral_0^1 f(x + t(x1-x)) dt,
/// the integral evaluated by Q-point Gauss-Legendre quadrature.
template <class S>
Vec<S> avf_step(const Field<S>& f, const Vec<S>& x, const S& dmu, int quadrature_points,
                const SolverSettings& settings = {}) {
  const Quadrature<S> q = gauss_legendre_01<S>(quadrature_points);
  auto g = [&](const Vec<S>& x1) {
    Vec<S> avg(x.size(), S(0));
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
      Vec<S> point = x;
      for (std::size_t i = 0; i < x.size(); ++i) point[i] += q.nodes[k] * (x1[i] - x[i]);
      axpy_inplace(avg, q.weights[k], f(point));
    }
    return axpy(x, dmu, avg);
  };
  return solve_fixed_point<S>(g, x, settings, static_cast<double>(dmu));
}

/// Energy-preserving collocation step of deterministic order 2s for a
/// Poisson system. Stage slopes D_i define the collocation polynomial
/// u(theta) = x + dmu sum_j D_j integral_0^theta ell_j, and satisfy
///   D_i = B(u(c_i)) (1/b_i) integral_0^1 ell_i(t) grad H(u(t)) dt
/// with Gauss nodes c_i, weights b_i and Q-point quadrature for the
/// integrals (exact for quadratic H when Q >= s). Returns u(1).
template <class S>
Vec<S> ep_step(const PoissonStructure<S>& structure, const Vec<S>& x, const S& dmu, int stages,
               int quadrature_points, const SolverSettings& settings = {}) {
  if (!structure.B || !structure.grad_H)
    throw capability_error("energy-preserving step needs a Poisson structure (B, grad H)");
  if (quadrature_points < stages)
    throw capability_error("energy-preserving step needs Q >= s quadrature points");
  const std::size_t d = x.size();
  const Quadrature<S> nodes = gauss_legendre_01<S>(stages);
  const Quadrature<S> quad = gauss_legendre_01<S>(quadrature_points);
  const auto basis = lagrange_basis<S>(nodes.nodes);

  // Integrated and evaluated Lagrange basis at collocation and quadrature points.
  Mat<S> int_at_c(stages, stages), int_at_q(quadrature_points, stages),
      val_at_q(quadrature_points, stages);
  for (int j = 0; j < stages; ++j) {
    for (int i = 0; i < stages; ++i) int_at_c(i, j) = poly_integral(basis[j], nodes.nodes[i]);
    for (int qp = 0; qp < quadrature_points; ++qp) {
      int_at_q(qp, j) = poly_integral(basis[j], quad.nodes[qp]);
      val_at_q(qp, j) = poly_eval(basis[j], quad.nodes[qp]);
    }
  }

  auto u_at = [&](const Vec<S>& slopes, const Mat<S>& integrals, int row) {
    Vec<S> u = x;
    for (int j = 0; j < stages; ++j)
      for (std::size_t k = 0; k < d; ++k) u[k] += dmu * integrals(row, j) * slopes[j * d + k];
    return u;
  };

  auto g = [&](const Vec<S>& slopes) {
    std::vector<Vec<S>> grads(quadrature_points);
    for (int qp = 0; qp < quadrature_points; ++qp)
      grads[qp] = structure.grad_H(u_at(slopes, int_at_q, qp));
    Vec<S> out(stages * d);
    for (int i = 0; i < stages; ++i) {
      Vec<S> avg(d, S(0));
      for (int qp = 0; qp < quadrature_points; ++qp)
        axpy_inplace(avg, quad.weights[qp] * val_at_q(qp, i) / nodes.weights[i], grads[qp]);
      const Vec<S> di = structure.B(u_at(slopes, int_at_c, i)).apply(avg);
      for (std::size_t k = 0; k < d; ++k) out[i * d + k] = di[k];
    }
    return out;
  };

  const Vec<S> slopes = solve_fixed_point<S>(g, Vec<S>(stages * d, S(0)), settings,
                                             static_cast<double>(dmu));
  Vec<S> result = x;
  for (int i = 0; i < stages; ++i)
    for (std::size_t k = 0; k < d; ++k) result[k] += dmu * nodes.weights[i] * slopes[i * d + k];
  return result;
}

/// Mollifier: 0 for r <= 0, exp(-1/r) for r > 0. Smooth with all
/// derivatives vanishing at 0.
template <class S>
S mollifier(const S& r) {
  using std::exp;
  if (r <= S(0)) return S(0);
  return exp(S(-1) / r);
}

/// Scalar factor of the cutoff field: 1 where C(x) <= 2 C0, 0 where
/// C(x) >= 4 C0, smooth in between. The two mollifier arguments sum to
/// 2 C0 > 0, so the denominator never vanishes.
template <class S>
S cutoff_scale(const S& casimir_value, const S& c0) {
  const S hi = mollifier(S(4) * c0 - casimir_value);
  const S lo = mollifier(casimir_value - S(2) * c0);
  return hi / (lo + hi);
}

/// Wraps f into the bounded field f~(x) = f(x) * cutoff_scale(C(x), C0).
template <class S>
Field<S> build_cutoff_field(Field<S> f, std::function<S(const Vec<S>&)> casimir, const S& c0) {
  return [f = std::move(f), casimir = std::move(casimir), c0](const Vec<S>& x) {
    return scaled(f(x), cutoff_scale(casimir(x), c0));
  };
}

}  // namespace sint
