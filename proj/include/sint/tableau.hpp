#pragma once

#include <cmath>
#include <string>

#include "sint/errors.hpp"
#include "sint/quadrature.hpp"
#include "sint/trees.hpp"
#include "sint/vecops.hpp"

namespace sint {

/// Runge-Kutta coefficients. The row-sum convention c_i = sum_j A_ij is
/// enforced at construction; is_explicit is derived from the sparsity of A.
template <class S>
struct ButcherTableau {
  int stages = 0;
  Mat<S> A;
  Vec<S> b;
  Vec<S> c;
  bool is_explicit = false;

  ButcherTableau() = default;
  ButcherTableau(Mat<S> a, Vec<S> bw, Vec<S> cn)
      : stages(static_cast<int>(bw.size())), A(std::move(a)), b(std::move(bw)), c(std::move(cn)) {
    using std::abs;
    is_explicit = true;
    for (int i = 0; i < stages; ++i) {
      S row(0);
      for (int j = 0; j < stages; ++j) {
        row += A(i, j);
        if (j >= i && A(i, j) != S(0)) is_explicit = false;
      }
      if (static_cast<double>(abs(row - c[i])) > 1e-14)
        throw config_error("tableau row sum differs from abscissa at stage " + std::to_string(i));
    }
  }
};

template <class S>
ButcherTableau<S> euler_tableau() {
  Mat<S> A(1, 1);
  return ButcherTableau<S>(A, {S(1)}, {S(0)});
}

template <class S>
ButcherTableau<S> heun_tableau() {
  Mat<S> A(2, 2);
  A(1, 0) = S(1);
  return ButcherTableau<S>(A, {S(1) / S(2), S(1) / S(2)}, {S(0), S(1)});
}

template <class S>
ButcherTableau<S> rk4_tableau() {
  Mat<S> A(4, 4);
  const S half = S(1) / S(2);
  A(1, 0) = half;
  A(2, 1) = half;
  A(3, 2) = S(1);
  return ButcherTableau<S>(A, {S(1) / S(6), S(1) / S(3), S(1) / S(3), S(1) / S(6)},
                           {S(0), half, half, S(1)});
}

/// Gauss collocation with s stages (s = 1 is the implicit midpoint rule):
/// A_ij is the integral of the j-th Lagrange basis polynomial from 0 to c_i.
template <class S>
ButcherTableau<S> gauss_tableau(int stages) {
  const Quadrature<S> q = gauss_legendre_01<S>(stages);
  const auto basis = lagrange_basis<S>(q.nodes);
  Mat<S> A(stages, stages);
  for (int i = 0; i < stages; ++i)
    for (int j = 0; j < stages; ++j) A(i, j) = poly_integral(basis[j], q.nodes[i]);
  return ButcherTableau<S>(A, q.weights, q.nodes);
}

/// Classical elementary-weight recursion: Phi(empty) = 1,
/// Phi_i([t1..tk]) = prod_k sum_j A_ij Phi_j(t_k), Phi(tau) = sum_i b_i Phi_i.
template <class S>
S elementary_weight(const ButcherTableau<S>& tab, const RootedTree& tau) {
  if (tau.is_empty) return S(1);
  struct Helper {
    const ButcherTableau<S>& tab;
    Vec<S> stage_weights(const RootedTree& t) const {
      const int s = tab.stages;
      Vec<S> phi(s, S(1));
      for (const auto& child : t.children) {
        const Vec<S> phi_child = stage_weights(child);
        for (int i = 0; i < s; ++i) {
          S acc(0);
          for (int j = 0; j < s; ++j) acc += tab.A(i, j) * phi_child[j];
          phi[i] *= acc;
        }
      }
      return phi;
    }
  } helper{tab};
  const Vec<S> phi = helper.stage_weights(tau);
  S w(0);
  for (int i = 0; i < tab.stages; ++i) w += tab.b[i] * phi[i];
  return w;
}

/// Deterministic and predicted stochastic order of a method.
struct OrderReport {
  int deterministic_order = 0;
  int stochastic_order = 0;      // floor(deterministic_order / 2)
  std::string failing_tree;      // first witness at order p_d + 1, if any
  double residual = 0.0;         // |Phi(tau) - 1/gamma(tau)| at the witness
};

inline constexpr double kOrderConditionTol = 1e-10;

/// Largest p <= n_max with |Phi(tau) - 1/gamma(tau)| <= 1e-10 on all trees
/// of order <= p; reports the first failing tree at p + 1 when p < n_max.
inline OrderReport detect_deterministic_order(const ButcherTableau<double>& tab, int n_max) {
  OrderReport report;
  const auto trees = enumerate_trees(n_max);
  int p = n_max;
  for (const auto& tau : trees) {
    const double residual =
        std::abs(elementary_weight(tab, tau) - 1.0 / static_cast<double>(gamma_density(tau)));
    if (residual > kOrderConditionTol) {
      p = rho(tau) - 1;
      report.failing_tree = to_string(tau);
      report.residual = residual;
      break;
    }
  }
  report.deterministic_order = p;
  report.stochastic_order = p / 2;
  return report;
}

}  // namespace sint
