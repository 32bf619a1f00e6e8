#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sint/bseries.hpp"
#include "sint/steppers.hpp"
#include "sint/vecops.hpp"

namespace sint {

// ---------------------------------------------------------------------------
// Scalar-generic vector fields. The production problems instantiate these at
// double; validation tests re-instantiate them in extended precision.
// ---------------------------------------------------------------------------

/// Free rigid body: f(X) = X x (M X) with M = diag(1/I). f is a quadratic
/// form, so f'' is a constant bilinear map and all higher derivatives vanish.
template <class S>
DerivativeOracle<S> rigid_body_oracle(const std::array<S, 3>& inertia, int k_max = 6) {
  const std::array<S, 3> m = {S(1) / inertia[0], S(1) / inertia[1], S(1) / inertia[2]};
  auto cross = [](const Vec<S>& a, const Vec<S>& b) {
    return Vec<S>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                  a[0] * b[1] - a[1] * b[0]};
  };
  auto apply_m = [m](const Vec<S>& v) { return Vec<S>{m[0] * v[0], m[1] * v[1], m[2] * v[2]}; };
  // symmetric bilinear part: q(u, v) with f(x) = q(x, x)
  auto q = [cross, apply_m](const Vec<S>& u, const Vec<S>& v) {
    const Vec<S> a = cross(u, apply_m(v));
    const Vec<S> b = cross(v, apply_m(u));
    return Vec<S>{(a[0] + b[0]) / S(2), (a[1] + b[1]) / S(2), (a[2] + b[2]) / S(2)};
  };
  DerivativeOracle<S> oracle;
  oracle.dim = 3;
  oracle.f = [cross, apply_m](const Vec<S>& x) { return cross(x, apply_m(x)); };
  oracle.contractions.push_back([q](const Vec<S>& x, const std::vector<Vec<S>>& vs) {
    return scaled(q(x, vs[0]), S(2));
  });
  oracle.contractions.push_back([q](const Vec<S>&, const std::vector<Vec<S>>& vs) {
    return scaled(q(vs[0], vs[1]), S(2));
  });
  for (int k = 3; k <= k_max; ++k)
    oracle.contractions.push_back(
        [](const Vec<S>&, const std::vector<Vec<S>>&) { return Vec<S>(3, S(0)); });
  return oracle;
}

template <class S>
PoissonStructure<S> rigid_body_structure(const std::array<S, 3>& inertia) {
  PoissonStructure<S> ps;
  ps.B = [](const Vec<S>& x) {
    Mat<S> B(3, 3);
    B(0, 1) = -x[2];
    B(0, 2) = x[1];
    B(1, 0) = x[2];
    B(1, 2) = -x[0];
    B(2, 0) = -x[1];
    B(2, 1) = x[0];
    return B;
  };
  ps.grad_H = [inertia](const Vec<S>& x) {
    return Vec<S>{x[0] / inertia[0], x[1] / inertia[1], x[2] / inertia[2]};
  };
  return ps;
}

template <class S>
S rigid_body_hamiltonian(const std::array<S, 3>& inertia, const Vec<S>& x) {
  return (x[0] * x[0] / inertia[0] + x[1] * x[1] / inertia[1] + x[2] * x[2] / inertia[2]) / S(2);
}

template <class S>
S rigid_body_casimir(const Vec<S>& x) {
  return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
}

/// Harmonic-oscillator Hamiltonian system ("Kubo oscillator"):
/// f(x) = (-x2, x1), a linear field.
template <class S>
DerivativeOracle<S> kubo_oracle(int k_max = 6) {
  DerivativeOracle<S> oracle;
  oracle.dim = 2;
  oracle.f = [](const Vec<S>& x) { return Vec<S>{-x[1], x[0]}; };
  oracle.contractions.push_back([](const Vec<S>&, const std::vector<Vec<S>>& vs) {
    return Vec<S>{-vs[0][1], vs[0][0]};
  });
  for (int k = 2; k <= k_max; ++k)
    oracle.contractions.push_back(
        [](const Vec<S>&, const std::vector<Vec<S>>&) { return Vec<S>(2, S(0)); });
  return oracle;
}

// ---------------------------------------------------------------------------
// Double-precision problem descriptors.
// ---------------------------------------------------------------------------

using DVec = Vec<double>;
using DField = Field<double>;

struct Observable {
  std::string name;
  std::function<double(const DVec&)> g;
  /// Closed-form E[g(X(T))] given the driver parameters; absent when no
  /// analytic target exists.
  std::function<double(int lambda, double sigma, double T, const DVec& x0)> expectation;
};

struct RigidBodyParams {
  double I1 = 0.345, I2 = 0.653, I3 = 1.0;
};

/// Immutable problem descriptor: the vector field with its derivative
/// oracle, optional Poisson structure, named invariants, exact flow of the
/// deterministic ODE, and analytic weak observables.
struct Problem {
  std::string name;
  int dim = 0;
  DVec x0;
  DerivativeOracle<double> oracle;
  MatrixField<double> poisson_B;  // empty when no Poisson structure
  DField grad_H;
  std::vector<std::pair<std::string, std::function<double(const DVec&)>>> invariants;
  /// Deterministic flow of dy/dt = f(y) at signed time s; empty means
  /// "use exact_flow_reference". May throw blow_up_error.
  std::function<DVec(const DVec&, double)> exact_flow;
  std::vector<Observable> observables;
  /// Driver sigma implied by the problem's own noise coefficient (fatigue
  /// folds b into sigma = b/a); unset elsewhere.
  std::optional<double> recommended_sigma;

  bool has_poisson() const { return static_cast<bool>(poisson_B); }
  std::function<double(const DVec&)> invariant(const std::string& name) const;
};

Problem make_rigid_body(const RigidBodyParams& params, DVec x0 = {0.8, 0.6, 0.0});
Problem make_kubo(DVec x0 = {1.0, 0.0});
Problem make_fatigue(double a, double b, double p, double x0);

/// Problem registry: "rigid-body", "kubo", "fatigue" with named parameters;
/// unknown names or parameters raise config_error.
Problem make_problem(const std::string& name,
                     const std::vector<std::pair<std::string, double>>& params = {},
                     const DVec& x0_override = {});

/// Certified deterministic flow of dy/dt = f(y) to signed time s: Gauss s=3
/// collocation at a fixed substep, accepted only when halving the substep
/// changes the result by less than the tolerance.
DVec exact_flow_reference(const Problem& problem, const DVec& x0, double s,
                          double tolerance = 1e-12);

/// problem.exact_flow when present, otherwise exact_flow_reference.
DVec flow_at(const Problem& problem, const DVec& x0, double s, double tolerance = 1e-12);

}  // namespace sint
