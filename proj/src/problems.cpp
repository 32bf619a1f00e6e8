#include "sint/problems.hpp"

#include <cmath>

#include "sint/errors.hpp"

namespace sint {

std::function<double(const DVec&)> Problem::invariant(const std::string& invariant_name) const {
  for (const auto& [n, fn] : invariants)
    if (n == invariant_name) return fn;
  throw capability_error("problem '" + name + "' has no invariant named '" + invariant_name + "'");
}

Problem make_rigid_body(const RigidBodyParams& params, DVec x0) {
  if (params.I1 <= 0 || params.I2 <= 0 || params.I3 <= 0)
    throw config_error("rigid body moments of inertia must be positive");
  const std::array<double, 3> inertia = {params.I1, params.I2, params.I3};
  Problem p;
  p.name = "rigid-body";
  p.dim = 3;
  p.x0 = std::move(x0);
  p.oracle = rigid_body_oracle<double>(inertia);
  auto structure = rigid_body_structure<double>(inertia);
  p.poisson_B = structure.B;
  p.grad_H = structure.grad_H;
  p.invariants.emplace_back(
      "H", [inertia](const DVec& x) { return rigid_body_hamiltonian<double>(inertia, x); });
  p.invariants.emplace_back("C", [](const DVec& x) { return rigid_body_casimir<double>(x); });
  // No closed-form flow shipped; flow_at falls back to the certified reference.
  return p;
}

Problem make_kubo(DVec x0) {
  Problem p;
  p.name = "kubo";
  p.dim = 2;
  p.x0 = std::move(x0);
  p.oracle = kubo_oracle<double>();
  p.poisson_B = [](const DVec&) {
    Mat<double> B(2, 2);
    B(0, 1) = -1.0;
    B(1, 0) = 1.0;
    return B;
  };
  p.grad_H = [](const DVec& x) { return x; };
  p.invariants.emplace_back("H",
                            [](const DVec& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); });
  p.invariants.emplace_back("C", [](const DVec& x) { return x[0] * x[0] + x[1] * x[1]; });
  p.exact_flow = [](const DVec& x, double s) {
    return DVec{x[0] * std::cos(s) - x[1] * std::sin(s), x[0] * std::sin(s) + x[1] * std::cos(s)};
  };
  // Second moments of the rotation at the Gaussian random time mu(T):
  // E cos(2 mu) = exp(-2 sigma^2 T) cos(2 lambda T), likewise for sin.
  auto second_moment = [](int which) {
    return [which](int lambda, double sigma, double T, const DVec& x0) {
      const double damp = std::exp(-2.0 * sigma * sigma * T);
      const double co = std::cos(2.0 * lambda * T), si = std::sin(2.0 * lambda * T);
      const double a = x0[0] * x0[0] - x0[1] * x0[1];
      const double b = 2.0 * x0[0] * x0[1];
      const double mean_sq = 0.5 * (x0[0] * x0[0] + x0[1] * x0[1]);
      switch (which) {
        case 0:  // E[X1^2]
          return mean_sq + 0.5 * damp * (a * co - b * si);
        case 1:  // E[X2^2]
          return mean_sq - 0.5 * damp * (a * co - b * si);
        default:  // E[X1 X2]
          return 0.5 * damp * (a * si + b * co);
      }
    };
  };
  p.observables.push_back({"X1_sq", [](const DVec& x) { return x[0] * x[0]; }, second_moment(0)});
  p.observables.push_back({"X2_sq", [](const DVec& x) { return x[1] * x[1]; }, second_moment(1)});
  p.observables.push_back({"X1X2", [](const DVec& x) { return x[0] * x[1]; }, second_moment(2)});
  return p;
}

Problem make_fatigue(double a, double b, double p_exp, double x0) {
  if (p_exp <= 1.0) throw config_error("fatigue exponent p must exceed 1");
  if (x0 <= 0.0) throw config_error("fatigue initial state must be positive");
  if (a == 0.0) throw config_error("fatigue drift coefficient a must be nonzero");
  Problem p;
  p.name = "fatigue";
  p.dim = 1;
  p.x0 = {x0};
  p.recommended_sigma = b / a;
  p.oracle.dim = 1;
  p.oracle.f = [a, p_exp](const DVec& x) { return DVec{a * std::pow(x[0], p_exp)}; };
  for (int k = 1; k <= 6; ++k) {
    p.oracle.contractions.push_back(
        [a, p_exp, k](const DVec& x, const std::vector<DVec>& vs) {
          double falling = 1.0;
          for (int i = 0; i < k; ++i) falling *= p_exp - i;
          double v = a * falling * std::pow(x[0], p_exp - k);
          for (const auto& arg : vs) v *= arg[0];
          return DVec{v};
        });
  }
  p.exact_flow = [a, p_exp, x0](const DVec& x, double s) {
    const double base = std::pow(x[0], 1.0 - p_exp) - (p_exp - 1.0) * a * s;
    if (base <= 0.0)
      throw blow_up_error("fatigue solution explodes before random time " + std::to_string(s));
    return DVec{std::pow(base, 1.0 / (1.0 - p_exp))};
  };
  return p;
}

Problem make_problem(const std::string& name,
                     const std::vector<std::pair<std::string, double>>& params,
                     const DVec& x0_override) {
  auto get = [&params](const std::string& key, double fallback) {
    for (const auto& [k, v] : params)
      if (k == key) return v;
    return fallback;
  };
  auto check_keys = [&params, &name](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : params) {
      (void)v;
      bool known = false;
      for (const char* a : allowed)
        if (k == a) known = true;
      if (!known)
        throw config_error("unknown parameter '" + k + "' for problem '" + name + "'");
    }
  };
  if (name == "rigid-body") {
    check_keys({"I1", "I2", "I3"});
    RigidBodyParams rb;
    rb.I1 = get("I1", rb.I1);
    rb.I2 = get("I2", rb.I2);
    rb.I3 = get("I3", rb.I3);
    DVec x0 = x0_override.empty() ? DVec{0.8, 0.6, 0.0} : x0_override;
    if (x0.size() != 3) throw config_error("rigid-body initial state must have 3 components");
    return make_rigid_body(rb, std::move(x0));
  }
  if (name == "kubo") {
    check_keys({});
    DVec x0 = x0_override.empty() ? DVec{1.0, 0.0} : x0_override;
    if (x0.size() != 2) throw config_error("kubo initial state must have 2 components");
    return make_kubo(std::move(x0));
  }
  if (name == "fatigue") {
    check_keys({"a", "b", "p"});
    const double x0 = x0_override.empty() ? 0.5 : x0_override[0];
    if (!x0_override.empty() && x0_override.size() != 1)
      throw config_error("fatigue initial state must have 1 component");
    return make_fatigue(get("a", 1.0), get("b", 0.1), get("p", 2.0), x0);
  }
  throw config_error("unknown problem '" + name + "'");
}

DVec exact_flow_reference(const Problem& problem, const DVec& x0, double s, double tolerance) {
  if (s == 0.0) return x0;
  static const ButcherTableau<double> gauss3 = gauss_tableau<double>(3);
  SolverSettings settings;
  settings.tolerance = 1e-14;
  settings.max_iterations = 200;
  const auto& f = problem.oracle.f;
  auto integrate = [&](int n) {
    DVec y = x0;
    const double h = s / n;
    for (int i = 0; i < n; ++i) y = rk_step<double>(gauss3, f, y, h, settings);
    return y;
  };
  int n = std::max(8, static_cast<int>(std::ceil(std::abs(s) / 0.02)));
  DVec prev = integrate(n);
  for (int halving = 0; halving < 12; ++halving) {
    n *= 2;
    DVec next = integrate(n);
    if (dist_inf(next, prev) < tolerance) return next;
    prev = std::move(next);
  }
  throw reference_accuracy_error("flow reference did not certify tolerance " +
                                 std::to_string(tolerance) + " at time " + std::to_string(s));
}

DVec flow_at(const Problem& problem, const DVec& x0, double s, double tolerance) {
  if (problem.exact_flow) return problem.exact_flow(x0, s);
  return exact_flow_reference(problem, x0, s, tolerance);
}

}  // namespace sint
