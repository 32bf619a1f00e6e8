#include "sint/methods.hpp"

#include <algorithm>

#include "sint/errors.hpp"

namespace sint {

namespace {

struct MethodTraits {
  const char* name;
  int deterministic_order;
  bool symmetric;
  bool tableau;
  int ep_stages;  // 0 unless an EP(s) method
  bool avf;
};

constexpr MethodTraits kMethods[] = {
    {"euler", 1, false, true, 0, false},   {"heun", 2, false, true, 0, false},
    {"rk4", 4, false, true, 0, false},     {"midpoint", 2, true, true, 0, false},
    {"gauss2", 4, true, true, 0, false},   {"gauss3", 6, true, true, 0, false},
    {"avf", 2, true, false, 0, true},      {"eps1", 2, true, false, 1, false},
    {"eps2", 4, true, false, 2, false},    {"eps3", 6, true, false, 3, false},
};

const MethodTraits* find_traits(const std::string& base) {
  for (const auto& m : kMethods)
    if (base == m.name) return &m;
  return nullptr;
}

}  // namespace

std::vector<std::string> method_names() {
  std::vector<std::string> names;
  for (const auto& m : kMethods) names.emplace_back(m.name);
  return names;
}

bool is_known_method(const std::string& name) {
  std::string base = name;
  if (base.size() > 7 && base.ends_with(".cutoff")) base.resize(base.size() - 7);
  return find_traits(base) != nullptr;
}

ButcherTableau<double> tableau_by_name(const std::string& base_name) {
  if (base_name == "euler") return euler_tableau<double>();
  if (base_name == "heun") return heun_tableau<double>();
  if (base_name == "rk4") return rk4_tableau<double>();
  if (base_name == "midpoint") return gauss_tableau<double>(1);
  if (base_name == "gauss2") return gauss_tableau<double>(2);
  if (base_name == "gauss3") return gauss_tableau<double>(3);
  if (find_traits(base_name))
    throw config_error("method '" + base_name +
                       "' is not tableau-based; use the empirical convergence mode");
  throw config_error("unknown method '" + base_name + "'");
}

Stepper make_stepper(const std::string& name, const Problem& problem,
                     const SolverSettings& settings, int quadrature_points) {
  Stepper stepper;
  stepper.name = name;
  stepper.base = name;
  if (stepper.base.size() > 7 && stepper.base.ends_with(".cutoff")) {
    stepper.cutoff = true;
    stepper.base.resize(stepper.base.size() - 7);
  }
  const MethodTraits* traits = find_traits(stepper.base);
  if (!traits) throw config_error("unknown method '" + name + "'");
  stepper.symmetric = traits->symmetric;
  stepper.tableau_based = traits->tableau;
  stepper.deterministic_order = traits->deterministic_order;

  std::function<double(const DVec&)> cutoff_factor;
  if (stepper.cutoff) {
    const auto casimir = problem.invariant("C");
    const double c0 = casimir(problem.x0);
    if (c0 <= 0.0) throw config_error("cutoff wrapper needs C(x0) > 0");
    cutoff_factor = [casimir, c0](const DVec& x) {
      return cutoff_scale<double>(casimir(x), c0);
    };
  }

  if (traits->tableau || traits->avf) {
    Field<double> f = problem.oracle.f;
    if (cutoff_factor)
      f = [f, cutoff_factor](const DVec& x) { return scaled(f(x), cutoff_factor(x)); };
    if (traits->avf) {
      const int q = quadrature_points > 0 ? quadrature_points : 3;
      stepper.step = [f, q, settings](const DVec& x, double dmu) {
        return avf_step<double>(f, x, dmu, q, settings);
      };
    } else {
      const ButcherTableau<double> tab = tableau_by_name(stepper.base);
      stepper.step = [tab, f, settings](const DVec& x, double dmu) {
        return rk_step<double>(tab, f, x, dmu, settings);
      };
    }
    return stepper;
  }

  // EP(s): needs the Poisson structure.
  if (!problem.has_poisson())
    throw capability_error("method '" + name + "' needs a Poisson structure (B, grad H), which problem '" +
                           problem.name + "' does not expose");
  PoissonStructure<double> structure{problem.poisson_B, problem.grad_H};
  if (cutoff_factor) {
    const Field<double> grad = structure.grad_H;
    structure.grad_H = [grad, cutoff_factor](const DVec& x) {
      return scaled(grad(x), cutoff_factor(x));
    };
  }
  const int s = traits->ep_stages;
  const int q = quadrature_points > 0 ? quadrature_points : std::max(s, 3);
  stepper.step = [structure, s, q, settings](const DVec& x, double dmu) {
    return ep_step<double>(structure, x, dmu, s, q, settings);
  };
  return stepper;
}

OrderReport method_order_report(const std::string& base_name, int n_max) {
  return detect_deterministic_order(tableau_by_name(base_name), n_max);
}

}  // namespace sint
