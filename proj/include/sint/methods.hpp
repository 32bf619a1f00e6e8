#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sint/problems.hpp"
#include "sint/steppers.hpp"
#include "sint/tableau.hpp"

namespace sint {

/// Resolved one-step method over a concrete problem.
struct Stepper {
  std::string name;               // full registry name, e.g. "eps2.cutoff"
  std::string base;               // registry name without the cutoff suffix
  bool cutoff = false;
  bool symmetric = false;
  bool tableau_based = false;
  int deterministic_order = 0;
  std::function<DVec(const DVec&, double)> step;  // x, dmu -> next state
};

/// Registry names (without the ".cutoff" suffix).
std::vector<std::string> method_names();

bool is_known_method(const std::string& name);

/// Tableau of a Runge-Kutta registry entry; config_error for AVF/EP names.
ButcherTableau<double> tableau_by_name(const std::string& base_name);

/// Builds the stepping closure for a registry name over a problem. The
/// ".cutoff" suffix wraps every field evaluation (f for RK/AVF, grad H for
/// EP) with the mollifier factor anchored at C0 = C(x0). Q defaults to
/// max(s, 3) quadrature points for AVF/EP.
Stepper make_stepper(const std::string& name, const Problem& problem,
                     const SolverSettings& settings = {}, int quadrature_points = 0);

/// Order report for a tableau-based method; config_error otherwise.
OrderReport method_order_report(const std::string& base_name, int n_max = 8);

}  // namespace sint
