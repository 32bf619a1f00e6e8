#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "sint/drivers.hpp"
#include "sint/methods.hpp"
#include "sint/problems.hpp"

namespace sint {

/// Full description of a convergence or drift experiment.
struct ExperimentConfig {
  std::string problem_name = "rigid-body";
  std::vector<std::pair<std::string, double>> problem_params;
  DVec x0;  // empty = problem default

  std::vector<std::string> methods;
  double T = 0.5;
  std::vector<double> step_sizes;
  int samples = 200;
  DriverConfig driver;

  enum class Reference { flow_oracle, fine_scheme };
  Reference reference = Reference::flow_oracle;
  std::string ref_method = "eps3";
  double ref_h = 6.103515625e-05;   // 2^-14
  double fine_h = 6.103515625e-05;  // fine grid step, 2^-14 as in the experiments

  std::vector<std::string> observables;  // weak mode; empty = all with closed forms
  std::vector<int> enum_steps;           // weak enumeration mode step counts
  long long enum_cap = 2000000;

  std::string output_path;
  // method name -> [min, max] acceptance band on the fitted slope
  std::vector<std::tuple<std::string, double, double>> slope_bands;

  SolverSettings solver;
  int threads = 1;
  double max_invalid_fraction = 0.01;
  double reference_tolerance = 1e-12;
};

struct ReportRow {
  std::string method;
  double h = 0.0;
  long long samples = 0;
  long long invalid = 0;
  std::optional<double> ms_error, ms_stderr;
  std::string weak_obs;
  std::optional<double> weak_error, weak_stderr;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of log-log fit residuals
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
  // (method, error family: "ms" or observable name, fit)
  std::vector<std::tuple<std::string, std::string, SlopeFit>> slopes;
};

/// Least-squares line through (log h, log error). Needs at least three
/// finite positive pairs.
SlopeFit fit_order(const std::vector<double>& step_sizes, const std::vector<double>& errors);

/// Terminal-time mean-square errors per (method, h) against the per-path
/// reference (flow oracle at mu(T) or a fine-scheme solve on the same path),
/// with common random numbers across the step ladder.
ConvergenceReport run_ms_convergence(const ExperimentConfig& config);

/// Weak errors |E^[g(Y(T))] - E[g(X(T))]|: Monte Carlo for the Gaussian
/// driver, exact enumeration of the k^n outcome tree for the discrete one.
ConvergenceReport run_weak_convergence(const ExperimentConfig& config);

struct EnumerationResult {
  double expectation = 0.0;
  double total_probability = 0.0;
  long long outcomes = 0;
};

/// Exact expectation of g under the numerical scheme driven by the k-point
/// discrete increments over n steps (k^n leaves, product probabilities).
EnumerationResult enumerate_discrete_expectation(
    const Stepper& stepper, const DVec& x0,
    const std::vector<std::pair<double, double>>& support, int n_steps,
    const std::function<double(const DVec&)>& g, long long cap);

struct DriftPoint {
  double t = 0.0;
  double dH = 0.0;
  double dC = 0.0;
};

/// One path of per-step invariant deviations (single method, single h).
std::vector<DriftPoint> run_invariant_drift(const ExperimentConfig& config);

/// CSV emission, 17 significant digits, byte-stable for a fixed config.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);
void write_drift_csv(std::ostream& os, const std::vector<DriftPoint>& series);

std::string format_float(double value);

}  // namespace sint
