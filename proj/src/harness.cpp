#include "sint/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "sint/errors.hpp"

namespace sint {

namespace {

int coarsen_factor_for(double h, double fine_h, int n_fine) {
  const double ratio = h / fine_h;
  const int factor = static_cast<int>(std::llround(ratio));
  if (factor < 1 || std::abs(ratio - factor) > 1e-9 * ratio || n_fine % factor != 0)
    throw config_error("step size " + std::to_string(h) +
                       " is not an integer multiple of the fine step dividing the grid");
  return factor;
}

int steps_for(double T, double h) {
  const int n = static_cast<int>(std::llround(T / h));
  if (n < 1 || std::abs(T / h - n) > 1e-9 * (T / h))
    throw config_error("step size " + std::to_string(h) + " does not divide the horizon");
  return n;
}

bool finite(const DVec& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

DVec integrate_path(const Stepper& stepper, const DVec& x0, const DriverPath& path, int coarsen) {
  const int n = path.n_fine / coarsen;
  DVec y = x0;
  for (int i = 0; i < n; ++i) {
    y = stepper.step(y, increment(path, i, coarsen));
    if (!finite(y)) throw blow_up_error("trajectory left the finite domain at step " +
                                        std::to_string(i));
  }
  return y;
}

/// Runs fn(m) for m in [0, count), split across `threads` workers. Exceptions
/// escape from the calling thread after all workers join.
void parallel_samples(long long count, int threads, const std::function<void(long long)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count < 2 * threads) {
    for (long long m = 0; m < count; ++m) fn(m);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (long long m = w; m < count; m += threads) fn(m);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct SampleStats {
  double mean = 0.0;
  double stddev_of_mean = 0.0;
  long long valid = 0;
};

// Fixed-order (by sample index) reduction of possibly-NaN per-sample values.
SampleStats reduce_samples(const std::vector<double>& values) {
  SampleStats stats;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++stats.valid;
  }
  if (stats.valid == 0) return stats;
  stats.mean = sum / stats.valid;
  double ss = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    const double d = v - stats.mean;
    ss += d * d;
  }
  if (stats.valid > 1)
    stats.stddev_of_mean = std::sqrt(ss / (stats.valid - 1) / stats.valid);
  return stats;
}

void check_invalid_fraction(const ExperimentConfig& config, const std::string& method, double h,
                            long long invalid, long long total) {
  if (invalid > config.max_invalid_fraction * total)
    throw reference_accuracy_error(
        "more than " + std::to_string(100.0 * config.max_invalid_fraction) +
        "% invalid samples for method " + method + " at h = " + std::to_string(h));
}

struct Setup {
  Problem problem;
  std::vector<Stepper> steppers;
  int n_fine = 0;
  std::vector<int> coarsen;  // per step size
};

Setup prepare(const ExperimentConfig& config) {
  Setup setup{make_problem(config.problem_name, config.problem_params, config.x0), {}, 0, {}};
  if (config.samples < 2) throw config_error("at least 2 samples are required");
  if (config.methods.empty()) throw config_error("no methods selected");
  for (const auto& name : config.methods)
    setup.steppers.push_back(make_stepper(name, setup.problem, config.solver));
  setup.n_fine = steps_for(config.T, config.fine_h);
  for (double h : config.step_sizes) {
    steps_for(config.T, h);
    setup.coarsen.push_back(coarsen_factor_for(h, config.fine_h, setup.n_fine));
  }
  return setup;
}

DriverConfig effective_driver(const ExperimentConfig& config, const Problem& problem) {
  DriverConfig driver = config.driver;
  if (problem.recommended_sigma && driver.sigma == 0.0 && driver.scheme == DriverConfig::Scheme::gaussian)
    driver.sigma = *problem.recommended_sigma;
  return driver;
}

void fit_slopes(ConvergenceReport& report, const std::vector<std::string>& methods,
                const std::string& family, const std::vector<double>& hs,
                const std::vector<std::vector<double>>& errors_per_method) {
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    std::vector<double> hs_ok, errs_ok;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const double e = errors_per_method[mi][k];
      if (std::isfinite(e) && e > 0.0) {
        hs_ok.push_back(hs[k]);
        errs_ok.push_back(e);
      }
    }
    if (hs_ok.size() >= 3)
      report.slopes.emplace_back(methods[mi], family, fit_order(hs_ok, errs_ok));
  }
}

}  // namespace

SlopeFit fit_order(const std::vector<double>& step_sizes, const std::vector<double>& errors) {
  std::size_t n = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < step_sizes.size(); ++i) {
    if (!(step_sizes[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(errors[i])) continue;
    points.emplace_back(std::log(step_sizes[i]), std::log(errors[i]));
  }
  n = points.size();
  if (n < 3)
    throw insufficient_data_error("order regression needs at least 3 finite points, got " +
                                  std::to_string(n));
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  SlopeFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (fit.slope * x + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

ConvergenceReport run_ms_convergence(const ExperimentConfig& config) {
  Setup setup = prepare(config);
  const DriverConfig driver = effective_driver(config, setup.problem);
  if (driver.scheme != DriverConfig::Scheme::gaussian)
    throw config_error("mean-square mode needs the Gaussian driver");
  const long long M = config.samples;
  const std::size_t n_methods = setup.steppers.size();
  const std::size_t n_h = config.step_sizes.size();

  Stepper ref_stepper;
  int ref_coarsen = 0;
  if (config.reference == ExperimentConfig::Reference::fine_scheme) {
    ref_stepper = make_stepper(config.ref_method, setup.problem, config.solver);
    ref_coarsen = coarsen_factor_for(config.ref_h, config.fine_h, setup.n_fine);
  }

  // squared_errors[mi][hi][m]; NaN marks an invalid sample.
  std::vector<std::vector<std::vector<double>>> squared_errors(
      n_methods, std::vector<std::vector<double>>(n_h, std::vector<double>(M)));

  parallel_samples(M, config.threads, [&](long long m) {
    const DriverPath path = sample_path(driver, config.T, setup.n_fine, m);
    DVec reference;
    bool sample_valid = true;
    try {
      if (config.reference == ExperimentConfig::Reference::flow_oracle) {
        const double mu_T = driver.lambda * config.T + driver.sigma * wiener_terminal(path);
        reference = flow_at(setup.problem, setup.problem.x0, mu_T, config.reference_tolerance);
      } else {
        reference = integrate_path(ref_stepper, setup.problem.x0, path, ref_coarsen);
      }
    } catch (const blow_up_error&) {
      sample_valid = false;
    }
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      for (std::size_t hi = 0; hi < n_h; ++hi) {
        double value = std::numeric_limits<double>::quiet_NaN();
        if (sample_valid) {
          try {
            const DVec y = integrate_path(setup.steppers[mi], setup.problem.x0, path,
                                          setup.coarsen[hi]);
            const double e = dist2(y, reference);
            if (std::isfinite(e)) value = e * e;
          } catch (const nonconvergence_error&) {
          } catch (const blow_up_error&) {
          }
        }
        squared_errors[mi][hi][m] = value;
      }
    }
  });

  ConvergenceReport report;
  std::vector<std::vector<double>> ms_per_method(n_methods, std::vector<double>(n_h));
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    for (std::size_t hi = 0; hi < n_h; ++hi) {
      const SampleStats stats = reduce_samples(squared_errors[mi][hi]);
      check_invalid_fraction(config, config.methods[mi], config.step_sizes[hi], M - stats.valid,
                             M);
      ReportRow row;
      row.method = config.methods[mi];
      row.h = config.step_sizes[hi];
      row.samples = stats.valid;
      row.invalid = M - stats.valid;
      const double ms = std::sqrt(stats.mean);
      row.ms_error = ms;
      // delta method: d sqrt(u)/du = 1/(2 sqrt(u))
      row.ms_stderr = ms > 0.0 ? stats.stddev_of_mean / (2.0 * ms) : 0.0;
      ms_per_method[mi][hi] = ms;
      report.rows.push_back(std::move(row));
    }
  }
  fit_slopes(report, config.methods, "ms", config.step_sizes, ms_per_method);
  return report;
}

EnumerationResult enumerate_discrete_expectation(
    const Stepper& stepper, const DVec& x0,
    const std::vector<std::pair<double, double>>& support, int n_steps,
    const std::function<double(const DVec&)>& g, long long cap) {
  const int k = static_cast<int>(support.size());
  long long leaves = 1;
  for (int i = 0; i < n_steps; ++i) {
    leaves *= k;
    if (leaves > cap)
      throw size_limit_error("discrete enumeration needs " + std::to_string(k) + "^" +
                             std::to_string(n_steps) +
                             " outcomes, above the cap; use fewer steps or Monte Carlo mode");
  }
  EnumerationResult result;
  result.outcomes = leaves;
  // Kahan-compensated accumulators keep the probability-sum check meaningful
  // even with millions of leaves.
  double expectation_c = 0.0, probability_c = 0.0;
  auto accumulate = [](double& sum, double& compensation, double term) {
    const double y = term - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  };
  // Depth-first walk over increment sequences, sharing trajectory prefixes.
  std::function<void(const DVec&, double, int)> walk = [&](const DVec& x, double probability,
                                                           int depth) {
    if (depth == n_steps) {
      accumulate(result.expectation, expectation_c, probability * g(x));
      accumulate(result.total_probability, probability_c, probability);
      return;
    }
    for (const auto& [dmu, p] : support) walk(stepper.step(x, dmu), probability * p, depth + 1);
  };
  walk(x0, 1.0, 0);
  return result;
}

ConvergenceReport run_weak_convergence(const ExperimentConfig& config) {
  Setup setup = prepare(config);
  const DriverConfig driver = effective_driver(config, setup.problem);

  // Resolve the observable list: named selection, or all with closed forms.
  std::vector<Observable> observables;
  if (config.observables.empty()) {
    for (const auto& obs : setup.problem.observables)
      if (obs.expectation) observables.push_back(obs);
  } else {
    for (const auto& name : config.observables) {
      bool found = false;
      for (const auto& obs : setup.problem.observables)
        if (obs.name == name) {
          observables.push_back(obs);
          found = true;
        }
      if (!found)
        throw config_error("problem '" + setup.problem.name + "' has no observable '" + name +
                           "'");
    }
  }
  if (observables.empty())
    throw config_error("weak mode needs at least one observable with a closed-form target");

  ConvergenceReport report;

  auto target_for = [&](const Observable& obs, double T) {
    if (obs.expectation) return obs.expectation(driver.lambda, driver.sigma, T, setup.problem.x0);
    throw capability_error("no closed-form expectation for observable " + obs.name);
  };

  if (driver.scheme == DriverConfig::Scheme::discrete) {
    if (config.enum_steps.empty())
      throw config_error("discrete-driver weak mode needs a list of step counts");
    std::vector<double> hs;
    for (int n : config.enum_steps) hs.push_back(config.T / n);
    for (std::size_t oi = 0; oi < observables.size(); ++oi) {
      std::vector<std::vector<double>> errors(setup.steppers.size(),
                                              std::vector<double>(hs.size()));
      for (std::size_t mi = 0; mi < setup.steppers.size(); ++mi) {
        for (std::size_t ni = 0; ni < config.enum_steps.size(); ++ni) {
          const int n = config.enum_steps[ni];
          const double h = config.T / n;
          const auto support = discrete_increment_support(driver.points, h, driver.lambda,
                                                          driver.sigma);
          const EnumerationResult enumeration = enumerate_discrete_expectation(
              setup.steppers[mi], setup.problem.x0, support, n, observables[oi].g,
              config.enum_cap);
          if (std::abs(enumeration.total_probability - 1.0) > 1e-12)
            throw reference_accuracy_error("enumeration probabilities do not sum to 1");
          ReportRow row;
          row.method = config.methods[mi];
          row.h = h;
          row.samples = enumeration.outcomes;
          row.weak_obs = observables[oi].name;
          row.weak_error = std::abs(enumeration.expectation - target_for(observables[oi], config.T));
          row.weak_stderr = 0.0;
          errors[mi][ni] = *row.weak_error;
          report.rows.push_back(std::move(row));
        }
      }
      fit_slopes(report, config.methods, observables[oi].name, hs, errors);
    }
    return report;
  }

  // Gaussian driver: Monte Carlo estimate of E[g(Y(T))].
  const long long M = config.samples;
  const std::size_t n_methods = setup.steppers.size();
  const std::size_t n_h = config.step_sizes.size();
  // values[mi][hi][oi][m]
  std::vector<std::vector<std::vector<std::vector<double>>>> values(
      n_methods,
      std::vector<std::vector<std::vector<double>>>(
          n_h, std::vector<std::vector<double>>(observables.size(), std::vector<double>(M))));
  parallel_samples(M, config.threads, [&](long long m) {
    const DriverPath path = sample_path(driver, config.T, setup.n_fine, m);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      for (std::size_t hi = 0; hi < n_h; ++hi) {
        bool valid = true;
        DVec y;
        try {
          y = integrate_path(setup.steppers[mi], setup.problem.x0, path, setup.coarsen[hi]);
        } catch (const nonconvergence_error&) {
          valid = false;
        } catch (const blow_up_error&) {
          valid = false;
        }
        for (std::size_t oi = 0; oi < observables.size(); ++oi)
          values[mi][hi][oi][m] =
              valid ? observables[oi].g(y) : std::numeric_limits<double>::quiet_NaN();
      }
    }
  });
  for (std::size_t oi = 0; oi < observables.size(); ++oi) {
    std::vector<std::vector<double>> errors(n_methods, std::vector<double>(n_h));
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      for (std::size_t hi = 0; hi < n_h; ++hi) {
        const SampleStats stats = reduce_samples(values[mi][hi][oi]);
        check_invalid_fraction(config, config.methods[mi], config.step_sizes[hi],
                               M - stats.valid, M);
        ReportRow row;
        row.method = config.methods[mi];
        row.h = config.step_sizes[hi];
        row.samples = stats.valid;
        row.invalid = M - stats.valid;
        row.weak_obs = observables[oi].name;
        row.weak_error = std::abs(stats.mean - target_for(observables[oi], config.T));
        row.weak_stderr = stats.stddev_of_mean;
        errors[mi][hi] = *row.weak_error;
        report.rows.push_back(std::move(row));
      }
    }
    fit_slopes(report, config.methods, observables[oi].name, config.step_sizes, errors);
  }
  return report;
}

std::vector<DriftPoint> run_invariant_drift(const ExperimentConfig& config) {
  Setup setup = prepare(config);
  if (setup.steppers.size() != 1 || config.step_sizes.size() != 1)
    throw config_error("invariant drift runs use a single method and a single step size");
  const DriverConfig driver = effective_driver(config, setup.problem);
  const auto H = setup.problem.invariant("H");
  const auto C = setup.problem.invariant("C");
  const DriverPath path = sample_path(driver, config.T, setup.n_fine, 0);
  const int coarsen = setup.coarsen[0];
  const int n = setup.n_fine / coarsen;
  const double h = config.step_sizes[0];
  const double H0 = H(setup.problem.x0), C0 = C(setup.problem.x0);
  std::vector<DriftPoint> series;
  series.push_back({0.0, 0.0, 0.0});
  DVec y = setup.problem.x0;
  for (int i = 0; i < n; ++i) {
    try {
      y = setup.steppers[0].step(y, increment(path, i, coarsen));
    } catch (const nonconvergence_error& e) {
      throw nonconvergence_error("solver failed at step " + std::to_string(i), e.step_size);
    }
    if (!finite(y)) throw blow_up_error("drift trajectory left the finite domain at step " +
                                        std::to_string(i));
    series.push_back({(i + 1) * h, H(y) - H0, C(y) - C0});
  }
  return series;
}

std::string format_float(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "method,h,samples,invalid,ms_error,ms_stderr,weak_obs,weak_error,weak_stderr\n";
  for (const auto& row : report.rows) {
    os << row.method << ',' << format_float(row.h) << ',' << row.samples << ',' << row.invalid
       << ',';
    os << (row.ms_error ? format_float(*row.ms_error) : "") << ','
       << (row.ms_stderr ? format_float(*row.ms_stderr) : "") << ',';
    os << row.weak_obs << ',' << (row.weak_error ? format_float(*row.weak_error) : "") << ','
       << (row.weak_stderr ? format_float(*row.weak_stderr) : "") << '\n';
  }
}

void write_drift_csv(std::ostream& os, const std::vector<DriftPoint>& series) {
  os << "t,dH,dC\n";
  for (const auto& point : series)
    os << format_float(point.t) << ',' << format_float(point.dH) << ','
       << format_float(point.dC) << '\n';
}

}  // namespace sint
