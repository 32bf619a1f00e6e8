#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sint/config.hpp"
#include "sint/errors.hpp"
#include "sint/harness.hpp"
#include "sint/methods.hpp"
#include "sint/trees.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBandViolation = 3;
constexpr int kExitNumerical = 4;

int threads_from_env() {
  const char* env = std::getenv("SINT_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

int cmd_trees(int max_order) {
  const auto trees = sint::enumerate_trees(max_order);
  int current_order = 0, count = 0;
  auto flush_count = [&]() {
    if (current_order > 0)
      std::cout << "# order " << current_order << ": " << count << " trees\n";
  };
  std::cout << "tree\trho\talpha\tgamma\n";
  for (const auto& tau : trees) {
    const int order = sint::rho(tau);
    if (order != current_order) {
      flush_count();
      current_order = order;
      count = 0;
    }
    ++count;
    std::cout << sint::to_string(tau) << '\t' << order << '\t' << sint::alpha(tau).str() << '\t'
              << sint::gamma_density(tau) << '\n';
  }
  flush_count();
  return kExitOk;
}

int cmd_check_order(const std::string& method, int max_order) {
  const sint::OrderReport report = sint::method_order_report(method, max_order);
  std::cout << method << ": deterministic order " << report.deterministic_order
            << ", stochastic order " << report.stochastic_order << '\n';
  if (!report.failing_tree.empty())
    std::cout << "first failing tree: " << report.failing_tree << " (residual "
              << sint::format_float(report.residual) << ")\n";
  return kExitOk;
}

int check_bands(const sint::ExperimentConfig& config, const sint::ConvergenceReport& report) {
  bool violated = false;
  for (const auto& [method, family, fit] : report.slopes) {
    std::cout << method << " (" << family << "): slope " << sint::format_float(fit.slope)
              << ", intercept " << sint::format_float(fit.intercept) << ", residual "
              << sint::format_float(fit.residual) << '\n';
  }
  for (const auto& [method, lo, hi] : config.slope_bands) {
    bool found = false;
    for (const auto& [m, family, fit] : report.slopes) {
      if (m != method) continue;
      found = true;
      if (fit.slope < lo || fit.slope > hi) {
        std::cout << "band violation: " << method << " (" << family << ") slope "
                  << sint::format_float(fit.slope) << " outside [" << lo << ", " << hi << "]\n";
        violated = true;
      }
    }
    if (!found) {
      std::cout << "band declared for '" << method << "' but no slope was fitted\n";
      violated = true;
    }
  }
  return violated ? kExitBandViolation : kExitOk;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sint::config_error("cannot open output file '" + path + "'");
  out << contents;
}

int cmd_convergence(const std::string& config_path, const std::string& mode, int samples_override,
                    long long seed_override, const std::string& out_override) {
  sint::ExperimentConfig config = sint::parse_config_file(config_path);
  if (samples_override > 0) config.samples = samples_override;
  if (seed_override >= 0) config.driver.seed = static_cast<std::uint64_t>(seed_override);
  if (!out_override.empty()) config.output_path = out_override;
  if (config.threads <= 1) config.threads = threads_from_env();
  std::cout << sint::manifest_text(config);

  sint::ConvergenceReport report;
  if (mode == "ms") {
    report = sint::run_ms_convergence(config);
  } else if (mode == "weak") {
    report = sint::run_weak_convergence(config);
  } else {
    throw sint::config_error("mode must be 'ms' or 'weak'");
  }
  std::ostringstream csv;
  sint::write_convergence_csv(csv, report);
  if (!config.output_path.empty()) {
    write_file(config.output_path, csv.str());
    std::cout << "wrote " << config.output_path << '\n';
  } else {
    std::cout << csv.str();
  }
  return check_bands(config, report);
}

int cmd_invariants(const std::string& config_path, const std::string& out_override) {
  sint::ExperimentConfig config = sint::parse_config_file(config_path);
  if (!out_override.empty()) config.output_path = out_override;
  std::cout << sint::manifest_text(config);
  const auto series = sint::run_invariant_drift(config);
  double max_dH = 0.0, max_dC = 0.0;
  for (const auto& point : series) {
    max_dH = std::max(max_dH, std::abs(point.dH));
    max_dC = std::max(max_dC, std::abs(point.dC));
  }
  std::ostringstream csv;
  sint::write_drift_csv(csv, series);
  if (!config.output_path.empty()) {
    write_file(config.output_path, csv.str());
    std::cout << "wrote " << config.output_path << '\n';
  } else {
    std::cout << csv.str();
  }
  std::cout << "max |dH| = " << sint::format_float(max_dH)
            << ", max |dC| = " << sint::format_float(max_dC) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"B-series integrators with random step size for single-integrand SDEs"};
  app.require_subcommand(1);

  int max_order = 8;
  std::string method, config_path, mode = "ms", out_path;
  int samples_override = 0;
  long long seed_override = -1;

  auto* trees_cmd = app.add_subcommand("trees", "rooted-tree table: form, rho, alpha, gamma");
  trees_cmd->add_option("--max-order", max_order, "highest tree order");

  auto* order_cmd = app.add_subcommand("check-order", "deterministic and stochastic order of a tableau method");
  order_cmd->add_option("--method", method, "method name")->required();
  order_cmd->add_option("--max-order", max_order, "highest tree order checked");

  auto* conv_cmd = app.add_subcommand("convergence", "mean-square or weak convergence study");
  conv_cmd->add_option("--config", config_path, "config file")->required();
  conv_cmd->add_option("--mode", mode, "ms or weak");
  conv_cmd->add_option("--samples", samples_override, "override sample count");
  conv_cmd->add_option("--seed", seed_override, "override master seed");
  conv_cmd->add_option("--out", out_path, "override CSV output path");

  auto* inv_cmd = app.add_subcommand("invariants", "invariant drift along one path");
  inv_cmd->add_option("--config", config_path, "config file")->required();
  inv_cmd->add_option("--out", out_path, "override CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (trees_cmd->parsed()) return cmd_trees(max_order);
    if (order_cmd->parsed()) return cmd_check_order(method, max_order);
    if (conv_cmd->parsed())
      return cmd_convergence(config_path, mode, samples_override, seed_override, out_path);
    if (inv_cmd->parsed()) return cmd_invariants(config_path, out_path);
  } catch (const sint::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sint::size_limit_error& e) {
    std::cerr << "size limit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
