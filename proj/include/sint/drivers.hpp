#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace sint {

/// Random-time-increment driver: dM = lambda dt + sigma o dW.
struct DriverConfig {
  enum class Scheme { gaussian, discrete };

  int lambda = 1;        // must be 0 or 1
  double sigma = 0.0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::gaussian;
  int points = 3;        // support size of the discrete scheme (2, 3 or 4)
};

/// One sampled Wiener path on the fine grid, immutable after sampling.
/// Coarser increments are formed by dyadic summation of the fine ones, so
/// every ladder level sees bit-identical window sums.
struct DriverPath {
  double T = 0.0;
  int n_fine = 0;
  int lambda = 1;
  double sigma = 0.0;
  std::vector<double> dW;  // independent N(0, T/n_fine) increments

  double fine_h() const { return T / n_fine; }
};

/// Deterministic substream per (seed, sample_index): the same pair always
/// reproduces the same path bit for bit, independent of sampling order.
DriverPath sample_path(const DriverConfig& config, double T, int n_fine,
                       std::uint64_t sample_index);

/// Sum of dW over [begin, begin+length), computed by splitting at the
/// midpoint; the fixed association makes coarse increments exact sums of
/// their finer children.
double window_sum(const DriverPath& path, int begin, int length);

/// Random step for coarse step `step_index` at the given coarsening factor:
/// dM = lambda * (coarsen * fine_h) + sigma * window_sum. The factor must
/// divide n_fine.
double increment(const DriverPath& path, int step_index, int coarsen_factor);

/// W(T) via the same dyadic summation.
double wiener_terminal(const DriverPath& path);

/// Discrete surrogate for dM over a step of size h: values
/// lambda*h + sigma*sqrt(h)*xi_j with (xi_j, p_j) the k-point Gauss-Hermite
/// abscissae/weights of the unit Gaussian. Matches the Gaussian's first
/// 2k-1 moments exactly. k in {2, 3, 4}.
std::vector<std::pair<double, double>> discrete_increment_support(int k, double h, int lambda,
                                                                  double sigma);

}  // namespace sint
