#include "sint/drivers.hpp"

#include <cmath>

#include "sint/errors.hpp"

namespace sint {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded from a splitmix64 mix of (master seed, sample index).
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t mix = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
    for (auto& word : s_) word = splitmix64(mix);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in (0, 1]
  double uniform() { return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

  // standard normal via the polar method
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    have_spare_ = true;
    return u * factor;
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

DriverPath sample_path(const DriverConfig& config, double T, int n_fine,
                       std::uint64_t sample_index) {
  if (config.lambda != 0 && config.lambda != 1)
    throw config_error("driver lambda must be 0 or 1");
  if (n_fine < 1 || T <= 0.0) throw config_error("driver path needs n_fine >= 1 and T > 0");
  DriverPath path;
  path.T = T;
  path.n_fine = n_fine;
  path.lambda = config.lambda;
  path.sigma = config.sigma;
  path.dW.resize(n_fine);
  Rng rng(config.seed, sample_index);
  const double std_dev = std::sqrt(T / n_fine);
  for (auto& w : path.dW) w = std_dev * rng.normal();
  return path;
}

double window_sum(const DriverPath& path, int begin, int length) {
  if (length == 1) return path.dW[begin];
  const int half = length / 2;
  return window_sum(path, begin, half) + window_sum(path, begin + half, length - half);
}

double increment(const DriverPath& path, int step_index, int coarsen_factor) {
  if (coarsen_factor < 1 || path.n_fine % coarsen_factor != 0)
    throw config_error("coarsening factor " + std::to_string(coarsen_factor) +
                       " does not divide the fine grid of " + std::to_string(path.n_fine));
  const int begin = step_index * coarsen_factor;
  if (begin < 0 || begin + coarsen_factor > path.n_fine)
    throw config_error("step index out of range");
  return path.lambda * (coarsen_factor * path.fine_h()) +
         path.sigma * window_sum(path, begin, coarsen_factor);
}

double wiener_terminal(const DriverPath& path) { return window_sum(path, 0, path.n_fine); }

std::vector<std::pair<double, double>> discrete_increment_support(int k, double h, int lambda,
                                                                  double sigma) {
  if (lambda != 0 && lambda != 1) throw config_error("driver lambda must be 0 or 1");
  const double mean = lambda * h;
  const double scale = sigma * std::sqrt(h);
  std::vector<std::pair<double, double>> support;
  switch (k) {
    case 2:
      support = {{-1.0, 0.5}, {1.0, 0.5}};
      break;
    case 3: {
      const double r = std::sqrt(3.0);
      support = {{-r, 1.0 / 6.0}, {0.0, 2.0 / 3.0}, {r, 1.0 / 6.0}};
      break;
    }
    case 4: {
      const double s6 = std::sqrt(6.0);
      const double inner = std::sqrt(3.0 - s6), outer = std::sqrt(3.0 + s6);
      const double w_inner = (3.0 + s6) / 12.0, w_outer = (3.0 - s6) / 12.0;
      support = {{-outer, w_outer}, {-inner, w_inner}, {inner, w_inner}, {outer, w_outer}};
      break;
    }
    default:
      throw config_error("discrete driver supports 2, 3 or 4 points, got " + std::to_string(k));
  }
  for (auto& [value, probability] : support) {
    (void)probability;
    value = mean + scale * value;
  }
  return support;
}

}  // namespace sint
