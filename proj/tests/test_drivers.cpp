#include <doctest.h>

#include <cmath>
#include <vector>

#include "sint/drivers.hpp"
#include "sint/errors.hpp"

using sint::DriverConfig;
using sint::DriverPath;

namespace {

DriverConfig gaussian(double sigma, std::uint64_t seed = 99, int lambda = 1) {
  DriverConfig config;
  config.lambda = lambda;
  config.sigma = sigma;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("path sampling validates its inputs") {
  DriverConfig bad = gaussian(0.5);
  bad.lambda = 2;
  CHECK_THROWS_AS((void)sint::sample_path(bad, 1.0, 8, 0), sint::config_error);
  CHECK_THROWS_AS((void)sint::sample_path(gaussian(0.5), -1.0, 8, 0), sint::config_error);
  CHECK_THROWS_AS((void)sint::sample_path(gaussian(0.5), 1.0, 0, 0), sint::config_error);
}

TEST_CASE("same seed and sample index reproduce the path bit for bit") {
  const DriverPath a = sint::sample_path(gaussian(0.5, 1234), 1.0, 64, 17);
  const DriverPath b = sint::sample_path(gaussian(0.5, 1234), 1.0, 64, 17);
  REQUIRE(a.dW.size() == b.dW.size());
  for (std::size_t i = 0; i < a.dW.size(); ++i) CHECK(a.dW[i] == b.dW[i]);
  const DriverPath c = sint::sample_path(gaussian(0.5, 1234), 1.0, 64, 18);
  CHECK(a.dW[0] != c.dW[0]);
  const DriverPath d = sint::sample_path(gaussian(0.5, 1235), 1.0, 64, 17);
  CHECK(a.dW[0] != d.dW[0]);
}

TEST_CASE("zero noise reduces increments to the drift") {
  const DriverPath path = sint::sample_path(gaussian(0.0, 5), 1.0, 64, 3);
  for (int factor : {1, 2, 4, 8, 64}) {
    for (int i = 0; i < 64 / factor; ++i)
      CHECK(sint::increment(path, i, factor) == 1.0 * (factor * path.fine_h()));
  }
}

TEST_CASE("coarse window sums telescope bit-exactly") {
  const DriverPath path = sint::sample_path(gaussian(1.0, 2024, 0), 1.0, 64, 11);
  for (int factor : {2, 4, 8, 16, 32, 64}) {
    for (int i = 0; i < 64 / factor; ++i) {
      const double parent = sint::window_sum(path, i * factor, factor);
      const double left = sint::window_sum(path, i * factor, factor / 2);
      const double right = sint::window_sum(path, i * factor + factor / 2, factor / 2);
      CHECK(parent == left + right);
    }
  }
  CHECK(sint::wiener_terminal(path) == sint::window_sum(path, 0, 64));
  // lambda = 0, sigma = 1: the single full-width increment is W(T)
  CHECK(sint::increment(path, 0, 64) == sint::wiener_terminal(path));
}

TEST_CASE("coarsening consistency holds across many seeds") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DriverPath path = sint::sample_path(gaussian(0.5, seed), 0.5, 256, seed + 1);
    for (int factor : {2, 8, 64}) {
      double total_fine = 0.0, total_coarse = 0.0;
      for (int i = 0; i < 256 / factor; ++i) total_coarse += sint::window_sum(path, i * factor, factor);
      total_fine = sint::window_sum(path, 0, 256);
      CHECK(total_coarse == doctest::Approx(total_fine).epsilon(1e-14));
    }
  }
}

TEST_CASE("increment rejects bad coarsening") {
  const DriverPath path = sint::sample_path(gaussian(0.5), 1.0, 8, 0);
  CHECK_THROWS_AS((void)sint::increment(path, 0, 3), sint::config_error);
  CHECK_THROWS_AS((void)sint::increment(path, 0, 0), sint::config_error);
  CHECK_THROWS_AS((void)sint::increment(path, 4, 2), sint::config_error);
  CHECK_THROWS_AS((void)sint::increment(path, -1, 2), sint::config_error);
}

TEST_CASE("discrete support sizes and probabilities") {
  for (int k : {2, 3, 4}) {
    const auto support = sint::discrete_increment_support(k, 0.25, 1, 0.5);
    CHECK(static_cast<int>(support.size()) == k);
    double total = 0.0;
    for (const auto& [value, probability] : support) {
      (void)value;
      CHECK(probability > 0.0);
      total += probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS((void)sint::discrete_increment_support(5, 0.25, 1, 0.5), sint::config_error);
  CHECK_THROWS_AS((void)sint::discrete_increment_support(3, 0.25, 2, 0.5), sint::config_error);
}

TEST_CASE("two-point support in closed form") {
  const double h = 0.25, sigma = 0.5;
  const auto support = sint::discrete_increment_support(2, h, 1, sigma);
  CHECK(support[0].first == doctest::Approx(h - sigma * std::sqrt(h)).epsilon(1e-15));
  CHECK(support[1].first == doctest::Approx(h + sigma * std::sqrt(h)).epsilon(1e-15));
  CHECK(support[0].second == 0.5);
  CHECK(support[1].second == 0.5);
}

TEST_CASE("discrete supports match Gaussian moments up to degree 2k - 1") {
  const double h = 0.125;
  // standardized moments of N(0,1): 1, 0, 1, 0, 3, 0, 15, 0, ...
  auto gaussian_moment = [](int m) {
    double value = 1.0;
    for (int i = m - 1; i > 0; i -= 2) value *= i;
    return m % 2 == 1 ? 0.0 : value;
  };
  for (int k : {2, 3, 4}) {
    const auto support = sint::discrete_increment_support(k, h, 0, 1.0 / std::sqrt(h));
    // lambda = 0 and sigma = 1/sqrt(h) make the support the raw abscissae
    for (int m = 1; m <= 2 * k - 1; ++m) {
      double moment = 0.0;
      for (const auto& [value, probability] : support) moment += probability * std::pow(value, m);
      CHECK_MESSAGE(moment == doctest::Approx(gaussian_moment(m)).epsilon(1e-12).scale(1.0),
                    "k = ", k, ", moment ", m);
    }
  }
}

TEST_CASE("sampled increments have Gaussian statistics") {
  const int n = 100000;
  const double T = 1.0;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const DriverPath path = sint::sample_path(gaussian(1.0, 31337, 0), T, 1, i);
    const double z = path.dW[0];
    m1 += z;
    m2 += z * z;
    m3 += z * z * z;
    m4 += z * z * z * z;
  }
  m1 /= n;
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double root_n = std::sqrt(static_cast<double>(n));
  CHECK(std::abs(m1) <= 4.0 / root_n);
  CHECK(std::abs(m2 - 1.0) <= 4.0 * std::sqrt(2.0) / root_n);
  CHECK(std::abs(m3) <= 4.0 * std::sqrt(15.0) / root_n);
  CHECK(std::abs(m4 - 3.0) <= 4.0 * std::sqrt(96.0) / root_n);
}
