#pragma once

#include <stdexcept>
#include <string>

namespace sint {

/// Enumeration or expansion request exceeds a configured hard cap.
class size_limit_error : public std::runtime_error {
public:
  explicit size_limit_error(const std::string& what) : std::runtime_error(what) {}
};

/// A required capability (derivative order, Poisson structure, ...) is missing.
class capability_error : public std::runtime_error {
public:
  explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

/// Fixed-point iteration did not reach tolerance within the iteration budget.
class nonconvergence_error : public std::runtime_error {
public:
  nonconvergence_error(const std::string& what, double step_size)
      : std::runtime_error(what), step_size(step_size) {}
  double step_size;
};

/// Step-halving certification of a reference solve failed.
class reference_accuracy_error : public std::runtime_error {
public:
  explicit reference_accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

/// A sample path left the domain of the exact solution (finite-time explosion).
class blow_up_error : public std::runtime_error {
public:
  explicit blow_up_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration value or unknown key.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Not enough finite data points for a regression.
class insufficient_data_error : public std::runtime_error {
public:
  explicit insufficient_data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sint
