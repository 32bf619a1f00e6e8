#pragma once

#include <string>
#include <string_view>

#include "sint/harness.hpp"

namespace sint {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Numeric literal: plain decimal or a power-of-two form like "2^-11".
double parse_number(const std::string& text);

/// Flat `key = value` configuration with [section] headers (sections:
/// problem, driver, run, methods, acceptance). Unknown sections or keys are
/// hard errors. '#' starts a comment.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical dump of the resolved configuration: a pure function of the
/// config (no timestamp), printed alongside runs for provenance.
std::string manifest_text(const ExperimentConfig& config);

}  // namespace sint
