#include "sint/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sint/errors.hpp"

namespace sint {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<int> parse_step_counts(const std::string& value) {
  // either "4..12" or a comma list
  const auto dots = value.find("..");
  std::vector<int> counts;
  if (dots != std::string::npos) {
    const int lo = std::stoi(trim(value.substr(0, dots)));
    const int hi = std::stoi(trim(value.substr(dots + 2)));
    if (lo < 1 || hi < lo) throw config_error("invalid step-count range '" + value + "'");
    for (int n = lo; n <= hi; ++n) counts.push_back(n);
  } else {
    for (const auto& item : split_list(value)) counts.push_back(std::stoi(item));
  }
  return counts;
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string s = trim(text);
  const auto caret = s.find('^');
  try {
    if (caret != std::string::npos) {
      const double base = std::stod(s.substr(0, caret));
      const double exponent = std::stod(s.substr(caret + 1));
      return std::pow(base, exponent);
    }
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw config_error("trailing characters in number '" + s + "'");
    return v;
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("cannot parse number '" + s + "'");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw config_error("malformed section header at line " +
                                                 std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "driver" && section != "run" &&
          section != "methods" && section != "acceptance")
        throw config_error("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("expected key = value at line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw config_error("key '" + key + "' outside any section");

    if (section == "problem") {
      if (key == "name") {
        config.problem_name = value;
      } else if (key == "x0") {
        config.x0.clear();
        for (const auto& item : split_list(value)) config.x0.push_back(parse_number(item));
      } else {
        // validated against the problem's parameter list on construction
        config.problem_params.emplace_back(key, parse_number(value));
      }
    } else if (section == "driver") {
      if (key == "lambda") {
        config.driver.lambda = static_cast<int>(parse_number(value));
      } else if (key == "sigma") {
        config.driver.sigma = parse_number(value);
      } else if (key == "seed") {
        config.driver.seed = static_cast<std::uint64_t>(std::stoull(value));
      } else if (key == "scheme") {
        if (value == "gaussian") {
          config.driver.scheme = DriverConfig::Scheme::gaussian;
        } else if (value == "discrete") {
          config.driver.scheme = DriverConfig::Scheme::discrete;
        } else {
          throw config_error("unknown driver scheme '" + value + "'");
        }
      } else if (key == "points") {
        config.driver.points = static_cast<int>(parse_number(value));
      } else {
        throw config_error("unknown key '" + key + "' in [driver]");
      }
    } else if (section == "run") {
      if (key == "T") {
        config.T = parse_number(value);
      } else if (key == "h") {
        config.step_sizes.clear();
        for (const auto& item : split_list(value)) config.step_sizes.push_back(parse_number(item));
      } else if (key == "samples") {
        config.samples = static_cast<int>(parse_number(value));
      } else if (key == "reference") {
        if (value == "flow") {
          config.reference = ExperimentConfig::Reference::flow_oracle;
        } else if (value == "fine-scheme") {
          config.reference = ExperimentConfig::Reference::fine_scheme;
        } else {
          throw config_error("unknown reference '" + value + "'");
        }
      } else if (key == "ref_method") {
        config.ref_method = value;
      } else if (key == "ref_h") {
        config.ref_h = parse_number(value);
      } else if (key == "fine_h") {
        config.fine_h = parse_number(value);
      } else if (key == "observables") {
        config.observables = split_list(value);
      } else if (key == "steps") {
        config.enum_steps = parse_step_counts(value);
      } else if (key == "enum_cap") {
        config.enum_cap = static_cast<long long>(parse_number(value));
      } else if (key == "out") {
        config.output_path = value;
      } else if (key == "solver_tolerance") {
        config.solver.tolerance = parse_number(value);
      } else if (key == "solver_max_iterations") {
        config.solver.max_iterations = static_cast<int>(parse_number(value));
      } else if (key == "threads") {
        config.threads = static_cast<int>(parse_number(value));
      } else {
        throw config_error("unknown key '" + key + "' in [run]");
      }
    } else if (section == "methods") {
      if (key == "names") {
        config.methods = split_list(value);
      } else {
        throw config_error("unknown key '" + key + "' in [methods]");
      }
    } else if (section == "acceptance") {
      if (key.rfind("slope.", 0) == 0) {
        const std::string method = key.substr(6);
        const auto band = split_list(value);
        if (band.size() != 2)
          throw config_error("acceptance band for '" + method + "' needs min, max");
        config.slope_bands.emplace_back(method, parse_number(band[0]), parse_number(band[1]));
      } else {
        throw config_error("unknown key '" + key + "' in [acceptance]");
      }
    }
  }
  for (const auto& name : config.methods)
    if (!is_known_method(name)) throw config_error("unknown method '" + name + "'");
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string manifest_text(const ExperimentConfig& config) {
  std::ostringstream os;
  os << "tool_version = " << kToolVersion << '\n';
  os << "problem = " << config.problem_name << '\n';
  for (const auto& [k, v] : config.problem_params) os << k << " = " << format_float(v) << '\n';
  os << "x0 =";
  for (double v : config.x0) os << ' ' << format_float(v);
  os << '\n';
  os << "lambda = " << config.driver.lambda << '\n';
  os << "sigma = " << format_float(config.driver.sigma) << '\n';
  os << "seed = " << config.driver.seed << '\n';
  os << "scheme = "
     << (config.driver.scheme == DriverConfig::Scheme::gaussian ? "gaussian" : "discrete")
     << '\n';
  if (config.driver.scheme == DriverConfig::Scheme::discrete)
    os << "points = " << config.driver.points << '\n';
  os << "T = " << format_float(config.T) << '\n';
  os << "h =";
  for (double h : config.step_sizes) os << ' ' << format_float(h);
  os << '\n';
  os << "samples = " << config.samples << '\n';
  os << "reference = "
     << (config.reference == ExperimentConfig::Reference::flow_oracle ? "flow" : "fine-scheme")
     << '\n';
  os << "fine_h = " << format_float(config.fine_h) << '\n';
  os << "methods =";
  for (const auto& m : config.methods) os << ' ' << m;
  os << '\n';
  if (!config.enum_steps.empty()) {
    os << "steps =";
    for (int n : config.enum_steps) os << ' ' << n;
    os << '\n';
  }
  os << "solver_tolerance = " << format_float(config.solver.tolerance) << '\n';
  return os.str();
}

}  // namespace sint
