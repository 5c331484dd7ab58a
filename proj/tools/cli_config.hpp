#pragma once

// Run configuration for the command-line tool: flags and versioned JSON
// config files map onto the same option table.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace nullfield::cli {

/// Bad flags, bad config files or invalid option values (exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchema = 1;

struct RunConfig {
  std::string command;

  // verify
  std::string suite;
  std::string generator = "1";
  std::string variant = "hopf";     // hopf | tilde | both
  std::string mode = "auto";        // auto | direct | antiholomorphic
  std::uint64_t seed = 1;
  int n = 0;                        // 0: suite default
  std::vector<double> times{0.0};
  std::optional<double> tol;

  // seifert, rotation, tt-link
  int p = 2;
  int q = 3;

  // trace
  std::string field = "legendrian"; // legendrian | torus | seifert | electric | magnetic | poynting
  std::string polarity = "e";       // e | b
  std::vector<double> start;        // 4 values on S^3 or 3 in R^3
  std::optional<double> start_a;    // torus start (sqrt(1 - a), sqrt(a))
  double tau = 10.0;
  bool closure = false;
  bool windings = false;
  bool rotation = false;
  bool project = false;
  std::string link_with;
  std::string from_curve;
  std::optional<double> transport_to;
  double time = 0.0;
  int samples = 1000;

  // rotation / link
  std::string curve;
  std::string curve_a;
  std::string curve_b;
  std::string preset;
  int winding = 0;

  // monodromy
  std::optional<double> omega;
  double period = 1.0;
  std::optional<double> g0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  std::string orbit;

  // diophantine
  std::optional<double> w;
  double gamma = 0.2;
  double exponent = 2.5;
  long qmax = 10000;

  // transport-check
  double t1 = 0.5;

  std::string out;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"verify",      "trace",   "rotation",
                                              "link",        "monodromy", "diophantine",
                                              "seifert",     "transport-check"};
  return names;
}

/// Applies a JSON config object.  Requires "schema": 1; unknown keys and
/// wrongly typed values throw ConfigError.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

/// Parses argv-style arguments (without the program name).  A
/// `--config <path>` file is applied first and explicit flags override it.
/// Throws ConfigError; returns std::nullopt after printing help.
std::optional<RunConfig> parse_arguments(const std::vector<std::string>& args, std::string& help);

/// The configuration as JSON (schema 1), suitable for apply_json.
nlohmann::json to_json(const RunConfig& cfg);

} // namespace nullfield::cli
