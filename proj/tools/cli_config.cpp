#include "cli_config.hpp"

#include <fstream>
#include <functional>
#include <variant>

#include "CLI11.hpp"

namespace nullfield::cli {

namespace {

using Target = std::variant<std::string*, int*, long*, std::uint64_t*, double*, bool*,
                            std::vector<double>*, std::optional<double>*>;

struct OptionDef {
  const char* name; // flag without the leading dashes; also the JSON key
  Target target;
  const char* help;
};

std::vector<OptionDef> option_table(RunConfig& c) {
  return {
      {"suite", &c.suite, "verify suite"},
      {"generator", &c.generator, "generator expression in z1, z2, zb1, zb2"},
      {"variant", &c.variant, "hopf | tilde | both"},
      {"mode", &c.mode, "auto | direct | antiholomorphic"},
      {"seed", &c.seed, "PRNG seed"},
      {"n", &c.n, "number of samples (0: suite default)"},
      {"times", &c.times, "comma-separated times"},
      {"tol", &c.tol, "pass tolerance override"},
      {"p", &c.p, "first Seifert / torus-knot index"},
      {"q", &c.q, "second Seifert / torus-knot index"},
      {"field", &c.field, "legendrian | torus | seifert | electric | magnetic | poynting"},
      {"polarity", &c.polarity, "e | b"},
      {"start", &c.start, "start point (4 values on S^3, 3 in R^3)"},
      {"start-a", &c.start_a, "torus start (sqrt(1 - a), sqrt(a))"},
      {"tau", &c.tau, "parameter span"},
      {"closure", &c.closure, "detect the closing period"},
      {"windings", &c.windings, "report phase windings of a closed orbit"},
      {"rotation", &c.rotation, "report the rotation number of a closed orbit"},
      {"project", &c.project, "write the closed orbit projected to R^3"},
      {"link-with", &c.link_with, "R^3 curve CSV to link the result with"},
      {"from-curve", &c.from_curve, "R^3 curve CSV to transport"},
      {"transport-to", &c.transport_to, "transport target time"},
      {"time", &c.time, "field time for R^3 tracing"},
      {"samples", &c.samples, "samples per closed curve"},
      {"curve", &c.curve, "S^3 curve CSV"},
      {"curve-a", &c.curve_a, "first R^3 curve CSV"},
      {"curve-b", &c.curve_b, "second R^3 curve CSV"},
      {"preset", &c.preset, "built-in input"},
      {"winding", &c.winding, "winding of the synthetic preset loop"},
      {"omega", &c.omega, "NVE frequency with G = omega^2/2 - 1"},
      {"period", &c.period, "NVE period"},
      {"g0", &c.g0, "constant part of G"},
      {"cos", &c.cos_coeffs, "cosine coefficients of G"},
      {"sin", &c.sin_coeffs, "sine coefficients of G"},
      {"orbit", &c.orbit, "closed orbit preset: hopf | hopf2 | torus"},
      {"w", &c.w, "frequency for the Diophantine check"},
      {"gamma", &c.gamma, "Diophantine constant"},
      {"exponent", &c.exponent, "Diophantine exponent tau"},
      {"qmax", &c.qmax, "largest denominator checked"},
      {"t1", &c.t1, "transport end time"},
      {"out", &c.out, "output CSV path (JSON sidecar at <path>.json)"},
  };
}

void assign_json(const OptionDef& d, const nlohmann::json& v) {
  auto bad = [&] { return ConfigError(std::string("config: wrong type for key '") + d.name + "'"); };
  std::visit(
      [&](auto* t) {
        using T = std::remove_pointer_t<decltype(t)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (!v.is_string()) throw bad();
          *t = v.get<std::string>();
        } else if constexpr (std::is_same_v<T, bool>) {
          if (!v.is_boolean()) throw bad();
          *t = v.get<bool>();
        } else if constexpr (std::is_same_v<T, double>) {
          if (!v.is_number()) throw bad();
          *t = v.get<double>();
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          if (v.is_null()) {
            t->reset();
          } else {
            if (!v.is_number()) throw bad();
            *t = v.get<double>();
          }
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          if (!v.is_array()) throw bad();
          t->clear();
          for (const auto& e : v) {
            if (!e.is_number()) throw bad();
            t->push_back(e.get<double>());
          }
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          if (!v.is_number_unsigned()) throw bad();
          *t = v.get<std::uint64_t>();
        } else {
          if (!v.is_number_integer()) throw bad();
          *t = v.get<T>();
        }
      },
      d.target);
}

nlohmann::json target_json(const Target& t) {
  return std::visit(
      [](auto* p) -> nlohmann::json {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::optional<double>>) {
          return *p ? nlohmann::json(**p) : nlohmann::json(nullptr);
        } else {
          return nlohmann::json(*p);
        }
      },
      t);
}

} // namespace

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("config: top level must be an object");
  }
  if (!j.contains("schema") || !j["schema"].is_number_integer() ||
      j["schema"].get<int>() != kConfigSchema) {
    throw ConfigError("config: missing or unsupported schema (expected 1)");
  }
  const auto table = option_table(cfg);
  for (const auto& [key, value] : j.items()) {
    if (key == "schema") {
      continue;
    }
    if (key == "command") {
      if (!value.is_string()) {
        throw ConfigError("config: wrong type for key 'command'");
      }
      cfg.command = value.get<std::string>();
      continue;
    }
    const OptionDef* def = nullptr;
    for (const auto& d : table) {
      if (key == d.name) {
        def = &d;
        break;
      }
    }
    if (!def) {
      throw ConfigError("config: unknown key '" + key + "'");
    }
    assign_json(*def, value);
  }
}

nlohmann::json to_json(const RunConfig& cfg) {
  RunConfig copy = cfg;
  nlohmann::json j;
  j["schema"] = kConfigSchema;
  j["command"] = cfg.command;
  for (const auto& d : option_table(copy)) {
    j[d.name] = target_json(d.target);
  }
  return j;
}

std::optional<RunConfig> parse_arguments(const std::vector<std::string>& args, std::string& help) {
  RunConfig cfg;
  // Flags are collected first and applied after the config file.
  std::vector<std::function<void()>> deferred;
  std::string config_path;

  CLI::App app{"Null electromagnetic fields and Legendrian fields on S^3", "nullfield"};
  app.require_subcommand(1);
  const auto table = option_table(cfg);
  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file (schema 1)");
    for (const OptionDef& d : table) {
      const std::string flag = std::string("--") + d.name;
      std::visit(
          [&](auto* t) {
            using T = std::remove_pointer_t<decltype(t)>;
            if constexpr (std::is_same_v<T, bool>) {
              sub->add_flag_function(
                  flag, [t, &deferred](std::int64_t) { deferred.push_back([t] { *t = true; }); },
                  d.help);
            } else if constexpr (std::is_same_v<T, std::optional<double>>) {
              sub->add_option_function<double>(
                  flag, [t, &deferred](double v) { deferred.push_back([t, v] { *t = v; }); },
                  d.help);
            } else if constexpr (std::is_same_v<T, std::vector<double>>) {
              sub->add_option_function<std::vector<double>>(
                     flag,
                     [t, &deferred](const std::vector<double>& v) {
                       deferred.push_back([t, v] { *t = v; });
                     },
                     d.help)
                  ->delimiter(',')
                  ->allow_extra_args(false);
            } else {
              sub->add_option_function<T>(
                  flag, [t, &deferred](const T& v) { deferred.push_back([t, v] { *t = v; }); },
                  d.help);
            }
          },
          d.target);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    help = app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("arguments: ") + e.what());
  }

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      throw ConfigError("config: cannot open " + config_path);
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    apply_json(cfg, j);
  }
  for (const auto& f : deferred) {
    f();
  }
  for (CLI::App* sub : app.get_subcommands()) {
    if (!cfg.command.empty() && cfg.command != sub->get_name()) {
      throw ConfigError("config: command '" + cfg.command + "' does not match '" +
                        sub->get_name() + "'");
    }
    cfg.command = sub->get_name();
  }
  return cfg;
}

} // namespace nullfield::cli
