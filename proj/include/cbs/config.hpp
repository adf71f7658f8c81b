#pragma once

#include <map>
#include <string>
#include <vector>

#include "cbs/assembler.hpp"

namespace cbs {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key=value run description. Keys:
//   Jg, mode (full|effective|auto), Omega, delta, nu_min, nu_max, step,
//   channel (hh), sweep (s|Jg, empty for none), values (comma list),
//   output (path, empty for stdout), format (csv|json), threads (integer or auto),
//   rel_tol
struct RunConfig {
    std::string Jg = "0";
    std::string mode = "auto";
    double Omega = 1.0;
    double delta = 0.0;
    double nu_min = -20.0;
    double nu_max = 20.0;
    double step = 0.05;
    std::string channel = "hh";
    std::string sweep;
    std::vector<std::string> values;
    std::string output;
    std::string format = "csv";
    int threads = 0;  // 0 = auto
    double rel_tol = 1e-6;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError on unknown keys, malformed values or failed validation.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& c);

// Applies one key=value override (same syntax as a file line).
void set_config_value(RunConfig& c, const std::string& key, const std::string& value);
void validate(const RunConfig& c);

LevelMode resolve_mode(const RunConfig& c, HalfInt Jg);
int resolve_threads(const RunConfig& c);
ModelParams model_params(const RunConfig& c);
std::vector<double> config_grid(const RunConfig& c);

// Locale-independent shortest round-trip formatting and strict parsing.
std::string format_double(double x);
double parse_double(const std::string& text);

}  // namespace cbs
