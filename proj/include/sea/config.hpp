#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sea/analysis.hpp"
#include "sea/stance.hpp"

namespace sea {

/// Parse failure with a 1-based source location.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line, int column);
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Numbers are stored in SI after unit conversion.
using ConfigValue = std::variant<double, bool, std::string>;

struct ConfigEntry {
    ConfigValue value;
    int line = 0;
};

/// Keys set by a config file, fully qualified ("plant.spring_stiffness").
/// Keys left out fall back to the defaults of the selected catalog entry when
/// the config is resolved.
struct RunConfig {
    std::map<std::string, ConfigEntry> entries;
};

/// Accepted syntax, one statement per line:
///   [section]            prefix for the following keys (may itself be dotted)
///   []                   back to unprefixed keys
///   key = value          value: number with optional unit suffix, boolean, or text
///   # comment, ; comment
/// Keys are dotted lowercase identifiers. Unknown keys, unknown or mismatched
/// unit suffixes and malformed lines throw ConfigError with the location.
RunConfig parse_config(const std::string& text);

struct LoadSettings {
    std::string type = "locked";     // locked, inertial, environment, motion
    double mass = 1.0;               // kg, inertial
    double initial_velocity = 0.0;   // m/s, inertial
    double contact_stiffness = 0.0;  // N/m, environment (0: 1000 x spring rate)
    double rest_position = 0.0;      // m, environment
    double amplitude = 0.005;        // m, motion
    double frequency = 1.0;          // Hz, motion
};

struct CommandSettings {
    std::string type = "step";  // step, sine
    double amplitude = 0.0;     // N
    double offset = 0.0;        // N
    double frequency = 1.0;     // Hz, sine
    double start = 0.0;         // s, step onset
    double duration = 1.0;      // s
};

struct ExperimentSettings {
    double small_amplitude = 0.0;  // N
    double large_amplitude = 0.0;  // N
    double small_sweep_min = 1.0;  // Hz
    double small_sweep_max = 0.0;
    int small_sweep_points = 40;
    double large_sweep_min = 0.5;
    double large_sweep_max = 0.0;
    int large_sweep_points = 40;
    int warmup_cycles = 5;
    int measure_cycles = 10;
    double quasi_static_amplitude = 0.0;  // N, 0.1 Hz tracking check
    double impedance_amplitude = 0.005;   // m
    double impedance_low_frequency = 0.5; // Hz
    double impedance_min = 0.5;           // Hz, sweep for the impedance command
    double impedance_max = 500.0;
    int impedance_points = 25;
    double rigid_multiplier = 100.0;
    ResolveOptions resolve;
    ChatterOptions chatter;
    double shock_speed = 1.0;  // m/s
    double shock_mass = 1.0;   // kg
    EnergyEpisode energy;
    double step_force = 0.0;     // N, settling check
    double step_duration = 0.5;  // s
};

/// Fully resolved parameters for one run.
struct Settings {
    std::string catalog = "SEA-23-23";
    ActuatorSystem system;
    LoadSettings load;
    CommandSettings command;
    ExperimentSettings experiment;
    StanceProblem stance;
};

/// Defaults for a catalog entry. Throws std::invalid_argument for unknown names.
Settings default_settings(const std::string& catalog);

/// Defaults of the catalog named by `catalog_override`, else by
/// experiment.catalog, else SEA-23-23, overlaid with every key in `config`.
/// Throws ConfigError (with the key's line) for values of the wrong type or
/// failing validation.
Settings resolve(const RunConfig& config, const std::optional<std::string>& catalog_override = {});

/// Every key of the effective configuration, sectioned, numbers in SI with
/// shortest round-trip formatting. Parsing and resolving the text gives back
/// the same Settings.
std::string emit_config(const Settings& settings);

bool operator==(const Settings& a, const Settings& b);

}  // namespace sea
