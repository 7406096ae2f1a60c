#include "sea/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <type_traits>

#include "sea/catalog.hpp"
#include "sea/csv.hpp"
#include "sea/defaults.hpp"

namespace sea {

ConfigError::ConfigError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                        ": " + message
                                  : message),
      line_(line),
      column_(column) {}

namespace {

enum class Kind { Number, Integer, Bool, Text };

struct KeySpec {
    Kind kind;
    std::optional<Dimension> dimension;
    std::function<void(Settings&, const ConfigValue&)> apply;
    std::function<ConfigValue(const Settings&)> read;
};

double num(const ConfigValue& v) { return std::get<double>(v); }

template <class Get>
KeySpec number(std::optional<Dimension> dim, Get get) {
    return {Kind::Number, dim, [get](Settings& s, const ConfigValue& v) { get(s) = num(v); },
            [get](const Settings& s) { return ConfigValue(get(s)); }};
}

template <class Get>
KeySpec integer(Get get) {
    return {Kind::Integer, {},
            [get](Settings& s, const ConfigValue& v) {
                get(s) = static_cast<std::remove_cvref_t<decltype(get(s))>>(num(v));
            },
            [get](const Settings& s) { return ConfigValue(static_cast<double>(get(s))); }};
}

template <class Get>
KeySpec boolean(Get get) {
    return {Kind::Bool, {}, [get](Settings& s, const ConfigValue& v) { get(s) = std::get<bool>(v); },
            [get](const Settings& s) { return ConfigValue(get(s)); }};
}

template <class Get>
KeySpec text(Get get) {
    return {Kind::Text, {}, [get](Settings& s, const ConfigValue& v) { get(s) = std::get<std::string>(v); },
            [get](const Settings& s) { return ConfigValue(get(s)); }};
}

constexpr auto F = Dimension::Force;
constexpr auto L = Dimension::Length;
constexpr auto V = Dimension::Speed;
constexpr auto K = Dimension::Stiffness;
constexpr auto Hz = Dimension::Frequency;
constexpr auto M = Dimension::Mass;
const std::optional<Dimension> none;

// Fixed keys in emission order.
const std::vector<std::pair<std::string, KeySpec>>& registry() {
    static const std::vector<std::pair<std::string, KeySpec>> keys = [] {
        std::vector<std::pair<std::string, KeySpec>> k;
        auto add = [&](std::string name, KeySpec spec) { k.emplace_back(std::move(name), std::move(spec)); };
        add("plant.motor_mass", number(M, [](auto& s) -> auto& { return s.system.plant.motor_mass; }));
        add("plant.spring_stiffness", number(K, [](auto& s) -> auto& { return s.system.plant.spring_stiffness; }));
        add("plant.spring_damping", number(none, [](auto& s) -> auto& { return s.system.plant.spring_damping; }));
        add("plant.motor_viscous", number(none, [](auto& s) -> auto& { return s.system.plant.motor_viscous; }));
        add("plant.motor_coulomb", number(F, [](auto& s) -> auto& { return s.system.plant.motor_coulomb; }));
        add("plant.max_effort_continuous",
            number(F, [](auto& s) -> auto& { return s.system.plant.max_effort_continuous; }));
        add("plant.max_effort_intermittent",
            number(F, [](auto& s) -> auto& { return s.system.plant.max_effort_intermittent; }));
        add("plant.max_speed", number(V, [](auto& s) -> auto& { return s.system.plant.max_speed; }));
        add("plant.sensor_quantum", number(L, [](auto& s) -> auto& { return s.system.plant.sensor_quantum; }));
        add("plant.sensor_noise_sigma",
            number(L, [](auto& s) -> auto& { return s.system.plant.sensor_noise_sigma; }));
        add("plant.stick_velocity_band",
            number(V, [](auto& s) -> auto& { return s.system.plant.stick_velocity_band; }));

        add("controller.kp", number(none, [](auto& s) -> auto& { return s.system.controller.kp; }));
        add("controller.kd", number(none, [](auto& s) -> auto& { return s.system.controller.kd; }));
        add("controller.feedforward", boolean([](auto& s) -> auto& { return s.system.controller.feedforward; }));
        add("controller.sample_period",
            number(none, [](auto& s) -> auto& { return s.system.controller.sample_period; }));
        add("controller.derivative_filter_tc",
            number(none, [](auto& s) -> auto& { return s.system.controller.derivative_filter_tc; }));

        add("load.type", text([](auto& s) -> auto& { return s.load.type; }));
        add("load.mass", number(M, [](auto& s) -> auto& { return s.load.mass; }));
        add("load.initial_velocity", number(V, [](auto& s) -> auto& { return s.load.initial_velocity; }));
        add("load.contact_stiffness", number(K, [](auto& s) -> auto& { return s.load.contact_stiffness; }));
        add("load.rest_position", number(L, [](auto& s) -> auto& { return s.load.rest_position; }));
        add("load.amplitude", number(L, [](auto& s) -> auto& { return s.load.amplitude; }));
        add("load.frequency", number(Hz, [](auto& s) -> auto& { return s.load.frequency; }));

        add("command.type", text([](auto& s) -> auto& { return s.command.type; }));
        add("command.amplitude", number(F, [](auto& s) -> auto& { return s.command.amplitude; }));
        add("command.offset", number(F, [](auto& s) -> auto& { return s.command.offset; }));
        add("command.frequency", number(Hz, [](auto& s) -> auto& { return s.command.frequency; }));
        add("command.start", number(none, [](auto& s) -> auto& { return s.command.start; }));
        add("command.duration", number(none, [](auto& s) -> auto& { return s.command.duration; }));

        add("experiment.catalog", text([](auto& s) -> auto& { return s.catalog; }));
        add("experiment.seed", integer([](auto& s) -> auto& { return s.system.seed; }));
        add("experiment.dt", number(none, [](auto& s) -> auto& { return s.system.dt; }));
        add("experiment.bode.small_amplitude",
            number(F, [](auto& s) -> auto& { return s.experiment.small_amplitude; }));
        add("experiment.bode.large_amplitude",
            number(F, [](auto& s) -> auto& { return s.experiment.large_amplitude; }));
        add("experiment.bode.small_min", number(Hz, [](auto& s) -> auto& { return s.experiment.small_sweep_min; }));
        add("experiment.bode.small_max", number(Hz, [](auto& s) -> auto& { return s.experiment.small_sweep_max; }));
        add("experiment.bode.small_points", integer([](auto& s) -> auto& { return s.experiment.small_sweep_points; }));
        add("experiment.bode.large_min", number(Hz, [](auto& s) -> auto& { return s.experiment.large_sweep_min; }));
        add("experiment.bode.large_max", number(Hz, [](auto& s) -> auto& { return s.experiment.large_sweep_max; }));
        add("experiment.bode.large_points", integer([](auto& s) -> auto& { return s.experiment.large_sweep_points; }));
        add("experiment.bode.warmup_cycles", integer([](auto& s) -> auto& { return s.experiment.warmup_cycles; }));
        add("experiment.bode.measure_cycles", integer([](auto& s) -> auto& { return s.experiment.measure_cycles; }));
        add("experiment.bode.quasi_static_amplitude",
            number(F, [](auto& s) -> auto& { return s.experiment.quasi_static_amplitude; }));
        add("experiment.impedance.amplitude",
            number(L, [](auto& s) -> auto& { return s.experiment.impedance_amplitude; }));
        add("experiment.impedance.low_frequency",
            number(Hz, [](auto& s) -> auto& { return s.experiment.impedance_low_frequency; }));
        add("experiment.impedance.min", number(Hz, [](auto& s) -> auto& { return s.experiment.impedance_min; }));
        add("experiment.impedance.max", number(Hz, [](auto& s) -> auto& { return s.experiment.impedance_max; }));
        add("experiment.impedance.points", integer([](auto& s) -> auto& { return s.experiment.impedance_points; }));
        add("experiment.rigid_multiplier",
            number(none, [](auto& s) -> auto& { return s.experiment.rigid_multiplier; }));
        add("experiment.resolve.upper", number(F, [](auto& s) -> auto& { return s.experiment.resolve.upper; }));
        add("experiment.resolve.step", number(F, [](auto& s) -> auto& { return s.experiment.resolve.step; }));
        add("experiment.resolve.settle_time",
            number(none, [](auto& s) -> auto& { return s.experiment.resolve.settle_time; }));
        add("experiment.resolve.window", number(none, [](auto& s) -> auto& { return s.experiment.resolve.window; }));
        add("experiment.resolve.tolerance",
            number(none, [](auto& s) -> auto& { return s.experiment.resolve.tolerance; }));
        add("experiment.chatter.step_force",
            number(F, [](auto& s) -> auto& { return s.experiment.chatter.step_force; }));
        add("experiment.chatter.contact_stiffness_ratio",
            number(none, [](auto& s) -> auto& { return s.experiment.chatter.contact_stiffness_ratio; }));
        add("experiment.chatter.duration",
            number(none, [](auto& s) -> auto& { return s.experiment.chatter.duration; }));
        add("experiment.chatter.sustain_fraction",
            number(none, [](auto& s) -> auto& { return s.experiment.chatter.sustain_fraction; }));
        add("experiment.chatter.threshold",
            number(none, [](auto& s) -> auto& { return s.experiment.chatter.chatter_threshold; }));
        add("experiment.shock.speed", number(V, [](auto& s) -> auto& { return s.experiment.shock_speed; }));
        add("experiment.shock.mass", number(M, [](auto& s) -> auto& { return s.experiment.shock_mass; }));
        add("experiment.energy.load_mass", number(M, [](auto& s) -> auto& { return s.experiment.energy.load_mass; }));
        add("experiment.energy.load_damping",
            number(none, [](auto& s) -> auto& { return s.experiment.energy.load_damping; }));
        add("experiment.energy.amplitude", number(L, [](auto& s) -> auto& { return s.experiment.energy.amplitude; }));
        add("experiment.energy.frequency",
            number(Hz, [](auto& s) -> auto& { return s.experiment.energy.frequency_hz; }));
        add("experiment.energy.duration",
            number(none, [](auto& s) -> auto& { return s.experiment.energy.duration; }));
        add("experiment.energy.kp_pos",
            number(K, [](auto& s) -> auto& { return s.experiment.energy.position.kp_pos; }));
        add("experiment.energy.kd_pos",
            number(none, [](auto& s) -> auto& { return s.experiment.energy.position.kd_pos; }));
        add("experiment.energy.force_limit",
            number(F, [](auto& s) -> auto& { return s.experiment.energy.position.force_limit; }));
        add("experiment.step.force", number(F, [](auto& s) -> auto& { return s.experiment.step_force; }));
        add("experiment.step.duration", number(none, [](auto& s) -> auto& { return s.experiment.step_duration; }));

        add("stance.regularization", number(none, [](auto& s) -> auto& { return s.stance.regularization; }));
        add("stance.force.x", number(F, [](auto& s) -> auto& { return s.stance.desired_force.x(); }));
        add("stance.force.y", number(F, [](auto& s) -> auto& { return s.stance.desired_force.y(); }));
        add("stance.force.z", number(F, [](auto& s) -> auto& { return s.stance.desired_force.z(); }));
        add("stance.moment.x", number(none, [](auto& s) -> auto& { return s.stance.desired_moment.x(); }));
        add("stance.moment.y", number(none, [](auto& s) -> auto& { return s.stance.desired_moment.y(); }));
        add("stance.moment.z", number(none, [](auto& s) -> auto& { return s.stance.desired_moment.z(); }));
        return k;
    }();
    return keys;
}

// Per-foot keys: stance.foot<i>.<field>.
constexpr int kMaxFeet = 16;
const std::vector<std::string> kFootFields = {"x", "y", "z", "nx", "ny", "nz", "mu", "contact", "cap"};

struct FootKey {
    int index;
    std::string field;
};

std::optional<FootKey> foot_key(const std::string& key) {
    const std::string prefix = "stance.foot";
    if (key.rfind(prefix, 0) != 0) return {};
    const auto dot = key.find('.', prefix.size());
    if (dot == std::string::npos || dot == prefix.size()) return {};
    const std::string digits = key.substr(prefix.size(), dot - prefix.size());
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return {};
    if (digits.size() > 1 && digits[0] == '0') return {};
    const int index = std::stoi(digits);
    const std::string field = key.substr(dot + 1);
    if (index >= kMaxFeet || std::find(kFootFields.begin(), kFootFields.end(), field) == kFootFields.end()) return {};
    return FootKey{index, field};
}

Kind foot_kind(const std::string& field) { return field == "contact" ? Kind::Bool : Kind::Number; }

std::optional<Dimension> foot_dimension(const std::string& field) {
    if (field == "x" || field == "y" || field == "z") return L;
    if (field == "cap") return F;
    return {};
}

const KeySpec* find_key(const std::string& key) {
    for (const auto& [name, spec] : registry()) {
        if (name == key) return &spec;
    }
    return nullptr;
}

std::string trim(const std::string& s, std::size_t& offset) {
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    offset = b;
    return s.substr(b, e - b);
}

bool valid_identifier(const std::string& s) {
    if (s.empty() || s.front() == '.' || s.back() == '.') return false;
    char prev = 0;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
        if (!ok || (c == '.' && prev == '.')) return false;
        prev = c;
    }
    return true;
}

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Number: return "a number";
        case Kind::Integer: return "a whole number";
        case Kind::Bool: return "true or false";
        case Kind::Text: return "text";
    }
    return "";
}

ConfigValue parse_value(const std::string& key, const std::string& raw, Kind kind, std::optional<Dimension> dim,
                        int line, int column) {
    if (kind == Kind::Text) return raw;
    if (kind == Kind::Bool) {
        if (raw == "true") return true;
        if (raw == "false") return false;
        throw ConfigError("key '" + key + "' expects " + kind_name(kind) + ", got '" + raw + "'", line, column);
    }
    double value = 0.0;
    const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (res.ec != std::errc() || res.ptr == raw.data()) {
        throw ConfigError("key '" + key + "' expects " + kind_name(kind) + ", got '" + raw + "'", line, column);
    }
    std::size_t used = static_cast<std::size_t>(res.ptr - raw.data());
    std::size_t lead = 0;
    const std::string suffix = trim(raw.substr(used), lead);
    if (!suffix.empty()) {
        const int suffix_col = column + static_cast<int>(used + lead);
        Unit unit;
        try {
            unit = parse_unit(suffix);
        } catch (const UnitError&) {
            throw ConfigError("unknown unit '" + suffix + "' for key '" + key + "'", line, suffix_col);
        }
        if (!dim) throw ConfigError("key '" + key + "' takes no unit suffix", line, suffix_col);
        if (dimension_of(unit) != *dim) {
            throw ConfigError("unit '" + suffix + "' does not fit key '" + key + "' (expects " +
                                  std::string(unit_symbol(canonical_unit(*dim))) + ")",
                              line, suffix_col);
        }
        value = to_si({value, unit});
    }
    if (kind == Kind::Integer) {
        if (!(value >= 0.0) || value != std::floor(value) || value > 9007199254740992.0) {
            throw ConfigError("key '" + key + "' expects " + kind_name(kind) + ", got '" + raw + "'", line, column);
        }
    }
    return value;
}

std::string render(const ConfigValue& v, Kind kind) {
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    const double d = std::get<double>(v);
    if (kind == Kind::Integer) {
        std::ostringstream out;
        out << static_cast<std::uint64_t>(d);
        return out.str();
    }
    return csv::number(d);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw_line;
    std::string section;
    int line = 0;
    while (std::getline(in, raw_line)) {
        ++line;
        if (!raw_line.empty() && raw_line.back() == '\r') raw_line.pop_back();
        const auto comment = raw_line.find_first_of("#;");
        const std::string body = raw_line.substr(0, comment);
        std::size_t lead = 0;
        const std::string stmt = trim(body, lead);
        if (stmt.empty()) continue;
        const int col0 = static_cast<int>(lead) + 1;

        if (stmt.front() == '[') {
            if (stmt.back() != ']') throw ConfigError("section header missing ']'", line, col0);
            std::size_t inner_lead = 0;
            const std::string name = trim(stmt.substr(1, stmt.size() - 2), inner_lead);
            if (!name.empty() && !valid_identifier(name)) {
                throw ConfigError("bad section name '" + name + "'", line, col0 + 1 + static_cast<int>(inner_lead));
            }
            section = name;
            continue;
        }

        const auto eq = stmt.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line, col0);
        std::size_t key_lead = 0;
        const std::string key = trim(stmt.substr(0, eq), key_lead);
        const int key_col = col0 + static_cast<int>(key_lead);
        if (!valid_identifier(key)) throw ConfigError("bad key '" + key + "'", line, key_col);
        const std::string full = section.empty() ? key : section + "." + key;

        Kind kind = Kind::Number;
        std::optional<Dimension> dim;
        if (const KeySpec* spec = find_key(full)) {
            kind = spec->kind;
            dim = spec->dimension;
        } else if (const auto fk = foot_key(full)) {
            kind = foot_kind(fk->field);
            dim = foot_dimension(fk->field);
        } else {
            throw ConfigError("unknown key '" + full + "'", line, key_col);
        }
        if (cfg.entries.count(full) != 0) throw ConfigError("duplicate key '" + full + "'", line, key_col);

        std::size_t value_lead = 0;
        const std::string value = trim(stmt.substr(eq + 1), value_lead);
        const int value_col = col0 + static_cast<int>(eq + 1 + value_lead);
        if (value.empty()) throw ConfigError("missing value for '" + full + "'", line, value_col);
        cfg.entries[full] = {parse_value(full, value, kind, dim, line, value_col), line};
    }
    return cfg;
}

Settings default_settings(const std::string& catalog) {
    const ActuatorSpec& spec = find_spec(catalog);
    Settings s;
    s.catalog = spec.name;
    s.system = default_system(spec);

    const double continuous = to_si(spec.continuous_force);
    const double peak = to_si(spec.peak_force());
    const double hundred_lbf = 100.0 * units::kNewtonsPerPoundForce;
    ExperimentSettings& e = s.experiment;
    e.small_amplitude = defaults::kSmallAmplitudeFraction * continuous;
    e.large_amplitude = peak;
    e.small_sweep_max = 4.0 * to_si(spec.small_force_bandwidth);
    e.large_sweep_max = 4.0 * to_si(spec.large_force_bandwidth);
    e.quasi_static_amplitude = 10.0 * units::kNewtonsPerPoundForce;
    e.impedance_amplitude = defaults::kImpedanceAmplitude;
    e.rigid_multiplier = defaults::kRigidMultiplier;
    e.chatter.step_force = std::min(hundred_lbf, continuous);
    e.shock_speed = defaults::kShockSpeed;
    e.shock_mass = defaults::kShockMass;
    e.step_force = std::min(hundred_lbf, continuous);

    s.command.amplitude = e.step_force;

    // Three feet on a line carrying 900 N, no friction limit.
    for (double x : {-0.5, 0.2, 0.6}) {
        FootContact foot;
        foot.position = Vec3(x, 0.0, 0.0);
        foot.friction_coefficient = std::numeric_limits<double>::infinity();
        s.stance.feet.push_back(foot);
    }
    s.stance.desired_force = Vec3(0.0, 0.0, 900.0);
    return s;
}

Settings resolve(const RunConfig& config, const std::optional<std::string>& catalog_override) {
    std::string catalog = "SEA-23-23";
    int catalog_line = 0;
    if (const auto it = config.entries.find("experiment.catalog"); it != config.entries.end()) {
        catalog = std::get<std::string>(it->second.value);
        catalog_line = it->second.line;
    }
    if (catalog_override) catalog = *catalog_override;

    Settings s;
    try {
        s = default_settings(catalog);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), catalog_line, catalog_line > 0 ? 1 : 0);
    }

    // Foot keys replace the default stance layout as a whole.
    int feet = 0;
    for (const auto& [key, entry] : config.entries) {
        if (const auto fk = foot_key(key)) feet = std::max(feet, fk->index + 1);
    }
    if (feet > 0) s.stance.feet.assign(static_cast<std::size_t>(feet), FootContact{});

    for (const auto& [key, entry] : config.entries) {
        if (key == "experiment.catalog") continue;
        if (const KeySpec* spec = find_key(key)) {
            spec->apply(s, entry.value);
            continue;
        }
        const auto fk = foot_key(key);
        FootContact& foot = s.stance.feet[static_cast<std::size_t>(fk->index)];
        const std::string& f = fk->field;
        if (f == "contact") {
            foot.in_contact = std::get<bool>(entry.value);
            continue;
        }
        const double v = num(entry.value);
        if (f == "x") foot.position.x() = v;
        else if (f == "y") foot.position.y() = v;
        else if (f == "z") foot.position.z() = v;
        else if (f == "nx") foot.normal.x() = v;
        else if (f == "ny") foot.normal.y() = v;
        else if (f == "nz") foot.normal.z() = v;
        else if (f == "mu") foot.friction_coefficient = v;
        else if (f == "cap") foot.max_normal_force = v;
    }

    try {
        validate(s.system.plant);
        validate(s.system.controller);
        validate(s.experiment.energy.position);
        if (!(s.system.dt > 0.0)) throw std::invalid_argument("experiment.dt must be positive");
        const auto& types = {"locked", "inertial", "environment", "motion"};
        if (std::find(types.begin(), types.end(), s.load.type) == types.end()) {
            throw std::invalid_argument("load.type must be locked, inertial, environment or motion");
        }
        if (s.command.type != "step" && s.command.type != "sine") {
            throw std::invalid_argument("command.type must be step or sine");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), 0, 0);
    }
    return s;
}

std::string emit_config(const Settings& s) {
    std::ostringstream out;
    std::string section;
    auto put = [&](const std::string& key, const std::string& value) {
        const auto dot = key.find('.');
        const std::string sec = key.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) out << '\n';
            out << '[' << sec << "]\n";
            section = sec;
        }
        out << key.substr(dot + 1) << " = " << value << '\n';
    };
    for (const auto& [key, spec] : registry()) {
        if (key == "experiment.catalog") {
            put(key, s.catalog);
            continue;
        }
        put(key, render(spec.read(s), spec.kind));
    }
    for (std::size_t i = 0; i < s.stance.feet.size(); ++i) {
        const FootContact& f = s.stance.feet[i];
        const std::string p = "stance.foot" + std::to_string(i) + ".";
        put(p + "x", csv::number(f.position.x()));
        put(p + "y", csv::number(f.position.y()));
        put(p + "z", csv::number(f.position.z()));
        put(p + "nx", csv::number(f.normal.x()));
        put(p + "ny", csv::number(f.normal.y()));
        put(p + "nz", csv::number(f.normal.z()));
        put(p + "mu", csv::number(f.friction_coefficient));
        put(p + "contact", f.in_contact ? "true" : "false");
        if (f.max_normal_force) put(p + "cap", csv::number(*f.max_normal_force));
    }
    return out.str();
}

bool operator==(const Settings& a, const Settings& b) {
    const auto& pa = a.system.plant;
    const auto& pb = b.system.plant;
    const auto& ca = a.system.controller;
    const auto& cb = b.system.controller;
    if (a.catalog != b.catalog || a.system.dt != b.system.dt || a.system.seed != b.system.seed) return false;
    if (pa.motor_mass != pb.motor_mass || pa.spring_stiffness != pb.spring_stiffness ||
        pa.spring_damping != pb.spring_damping || pa.motor_viscous != pb.motor_viscous ||
        pa.motor_coulomb != pb.motor_coulomb || pa.max_effort_continuous != pb.max_effort_continuous ||
        pa.max_effort_intermittent != pb.max_effort_intermittent || pa.max_speed != pb.max_speed ||
        pa.sensor_quantum != pb.sensor_quantum || pa.sensor_noise_sigma != pb.sensor_noise_sigma ||
        pa.stick_velocity_band != pb.stick_velocity_band)
        return false;
    if (ca.kp != cb.kp || ca.kd != cb.kd || ca.feedforward != cb.feedforward ||
        ca.sample_period != cb.sample_period || ca.derivative_filter_tc != cb.derivative_filter_tc)
        return false;
    // Every remaining field is reachable through the key registry.
    for (const auto& [key, spec] : registry()) {
        if (spec.read(a) != spec.read(b)) return false;
    }
    if (a.stance.feet.size() != b.stance.feet.size()) return false;
    for (std::size_t i = 0; i < a.stance.feet.size(); ++i) {
        const FootContact& x = a.stance.feet[i];
        const FootContact& y = b.stance.feet[i];
        if (x.position != y.position || x.normal != y.normal || x.friction_coefficient != y.friction_coefficient ||
            x.in_contact != y.in_contact || x.max_normal_force != y.max_normal_force)
            return false;
    }
    return true;
}

}  // namespace sea
