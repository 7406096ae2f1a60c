#include "sea/catalog.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sea {

namespace {

UnitValue lbf(double v) { return {v, Unit::PoundForce}; }
UnitValue hp(double v) { return {v, Unit::Horsepower}; }
UnitValue in_per_s(double v) { return {v, Unit::InchPerSecond}; }
UnitValue hz(double v) { return {v, Unit::Hertz}; }
UnitValue lb(double v) { return {v, Unit::PoundMass}; }
UnitValue inches(double v) { return {v, Unit::Inch}; }

std::vector<ActuatorSpec> make_catalog() {
    std::vector<ActuatorSpec> rows;

    ActuatorSpec sea_23_23;
    sea_23_23.name = "SEA-23-23";
    sea_23_23.weight = lb(2.5);
    sea_23_23.max_stroke = inches(12);
    sea_23_23.max_speed = in_per_s(11);
    sea_23_23.continuous_force = lbf(127);
    sea_23_23.continuous_power = hp(0.22);
    sea_23_23.intermittent_force = lbf(300);
    sea_23_23.intermittent_power = hp(0.85);
    sea_23_23.continuous_power_to_weight_hp_per_lb = 0.088;
    sea_23_23.intermittent_power_to_weight_hp_per_lb = 0.34;
    sea_23_23.small_force_bandwidth = hz(35);
    sea_23_23.large_force_bandwidth = hz(7.5);
    sea_23_23.actuation_kind = ActuationKind::Electric;
    rows.push_back(sea_23_23);

    ActuatorSpec sea_12_25;
    sea_12_25.name = "SEA-12-25";
    sea_12_25.weight = lb(1);
    sea_12_25.max_stroke = inches(12);
    sea_12_25.max_speed = in_per_s(13);
    sea_12_25.continuous_force = lbf(30);
    sea_12_25.continuous_power = hp(0.06);
    sea_12_25.intermittent_force = lbf(87);
    sea_12_25.intermittent_power = hp(0.174);
    sea_12_25.continuous_power_to_weight_hp_per_lb = 0.06;
    sea_12_25.intermittent_power_to_weight_hp_per_lb = 0.174;
    sea_12_25.small_force_bandwidth = hz(25);
    sea_12_25.large_force_bandwidth = hz(5);
    sea_12_25.actuation_kind = ActuationKind::Electric;
    rows.push_back(sea_12_25);

    ActuatorSpec hyea_75_32;
    hyea_75_32.name = "HyEA-75-32";
    hyea_75_32.weight = lb(6);
    hyea_75_32.max_stroke = inches(12);
    hyea_75_32.max_speed = in_per_s(122);
    hyea_75_32.continuous_force = lbf(1324);
    hyea_75_32.continuous_power = hp(24.5);
    hyea_75_32.continuous_power_to_weight_hp_per_lb = 4.1;
    hyea_75_32.intermittent_power_to_weight_hp_per_lb = 4.1;
    hyea_75_32.small_force_bandwidth = hz(50);
    hyea_75_32.large_force_bandwidth = hz(10);
    hyea_75_32.actuation_kind = ActuationKind::Hydraulic;
    rows.push_back(hyea_75_32);

    ActuatorSpec hyea_50_31;
    hyea_50_31.name = "HyEA-50-31";
    hyea_50_31.weight = lb(5.5);
    hyea_50_31.max_stroke = inches(12);
    hyea_50_31.max_speed = in_per_s(132);
    hyea_50_31.continuous_force = lbf(588);
    hyea_50_31.continuous_power = hp(11.8);
    hyea_50_31.continuous_power_to_weight_hp_per_lb = 2.1;
    hyea_50_31.intermittent_power_to_weight_hp_per_lb = 2.1;
    hyea_50_31.small_force_bandwidth = hz(50);
    hyea_50_31.large_force_bandwidth = hz(10);
    hyea_50_31.actuation_kind = ActuationKind::Hydraulic;
    rows.push_back(hyea_50_31);

    for (const auto& r : rows) validate(r);
    return rows;
}

double relative_error(double derived, double listed) {
    return std::abs(derived - listed) / std::abs(listed);
}

void require_positive(const UnitValue& v, const char* what, const std::string& name) {
    if (!(v.magnitude > 0.0) || !std::isfinite(v.magnitude)) {
        throw std::invalid_argument(name + ": " + what + " must be positive");
    }
}

}  // namespace

UnitValue ActuatorSpec::peak_force() const {
    return intermittent_force ? *intermittent_force : continuous_force;
}

void validate(const ActuatorSpec& spec) {
    const auto& n = spec.name;
    require_positive(spec.weight, "weight", n);
    require_positive(spec.max_stroke, "max_stroke", n);
    require_positive(spec.max_speed, "max_speed", n);
    require_positive(spec.continuous_force, "continuous_force", n);
    require_positive(spec.continuous_power, "continuous_power", n);
    require_positive(spec.small_force_bandwidth, "small_force_bandwidth", n);
    require_positive(spec.large_force_bandwidth, "large_force_bandwidth", n);
    if (spec.intermittent_force) {
        require_positive(*spec.intermittent_force, "intermittent_force", n);
        if (to_si(*spec.intermittent_force) < to_si(spec.continuous_force)) {
            throw std::invalid_argument(n + ": intermittent force below continuous force");
        }
    }
    if (spec.intermittent_power) require_positive(*spec.intermittent_power, "intermittent_power", n);
    if (spec.actuation_kind == ActuationKind::Hydraulic &&
        (spec.intermittent_force || spec.intermittent_power)) {
        throw std::invalid_argument(n + ": hydraulic entries carry no intermittent ratings");
    }
    if (dimension_of(spec.weight.unit) != Dimension::Mass ||
        dimension_of(spec.max_stroke.unit) != Dimension::Length ||
        dimension_of(spec.max_speed.unit) != Dimension::Speed ||
        dimension_of(spec.continuous_force.unit) != Dimension::Force ||
        dimension_of(spec.continuous_power.unit) != Dimension::Power ||
        dimension_of(spec.small_force_bandwidth.unit) != Dimension::Frequency ||
        dimension_of(spec.large_force_bandwidth.unit) != Dimension::Frequency) {
        throw std::invalid_argument(n + ": field carries a unit of the wrong dimension");
    }
}

const std::vector<ActuatorSpec>& builtin_catalog() {
    static const std::vector<ActuatorSpec> catalog = make_catalog();
    return catalog;
}

const ActuatorSpec& find_spec(std::string_view name) {
    for (const auto& spec : builtin_catalog()) {
        if (spec.name == name) return spec;
    }
    throw std::invalid_argument("unknown catalog entry '" + std::string(name) + "'");
}

std::vector<ConsistencyCheck> consistency_report(const ActuatorSpec& spec) {
    std::vector<ConsistencyCheck> out;

    const double force_lbf = convert(spec.continuous_force, Unit::PoundForce).magnitude;
    const double speed_in_s = convert(spec.max_speed, Unit::InchPerSecond).magnitude;
    const double weight_lb = convert(spec.weight, Unit::PoundMass).magnitude;
    const double cont_hp = convert(spec.continuous_power, Unit::Horsepower).magnitude;

    const double derived_power = force_lbf * speed_in_s / units::kInchPoundForcePerSecondPerHorsepower;
    out.push_back({"continuous_power", derived_power, cont_hp, relative_error(derived_power, cont_hp),
                   "hp", true});

    const double cont_ptw = cont_hp / weight_lb;
    out.push_back({"continuous_power_to_weight", cont_ptw, spec.continuous_power_to_weight_hp_per_lb,
                   relative_error(cont_ptw, spec.continuous_power_to_weight_hp_per_lb), "hp/lb", true});

    // Hydraulic rows list identical continuous and intermittent ratings.
    const double int_hp = spec.intermittent_power
                              ? convert(*spec.intermittent_power, Unit::Horsepower).magnitude
                              : cont_hp;
    const double int_ptw = int_hp / weight_lb;
    out.push_back({"intermittent_power_to_weight", int_ptw,
                   spec.intermittent_power_to_weight_hp_per_lb,
                   relative_error(int_ptw, spec.intermittent_power_to_weight_hp_per_lb), "hp/lb", true});

    // The operating point of the intermittent rating is not published, so the
    // force x max-speed product is shown for reference only.
    if (spec.intermittent_force && spec.intermittent_power) {
        const double peak_lbf = convert(*spec.intermittent_force, Unit::PoundForce).magnitude;
        const double at_max_speed = peak_lbf * speed_in_s / units::kInchPoundForcePerSecondPerHorsepower;
        out.push_back({"intermittent_power_at_max_speed", at_max_speed, int_hp,
                       relative_error(at_max_speed, int_hp), "hp", false});
    }
    return out;
}

StiffnessDerivation derive_spring_stiffness(const ActuatorSpec& spec,
                                            std::optional<UnitValue> large_force_amplitude,
                                            Unit target) {
    const UnitValue amplitude = large_force_amplitude.value_or(spec.peak_force());
    if (dimension_of(amplitude.unit) != Dimension::Force) {
        throw UnitError("force amplitude must carry a force unit, got " +
                        std::string(unit_symbol(amplitude.unit)));
    }
    if (!(amplitude.magnitude > 0.0) || !std::isfinite(amplitude.magnitude)) {
        throw std::invalid_argument("force amplitude must be positive");
    }
    const double f0 = to_si(amplitude);
    const double f_large = to_si(spec.large_force_bandwidth);
    const double v_max = to_si(spec.max_speed);
    const double k = 2.0 * std::numbers::pi * f_large * f0 / v_max;

    StiffnessDerivation out;
    out.stiffness = convert({k, Unit::NewtonPerMeter}, target);

    std::ostringstream text;
    text.precision(6);
    text << spec.name << ": K = 2*pi*f_large*F0/v_max = 2*pi*" << f_large << " Hz * " << f0
         << " N / " << v_max << " m/s = " << k << " N/m ("
         << convert({k, Unit::NewtonPerMeter}, Unit::PoundForcePerInch).magnitude << " lbf/in)";
    out.derivation = text.str();
    return out;
}

}  // namespace sea
