#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sea/units.hpp"

namespace sea {

enum class ActuationKind { Electric, Hydraulic };

/// One row of the published actuator specification table, in the units the
/// table uses. The power-to-weight rows have no unit tag of their own and are
/// kept as plain hp/lb numbers.
struct ActuatorSpec {
    std::string name;
    UnitValue weight;
    UnitValue max_stroke;
    UnitValue max_speed;
    UnitValue continuous_force;
    UnitValue continuous_power;
    std::optional<UnitValue> intermittent_force;
    std::optional<UnitValue> intermittent_power;
    double continuous_power_to_weight_hp_per_lb = 0.0;
    double intermittent_power_to_weight_hp_per_lb = 0.0;
    UnitValue small_force_bandwidth;
    UnitValue large_force_bandwidth;
    ActuationKind actuation_kind = ActuationKind::Electric;

    /// Intermittent force when listed, else continuous force.
    [[nodiscard]] UnitValue peak_force() const;
};

/// Throws std::invalid_argument when a spec violates its invariants.
void validate(const ActuatorSpec& spec);

/// The four built-in actuators, in table order.
const std::vector<ActuatorSpec>& builtin_catalog();

/// Throws std::invalid_argument for unknown names.
const ActuatorSpec& find_spec(std::string_view name);

struct ConsistencyCheck {
    std::string name;
    double derived = 0.0;
    double listed = 0.0;
    double relative_error = 0.0;
    std::string unit;
    // Informational rows are reported but never gated on.
    bool gated = true;
};

std::vector<ConsistencyCheck> consistency_report(const ActuatorSpec& spec);

struct StiffnessDerivation {
    UnitValue stiffness;
    std::string derivation;
};

/// Spring rate at which the maximum speed is exactly what is needed to swing
/// the given force amplitude through the spring at the large-force bandwidth:
/// K = 2*pi*f_large*F0 / v_max. Amplitude defaults to peak_force().
StiffnessDerivation derive_spring_stiffness(const ActuatorSpec& spec,
                                            std::optional<UnitValue> large_force_amplitude = {},
                                            Unit target = Unit::NewtonPerMeter);

}  // namespace sea
