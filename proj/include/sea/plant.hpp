#pragma once

#include <functional>
#include <variant>

namespace sea {

/// Physical parameters of the two-mass actuator plant, all output-referred and
/// in SI units. The motor, gearing and ball screw are lumped into a single
/// effort source driving `motor_mass`.
struct PlantParams {
    double motor_mass = 0.0;               // kg
    double spring_stiffness = 0.0;         // N/m
    double spring_damping = 0.0;           // N*s/m, parallel to the spring
    double motor_viscous = 0.0;            // N*s/m
    double motor_coulomb = 0.0;            // N, breakaway and kinetic magnitude
    double max_effort_continuous = 0.0;    // N
    double max_effort_intermittent = 0.0;  // N, hard clamp on the effort command
    double max_speed = 0.0;                // m/s, hard clamp on motor velocity
    double sensor_quantum = 0.0;           // m, deflection quantization step
    double sensor_noise_sigma = 0.0;       // m
    double stick_velocity_band = 1e-4;     // m/s
};

/// Throws std::invalid_argument naming the first violated invariant.
void validate(const PlantParams& params);

/// Same plant with the spring (and the deflection sensor across it) replaced
/// by one `multiplier` times stiffer. Sensor quantum and noise shrink by the
/// same factor so the force resolution is unchanged, and spring damping grows
/// by sqrt(multiplier) to keep its damping ratio.
PlantParams stiffened(const PlantParams& params, double multiplier);

/// Output rigidly held at zero.
struct LockedLoad {};

/// Free load mass pushed by the spring and by an external force
/// f(t, x_l, v_l).
struct InertialLoad {
    double mass = 1.0;
    std::function<double(double, double, double)> external_force;
};

/// Massless output pressing on a one-sided contact spring that engages for
/// x_l > rest_position.
struct EnvironmentSpring {
    double contact_stiffness = 0.0;
    double rest_position = 0.0;
};

/// Output position imposed by the environment.
struct PrescribedMotion {
    std::function<double(double)> position;
    std::function<double(double)> velocity;
};

using LoadModel = std::variant<LockedLoad, InertialLoad, EnvironmentSpring, PrescribedMotion>;

/// x_l(t) = amplitude * sin(2*pi*f*t).
PrescribedMotion sinusoidal_motion(double amplitude, double frequency_hz);

void validate(const LoadModel& load);

struct SimState {
    double time = 0.0;
    double x_m = 0.0;
    double v_m = 0.0;
    double x_l = 0.0;
    double v_l = 0.0;
    bool stuck = false;  // the step that produced this state was a stick step

    [[nodiscard]] double deflection() const { return x_m - x_l; }
};

/// K*(x_m - x_l) + b_s*(v_m - v_l), the force the spring exerts on the load.
double spring_force(const PlantParams& params, const SimState& state);

/// Potentiometer model: perturb the deflection by sigma*noise_draw, round to
/// the nearest quantum, multiply by K. Spring damping is not seen.
double measure_force(const PlantParams& params, const SimState& state, double noise_draw);

struct FrictionResult {
    double force = 0.0;
    bool stuck = false;
};

/// Karnopp friction on the motor side. Inside the stick band with the net
/// applied force below breakaway the friction cancels it exactly; otherwise
/// Coulomb plus viscous opposing the motion (or, at exactly zero velocity,
/// opposing the applied force).
FrictionResult friction_force(const PlantParams& params, double velocity, double applied_net);

double clamp_effort(const PlantParams& params, double command);

/// Advances one fixed RK4 step. The effort is clamped to the intermittent
/// limit, the stick decision is taken once at the start of the step and the
/// motor velocity is clamped to max_speed. Throws std::invalid_argument for
/// dt <= 0 or non-finite inputs.
SimState step(const PlantParams& params, const SimState& state, double motor_effort_command,
              const LoadModel& load, double dt);

/// Kinetic plus spring potential energy (motor, load and spring).
double mechanical_energy(const PlantParams& params, const SimState& state, const LoadModel& load);

/// Fills x_l and v_l for load models that determine them (everything but
/// InertialLoad).
SimState resolve_load(const PlantParams& params, SimState state, const LoadModel& load);

}  // namespace sea
