#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sea/control.hpp"
#include "sea/plant.hpp"

namespace sea {

/// A plant together with its force servo and the integration step used to
/// simulate it.
struct ActuatorSystem {
    PlantParams plant;
    ControllerConfig controller;
    double dt = 1e-4;
    std::uint64_t seed = 0;
};

struct FreqResponsePoint {
    double frequency_hz = 0.0;
    double amplitude_ratio = 0.0;
    double phase_deg = 0.0;
    bool unstable = false;
};

struct ImpedancePoint {
    double frequency_hz = 0.0;
    double impedance_magnitude = 0.0;  // N/m
};

struct Metric {
    std::string name;
    double value = 0.0;
    std::string unit;
};

struct Verdict {
    std::string name;
    bool value = false;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<Metric> metrics;
    std::vector<Verdict> verdicts;
    std::vector<std::string> artifacts;

    void add(std::string name, double value, std::string unit);
    void flag(std::string name, bool value);
    /// Throws std::out_of_range when absent.
    [[nodiscard]] double metric(std::string_view name) const;
    [[nodiscard]] bool verdict(std::string_view name) const;
    [[nodiscard]] std::string to_text() const;
};

struct SweepOptions {
    int warmup_cycles = 5;
    int measure_cycles = 10;
    // Evaluate frequency points on worker threads. Results do not depend on it.
    bool parallel = true;
};

/// Least-squares fit of a*sin(w*t + phi) + c to `signal`. Returns amplitude
/// and phase (degrees). Needs at least three samples.
struct SineFit {
    double amplitude = 0.0;
    double phase_deg = 0.0;
};
SineFit fit_sine(std::span<const double> time, std::span<const double> signal, double frequency_hz);

/// Sine force tracking against a locked output. Each point runs its own
/// episode: warmup cycles are discarded and the ratio and phase of achieved
/// spring force against the command come from the measured cycles. A point
/// whose per-cycle amplitude grows more than 2x over the measured window is
/// flagged unstable. Throws std::invalid_argument for amplitude <= 0.
std::vector<FreqResponsePoint> bode_force_tracking(const ActuatorSystem& system, double amplitude,
                                                   std::span<const double> frequencies,
                                                   const SweepOptions& options = {});

struct BandwidthResult {
    double frequency_hz = 0.0;
    bool censored = false;  // no -3 dB crossing inside the tested range
};

/// First crossing of ratio 1/sqrt(2), interpolated linearly in log-frequency.
/// Unstable points count as below the threshold. Throws for empty input or a
/// first point already below the threshold.
BandwidthResult bandwidth_from_points(std::span<const FreqResponsePoint> points);

struct ImpedanceOptions {
    int warmup_cycles = 5;
    int measure_cycles = 10;
    // Replace the servo with an ideal position lock on the motor.
    bool motor_locked = false;
    bool parallel = true;
};

/// Output impedance under imposed load motion x_l = amplitude*sin(2*pi*f*t)
/// with the servo regulating zero force. Throws for amplitude <= 0.
std::vector<ImpedancePoint> output_impedance(const ActuatorSystem& system, double amplitude,
                                             std::span<const double> frequencies,
                                             const ImpedanceOptions& options = {});

struct ResolveOptions {
    double upper = 50.0;       // N, bisection bracket top
    double step = 0.1;         // N, bisection resolution and floor
    double settle_time = 1.0;  // s per trial
    double window = 0.25;      // s, averaging window at the end of each trial
    double tolerance = 0.25;   // relative
};

struct ResolutionResult {
    double force = 0.0;  // N
    bool censored = false;
};

/// True when a step command of `force` against a locked output settles with
/// the mean measured force within the relative tolerance.
bool force_resolves(const ActuatorSystem& system, double force, const ResolveOptions& options = {});

/// Bisection on the step magnitude over [0, upper].
ResolutionResult smallest_resolvable_force(const ActuatorSystem& system,
                                           const ResolveOptions& options = {});

struct ChatterOptions {
    double step_force = 444.8221615260;    // N (100 lbf)
    double contact_stiffness_ratio = 1e3;  // contact stiffness over the base spring rate
    double duration = 1.0;                 // s
    double sustain_fraction = 0.2;         // tail of the run inspected for oscillation
    double chatter_threshold = 0.5;        // sustained amplitude over command
};

/// Step force into a stiff one-sided contact with the spring stiffened by
/// `sensor_stiffness_multiplier` (1 is the elastic actuator, large values
/// emulate a load cell). Same servo gains in every case.
ExperimentReport chatter_experiment(const ActuatorSystem& base, double sensor_stiffness_multiplier,
                                    const ChatterOptions& options = {});

struct ShockOptions {
    double rigid_multiplier = 100.0;
    double half_periods = 4.0;  // simulated span in units of the contact half period
};

/// A free mass arriving at `impact_speed` against the stationary output while
/// the servo regulates zero force. Reports the peak spring force for the
/// elastic configuration and for the stiffened proxy.
ExperimentReport shock_test(const ActuatorSystem& system, double impact_speed, double impact_mass,
                            const ShockOptions& options = {});

/// Work and energy bookkeeping over a logged episode. All sums are trapezoidal
/// over the log. Motor work is effort times motor velocity; load work is
/// spring force times load velocity; dissipation covers Coulomb, viscous and
/// spring damping, the kinetic energy removed when the motor sticks, and the
/// work absorbed by the speed clamp while the motor is pinned at max speed.
/// `cycle_period` enables per-cycle figures over the last whole cycle.
ExperimentReport energy_audit(const Trajectory& trajectory, const PlantParams& params,
                              std::optional<double> cycle_period = {});

/// Step command of `force` against a locked output. Settling time is the end
/// of the last sample outside +-band*force; the tail error is the largest
/// relative deviation over the final 20% of the run.
ExperimentReport step_response(const ActuatorSystem& system, double force, double duration,
                               double band = 0.02);

struct EnergyEpisode {
    double load_mass = 10.0;          // kg
    double load_damping = 500.0;      // N*s/m, resistive environment on the load
    double amplitude = 0.005;         // m
    double frequency_hz = 2.0;
    double duration = 3.0;            // s
    PositionLoopConfig position{20000.0, 400.0, 1000.0};
};

/// Harmonic position tracking of a damped load through the cascaded loops.
Trajectory harmonic_tracking_episode(const ActuatorSystem& system, const EnergyEpisode& episode = {});

std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace sea
