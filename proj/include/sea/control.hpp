#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sea/plant.hpp"

namespace sea {

/// PD force servo on the measured spring force.
struct ControllerConfig {
    double kp = 0.0;                    // effort per unit force error
    double kd = 0.0;                    // s, effort per unit force-error rate
    bool feedforward = true;            // add the desired force to the command
    double sample_period = 1e-3;        // s
    double derivative_filter_tc = 1e-3; // s, first-order filter on the error rate
};

void validate(const ControllerConfig& cfg);

/// Position servo cascaded on the force servo.
struct PositionLoopConfig {
    double kp_pos = 0.0;       // N/m
    double kd_pos = 0.0;       // N*s/m
    double force_limit = 1.0;  // N
};

void validate(const PositionLoopConfig& cfg);

/// One logged sample. Row i holds the state at t_i; cmd, effort, force_meas
/// and stuck describe the step that ended at t_i (row 0: the first controller
/// tick and zero effort).
struct TrajectoryRecord {
    double time_s = 0.0;
    double x_m = 0.0;
    double v_m = 0.0;
    double x_l = 0.0;
    double v_l = 0.0;
    double deflection_m = 0.0;
    double force_true_N = 0.0;
    double force_meas_N = 0.0;
    double cmd_N = 0.0;
    double effort_N = 0.0;
    bool stuck = false;
};

struct Trajectory {
    double dt = 0.0;
    std::vector<TrajectoryRecord> records;
};

/// u = (F_des if feedforward) + kp*(F_des - F_meas) + kd*rate.
/// The plant applies saturation. Throws on non-finite inputs.
double pd_force_command(const ControllerConfig& cfg, double desired_force, double measured_force,
                        double filtered_error_rate);

/// Force setpoint clamp(kp_pos*(x_des - x_l) - kd_pos*v_l, +-force_limit).
double position_over_force(const PositionLoopConfig& cfg, double desired_position,
                           const SimState& state);

/// Error differentiator run at the controller rate.
class ErrorRateFilter {
public:
    ErrorRateFilter(double sample_period, double time_constant);
    double update(double error);
    [[nodiscard]] double rate() const { return rate_; }

private:
    double sample_period_;
    double alpha_;
    double previous_error_ = 0.0;
    double rate_ = 0.0;
    bool primed_ = false;
};

using ForceProfile = std::function<double(double)>;
using PositionProfile = std::function<double(double)>;

/// Runs the sampled force loop against the plant. The controller ticks every
/// sample_period on the quantized, noisy measured force and holds its output
/// between ticks; the plant integrates at dt. Noise comes from a generator
/// seeded with noise_seed, so equal arguments give bit-identical logs.
/// Throws std::invalid_argument when sample_period is not an integer multiple
/// of dt or duration is not positive.
Trajectory run_closed_loop(const PlantParams& plant, const LoadModel& load,
                           const ControllerConfig& cfg, const ForceProfile& command,
                           double duration, double dt, std::uint64_t noise_seed,
                           const SimState& initial = {});

/// Same episode with the position loop generating the force setpoint.
Trajectory run_position_loop(const PlantParams& plant, const LoadModel& load,
                             const ControllerConfig& cfg, const PositionLoopConfig& position_cfg,
                             const PositionProfile& desired_position, double duration, double dt,
                             std::uint64_t noise_seed, const SimState& initial = {});

/// Header: time_s,x_m,v_m,x_l,v_l,deflection_m,force_true_N,force_meas_N,cmd_N,effort_N,stuck
void write_csv(std::ostream& out, const Trajectory& trajectory);

/// Inverse of write_csv. Throws std::runtime_error on malformed input.
Trajectory read_csv(std::istream& in);

}  // namespace sea
