#include "sea/control.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sea/csv.hpp"

namespace sea {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

using Setpoint = std::function<double(double, const SimState&)>;

Trajectory simulate(const PlantParams& plant, const LoadModel& load, const ControllerConfig& cfg,
                    const Setpoint& setpoint, double duration, double dt, std::uint64_t seed, const SimState& initial) {
    validate(plant);
    validate(load);
    validate(cfg);
    require(std::isfinite(duration) && duration > 0.0, "duration must be positive");
    require(std::isfinite(dt) && dt > 0.0, "dt must be positive");

    const double ratio = cfg.sample_period / dt;
    const auto substeps = static_cast<long long>(std::llround(ratio));
    if (substeps < 1 || std::abs(ratio - static_cast<double>(substeps)) > 1e-9 * ratio) {
        throw std::invalid_argument("sample_period must be an integer multiple of dt");
    }
    const auto steps = static_cast<long long>(std::llround(duration / dt));
    require(steps >= 1, "duration shorter than one step");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    ErrorRateFilter rate(cfg.sample_period, cfg.derivative_filter_tc);

    SimState state = initial;
    state.time = 0.0;
    state = resolve_load(plant, state, load);

    Trajectory traj;
    traj.dt = dt;
    traj.records.reserve(static_cast<std::size_t>(steps) + 1);

    double measured = 0.0;
    double effort = 0.0;

    auto log = [&](double t, double cmd, double applied) {
        TrajectoryRecord r;
        r.time_s = t;
        r.x_m = state.x_m;
        r.v_m = state.v_m;
        r.x_l = state.x_l;
        r.v_l = state.v_l;
        r.deflection_m = state.deflection();
        r.force_true_N = spring_force(plant, state);
        r.force_meas_N = measured;
        r.cmd_N = cmd;
        r.effort_N = applied;
        r.stuck = state.stuck;
        traj.records.push_back(r);
    };

    double cmd = 0.0;
    for (long long i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        if (i % substeps == 0) {
            measured = measure_force(plant, state, unit_normal(rng));
            const double desired = setpoint(t, state);
            cmd = desired;
            const double error = desired - measured;
            effort = pd_force_command(cfg, desired, measured, rate.update(error));
            if (i == 0) log(t, cmd, 0.0);
        }
        state = step(plant, state, effort, load, dt);
        state.time = static_cast<double>(i + 1) * dt;
        log(state.time, cmd, clamp_effort(plant, effort));
    }
    return traj;
}

}  // namespace

void validate(const ControllerConfig& cfg) {
    require(std::isfinite(cfg.kp) && cfg.kp >= 0.0, "kp must be non-negative");
    require(std::isfinite(cfg.kd) && cfg.kd >= 0.0, "kd must be non-negative");
    require(std::isfinite(cfg.sample_period) && cfg.sample_period > 0.0,
            "sample_period must be positive");
    require(std::isfinite(cfg.derivative_filter_tc) && cfg.derivative_filter_tc >= 0.0,
            "derivative_filter_tc must be non-negative");
}

void validate(const PositionLoopConfig& cfg) {
    require(std::isfinite(cfg.kp_pos) && cfg.kp_pos >= 0.0, "kp_pos must be non-negative");
    require(std::isfinite(cfg.kd_pos) && cfg.kd_pos >= 0.0, "kd_pos must be non-negative");
    require(std::isfinite(cfg.force_limit) && cfg.force_limit > 0.0, "force_limit must be positive");
}

double pd_force_command(const ControllerConfig& cfg, double desired_force, double measured_force,
                        double filtered_error_rate) {
    require(std::isfinite(desired_force) && std::isfinite(measured_force) &&
                std::isfinite(filtered_error_rate),
            "force loop inputs must be finite");
    const double ff = cfg.feedforward ? desired_force : 0.0;
    return ff + cfg.kp * (desired_force - measured_force) + cfg.kd * filtered_error_rate;
}

double position_over_force(const PositionLoopConfig& cfg, double desired_position,
                           const SimState& state) {
    const double f = cfg.kp_pos * (desired_position - state.x_l) - cfg.kd_pos * state.v_l;
    return std::clamp(f, -cfg.force_limit, cfg.force_limit);
}

ErrorRateFilter::ErrorRateFilter(double sample_period, double time_constant)
    : sample_period_(sample_period), alpha_(sample_period / (time_constant + sample_period)) {}

double ErrorRateFilter::update(double error) {
    // The first sample has no history and contributes no rate.
    const double raw = primed_ ? (error - previous_error_) / sample_period_ : 0.0;
    primed_ = true;
    previous_error_ = error;
    rate_ += alpha_ * (raw - rate_);
    return rate_;
}

Trajectory run_closed_loop(const PlantParams& plant, const LoadModel& load,
                           const ControllerConfig& cfg, const ForceProfile& command,
                           double duration, double dt, std::uint64_t noise_seed,
                           const SimState& initial) {
    require(static_cast<bool>(command), "force command profile is empty");
    return simulate(
        plant, load, cfg, [&](double t, const SimState&) { return command(t); }, duration, dt, noise_seed,
        initial);
}

Trajectory run_position_loop(const PlantParams& plant, const LoadModel& load,
                             const ControllerConfig& cfg, const PositionLoopConfig& position_cfg,
                             const PositionProfile& desired_position, double duration, double dt,
                             std::uint64_t noise_seed, const SimState& initial) {
    validate(position_cfg);
    require(static_cast<bool>(desired_position), "position profile is empty");
    return simulate(
        plant, load, cfg,
        [&](double t, const SimState& s) {
            return position_over_force(position_cfg, desired_position(t), s);
        },
        duration, dt, noise_seed, initial);
}

void write_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "time_s,x_m,v_m,x_l,v_l,deflection_m,force_true_N,force_meas_N,cmd_N,effort_N,stuck\n";
    for (const auto& r : trajectory.records) {
        out << csv::number(r.time_s) << ',' << csv::number(r.x_m) << ',' << csv::number(r.v_m)
            << ',' << csv::number(r.x_l) << ',' << csv::number(r.v_l) << ','
            << csv::number(r.deflection_m) << ',' << csv::number(r.force_true_N) << ','
            << csv::number(r.force_meas_N) << ',' << csv::number(r.cmd_N) << ','
            << csv::number(r.effort_N) << ',' << (r.stuck ? 1 : 0) << '\n';
    }
}

Trajectory read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trajectory csv: missing header");
    Trajectory traj;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != 11) {
            throw std::runtime_error("trajectory csv line " + std::to_string(lineno) +
                                     ": expected 11 fields");
        }
        TrajectoryRecord r;
        try {
            r.time_s = std::stod(fields[0]);
            r.x_m = std::stod(fields[1]);
            r.v_m = std::stod(fields[2]);
            r.x_l = std::stod(fields[3]);
            r.v_l = std::stod(fields[4]);
            r.deflection_m = std::stod(fields[5]);
            r.force_true_N = std::stod(fields[6]);
            r.force_meas_N = std::stod(fields[7]);
            r.cmd_N = std::stod(fields[8]);
            r.effort_N = std::stod(fields[9]);
            r.stuck = std::stoi(fields[10]) != 0;
        } catch (const std::exception&) {
            throw std::runtime_error("trajectory csv line " + std::to_string(lineno) +
                                     ": malformed number");
        }
        traj.records.push_back(r);
    }
    if (traj.records.size() >= 2) traj.dt = traj.records[1].time_s - traj.records[0].time_s;
    return traj;
}

}  // namespace sea
