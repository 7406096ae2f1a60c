#include "sea/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "sea/csv.hpp"

namespace sea {

namespace {

constexpr double kHalfPower = 0.70710678118654752;  // -3 dB amplitude ratio

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

// Runs job(i) for every i in [0, count). Each job writes only its own slot, so
// the outcome is independent of scheduling.
void for_each_index(std::size_t count, bool parallel, const std::function<void(std::size_t)>& job) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers = parallel ? std::min<std::size_t>(count, hw > 1 ? hw : 1) : 1;
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) job(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// Number of plant steps covering `seconds`, rounded up to whole controller ticks.
long long steps_for(double seconds, double dt, double sample_period) {
    const auto per_tick = std::llround(sample_period / dt);
    const auto ticks = static_cast<long long>(std::ceil(seconds / sample_period - 1e-9));
    return std::max<long long>(1, ticks) * per_tick;
}

struct Window {
    std::size_t begin = 0;
    std::size_t count = 0;
};

Window measure_window(double frequency_hz, int warmup_cycles, int measure_cycles, double dt) {
    const double period = 1.0 / frequency_hz;
    Window w;
    w.begin = static_cast<std::size_t>(std::ceil(warmup_cycles * period / dt - 1e-9));
    w.count = static_cast<std::size_t>(std::llround(measure_cycles * period / dt));
    return w;
}

struct Series {
    std::vector<double> time;
    std::vector<double> value;
};

Series force_series(const Trajectory& traj, Window w) {
    Series s;
    const std::size_t end = std::min(traj.records.size(), w.begin + w.count);
    for (std::size_t i = w.begin; i < end; ++i) {
        s.time.push_back(traj.records[i].time_s);
        s.value.push_back(traj.records[i].force_true_N);
    }
    return s;
}

double cycle_peak(const Series& s, std::size_t begin, std::size_t end) {
    double peak = 0.0;
    for (std::size_t i = begin; i < end && i < s.value.size(); ++i) peak = std::max(peak, std::abs(s.value[i]));
    return peak;
}

}  // namespace

void ExperimentReport::add(std::string name, double value, std::string unit) {
    metrics.push_back({std::move(name), value, std::move(unit)});
}

void ExperimentReport::flag(std::string name, bool value) {
    verdicts.push_back({std::move(name), value});
}

double ExperimentReport::metric(std::string_view name) const {
    for (const auto& m : metrics) {
        if (m.name == name) return m.value;
    }
    throw std::out_of_range("no metric '" + std::string(name) + "' in " + experiment);
}

bool ExperimentReport::verdict(std::string_view name) const {
    for (const auto& v : verdicts) {
        if (v.name == name) return v.value;
    }
    throw std::out_of_range("no verdict '" + std::string(name) + "' in " + experiment);
}

std::string ExperimentReport::to_text() const {
    std::size_t width = 0;
    for (const auto& m : metrics) width = std::max(width, m.name.size());
    for (const auto& v : verdicts) width = std::max(width, v.name.size());

    std::ostringstream out;
    out << "experiment: " << experiment << '\n';
    for (const auto& m : metrics) {
        out << "  " << m.name << std::string(width - m.name.size() + 2, ' ') << csv::number(m.value);
        if (!m.unit.empty()) out << ' ' << m.unit;
        out << '\n';
    }
    for (const auto& v : verdicts) {
        out << "  " << v.name << std::string(width - v.name.size() + 2, ' ')
            << (v.value ? "yes" : "no") << '\n';
    }
    for (const auto& a : artifacts) out << "  artifact: " << a << '\n';
    return out.str();
}

SineFit fit_sine(std::span<const double> time, std::span<const double> signal, double frequency_hz) {
    require(time.size() == signal.size() && time.size() >= 3, "sine fit needs at least three matching samples");
    const double w = 2.0 * std::numbers::pi * frequency_hz;
    // Least squares on sin, cos and an offset, so windows that are not whole
    // cycles do not leak.
    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < time.size(); ++i) {
        const Eigen::Vector3d row(std::sin(w * time[i]), std::cos(w * time[i]), 1.0);
        normal += row * row.transpose();
        rhs += row * signal[i];
    }
    const Eigen::Vector3d x = normal.ldlt().solve(rhs);
    SineFit fit;
    fit.amplitude = std::hypot(x(0), x(1));
    fit.phase_deg = std::atan2(x(1), x(0)) * 180.0 / std::numbers::pi;
    return fit;
}

std::vector<FreqResponsePoint> bode_force_tracking(const ActuatorSystem& system, double amplitude,
                                                   std::span<const double> frequencies,
                                                   const SweepOptions& options) {
    require(std::isfinite(amplitude) && amplitude > 0.0, "bode amplitude must be positive");
    require(options.warmup_cycles >= 0 && options.measure_cycles >= 2, "bad cycle counts");
    for (double f : frequencies) require(std::isfinite(f) && f > 0.0, "frequencies must be positive");

    std::vector<FreqResponsePoint> points(frequencies.size());
    for_each_index(frequencies.size(), options.parallel, [&](std::size_t k) {
        const double f = frequencies[k];
        const double w = 2.0 * std::numbers::pi * f;
        const int cycles = options.warmup_cycles + options.measure_cycles;
        const long long steps = steps_for(cycles / f, system.dt, system.controller.sample_period);

        const Trajectory traj = run_closed_loop(
            system.plant, LockedLoad{}, system.controller,
            [amplitude, w](double t) { return amplitude * std::sin(w * t); },
            static_cast<double>(steps) * system.dt, system.dt, system.seed);

        const Window win = measure_window(f, options.warmup_cycles, options.measure_cycles, system.dt);
        const Series s = force_series(traj, win);
        const SineFit fit = fit_sine(s.time, s.value, f);

        // Growth is judged from the first cycle of the episode to the last
        // measured one, so a loop that diverges during warmup is still caught.
        const std::size_t per_cycle = s.value.size() / static_cast<std::size_t>(options.measure_cycles);
        const Series opening = force_series(traj, {0, per_cycle});
        const double first = cycle_peak(opening, 0, per_cycle);
        const double last = cycle_peak(s, s.value.size() - per_cycle, s.value.size());

        FreqResponsePoint& p = points[k];
        p.frequency_hz = f;
        p.amplitude_ratio = fit.amplitude / amplitude;
        p.phase_deg = fit.phase_deg;
        p.unstable = !std::isfinite(p.amplitude_ratio) || last > 2.0 * first;
    });
    return points;
}

BandwidthResult bandwidth_from_points(std::span<const FreqResponsePoint> points) {
    if (points.empty()) throw std::invalid_argument("bandwidth needs at least one point");
    if (points.front().unstable || !(points.front().amplitude_ratio > kHalfPower)) {
        throw std::invalid_argument("first response point is already below -3 dB");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto& lo = points[i - 1];
        const auto& hi = points[i];
        if (hi.frequency_hz <= lo.frequency_hz) {
            throw std::invalid_argument("response points must be sorted by frequency");
        }
        const double r_hi = hi.unstable ? 0.0 : hi.amplitude_ratio;
        if (r_hi < kHalfPower) {
            const double frac = (lo.amplitude_ratio - kHalfPower) / (lo.amplitude_ratio - r_hi);
            const double log_f = std::log10(lo.frequency_hz) +
                                 frac * (std::log10(hi.frequency_hz) - std::log10(lo.frequency_hz));
            return {std::pow(10.0, log_f), false};
        }
    }
    return {points.back().frequency_hz, true};
}

std::vector<ImpedancePoint> output_impedance(const ActuatorSystem& system, double amplitude,
                                             std::span<const double> frequencies,
                                             const ImpedanceOptions& options) {
    require(std::isfinite(amplitude) && amplitude > 0.0, "impedance amplitude must be positive");
    require(options.warmup_cycles >= 0 && options.measure_cycles >= 1, "bad cycle counts");
    for (double f : frequencies) require(std::isfinite(f) && f > 0.0, "frequencies must be positive");

    std::vector<ImpedancePoint> points(frequencies.size());
    for_each_index(frequencies.size(), options.parallel, [&](std::size_t k) {
        const double f = frequencies[k];
        const PrescribedMotion motion = sinusoidal_motion(amplitude, f);
        const Window win = measure_window(f, options.warmup_cycles, options.measure_cycles, system.dt);

        Series s;
        if (options.motor_locked) {
            for (std::size_t i = 0; i < win.count; ++i) {
                SimState st;
                st.time = static_cast<double>(win.begin + i) * system.dt;
                st.x_l = motion.position(st.time);
                st.v_l = motion.velocity(st.time);
                s.time.push_back(st.time);
                s.value.push_back(spring_force(system.plant, st));
            }
        } else {
            const int cycles = options.warmup_cycles + options.measure_cycles;
            const long long steps = steps_for(cycles / f, system.dt, system.controller.sample_period);
            const Trajectory traj =
                run_closed_loop(system.plant, motion, system.controller, [](double) { return 0.0; },
                                static_cast<double>(steps) * system.dt, system.dt, system.seed);
            s = force_series(traj, win);
        }
        points[k] = {f, fit_sine(s.time, s.value, f).amplitude / amplitude};
    });
    return points;
}

bool force_resolves(const ActuatorSystem& system, double force, const ResolveOptions& options) {
    require(std::isfinite(force) && force > 0.0, "resolution trial force must be positive");
    const long long steps = steps_for(options.settle_time, system.dt, system.controller.sample_period);
    const Trajectory traj =
        run_closed_loop(system.plant, LockedLoad{}, system.controller, [force](double) { return force; },
                        static_cast<double>(steps) * system.dt, system.dt, system.seed);
    const auto tail = static_cast<std::size_t>(std::llround(options.window / system.dt));
    const std::size_t n = traj.records.size();
    const std::size_t begin = n > tail ? n - tail : 0;
    double sum = 0.0;
    for (std::size_t i = begin; i < n; ++i) sum += traj.records[i].force_meas_N;
    const double mean = sum / static_cast<double>(n - begin);
    return std::abs(mean - force) <= options.tolerance * force;
}

ResolutionResult smallest_resolvable_force(const ActuatorSystem& system, const ResolveOptions& options) {
    require(options.upper > 0.0 && options.step > 0.0, "bad resolution bracket");
    if (!force_resolves(system, options.upper, options)) return {options.upper, true};
    double lo = 0.0;
    double hi = options.upper;
    while (hi - lo > options.step) {
        const double mid = 0.5 * (lo + hi);
        if (force_resolves(system, mid, options)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {std::max(hi, options.step), false};
}

ExperimentReport chatter_experiment(const ActuatorSystem& base, double sensor_stiffness_multiplier,
                                    const ChatterOptions& options) {
    require(std::isfinite(sensor_stiffness_multiplier) && sensor_stiffness_multiplier >= 1.0,
            "stiffness multiplier must be at least 1");
    require(options.step_force > 0.0, "chatter step force must be positive");

    const PlantParams plant = stiffened(base.plant, sensor_stiffness_multiplier);
    const EnvironmentSpring contact{options.contact_stiffness_ratio * base.plant.spring_stiffness, 0.0};
    const long long steps = steps_for(options.duration, base.dt, base.controller.sample_period);
    const double command = options.step_force;
    const Trajectory traj =
        run_closed_loop(plant, contact, base.controller, [command](double) { return command; },
                        static_cast<double>(steps) * base.dt, base.dt, base.seed);

    double peak = -std::numeric_limits<double>::infinity();
    for (const auto& r : traj.records) peak = std::max(peak, r.force_true_N);

    const std::size_t n = traj.records.size();
    const auto tail_begin = static_cast<std::size_t>((1.0 - options.sustain_fraction) * static_cast<double>(n));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = tail_begin; i < n; ++i) {
        lo = std::min(lo, traj.records[i].force_true_N);
        hi = std::max(hi, traj.records[i].force_true_N);
        sum += traj.records[i].force_true_N;
    }
    const double sustained = 0.5 * (hi - lo);
    const bool chatter = sustained > options.chatter_threshold * command;

    ExperimentReport rep;
    rep.experiment = "chatter";
    rep.add("stiffness_multiplier", sensor_stiffness_multiplier, "");
    rep.add("command", command, "N");
    rep.add("peak_force", peak, "N");
    rep.add("peak_overshoot", (peak - command) / command, "");
    rep.add("sustained_amplitude", sustained, "N");
    rep.add("tail_mean_force", sum / static_cast<double>(n - tail_begin), "N");
    rep.flag("chatter", chatter);
    rep.flag("bounded", !chatter);
    return rep;
}

ExperimentReport shock_test(const ActuatorSystem& system, double impact_speed, double impact_mass,
                            const ShockOptions& options) {
    require(std::isfinite(impact_speed) && impact_speed >= 0.0, "impact speed must be non-negative");
    require(std::isfinite(impact_mass) && impact_mass > 0.0, "impact mass must be positive");
    require(options.rigid_multiplier >= 1.0, "rigid multiplier must be at least 1");

    const double reduced_mass =
        system.plant.motor_mass * impact_mass / (system.plant.motor_mass + impact_mass);

    auto peak_for = [&](const PlantParams& plant) {
        const double half_period = std::numbers::pi * std::sqrt(reduced_mass / plant.spring_stiffness);
        // Resolve the contact pulse with at least 200 steps per half period.
        const double sample = system.controller.sample_period;
        const double target_dt = std::min(system.dt, half_period / 200.0);
        const double per_tick = std::ceil(sample / target_dt - 1e-9);
        const double dt = sample / per_tick;
        const long long steps = steps_for(options.half_periods * half_period, dt, sample);

        SimState initial;
        initial.v_l = -impact_speed;
        const Trajectory traj =
            run_closed_loop(plant, InertialLoad{impact_mass, {}}, system.controller,
                            [](double) { return 0.0; }, static_cast<double>(steps) * dt, dt,
                            system.seed, initial);
        double peak = 0.0;
        for (const auto& r : traj.records) peak = std::max(peak, r.force_true_N);
        return peak;
    };

    const PlantParams rigid = stiffened(system.plant, options.rigid_multiplier);
    const double elastic_peak = peak_for(system.plant);
    const double rigid_peak = peak_for(rigid);

    ExperimentReport rep;
    rep.experiment = "shock";
    rep.add("impact_speed", impact_speed, "m/s");
    rep.add("impact_mass", impact_mass, "kg");
    rep.add("rigid_multiplier", options.rigid_multiplier, "");
    rep.add("peak_force_elastic", elastic_peak, "N");
    rep.add("peak_force_rigid", rigid_peak, "N");
    // Defined as 0 when nothing hits the actuator.
    rep.add("peak_ratio_rigid_over_elastic", elastic_peak > 0.0 ? rigid_peak / elastic_peak : 0.0, "");
    rep.add("free_impact_peak_elastic", impact_speed * std::sqrt(reduced_mass * system.plant.spring_stiffness),
            "N");
    rep.add("free_impact_ratio", std::sqrt(options.rigid_multiplier), "");
    return rep;
}

ExperimentReport step_response(const ActuatorSystem& system, double force, double duration, double band) {
    require(std::isfinite(force) && force != 0.0, "step force must be non-zero");
    require(std::isfinite(band) && band > 0.0, "settling band must be positive");
    const long long steps = steps_for(duration, system.dt, system.controller.sample_period);
    const Trajectory traj =
        run_closed_loop(system.plant, LockedLoad{}, system.controller, [force](double) { return force; },
                        static_cast<double>(steps) * system.dt, system.dt, system.seed);
    const auto& rows = traj.records;
    double settling = 0.0;
    double peak = 0.0;
    for (const auto& r : rows) {
        if (std::abs(r.force_true_N - force) > band * std::abs(force)) settling = r.time_s + traj.dt;
        peak = std::max(peak, r.force_true_N / force);
    }
    const auto tail_begin = rows.size() - std::max<std::size_t>(1, rows.size() / 5);
    double tail_error = 0.0;
    for (std::size_t i = tail_begin; i < rows.size(); ++i) {
        tail_error = std::max(tail_error, std::abs(rows[i].force_true_N - force) / std::abs(force));
    }

    ExperimentReport rep;
    rep.experiment = "step";
    rep.add("step_force", force, "N");
    rep.add("settling_time", settling, "s");
    rep.add("tail_error_relative", tail_error, "");
    rep.add("peak_overshoot", std::max(0.0, peak - 1.0), "");
    rep.add("final_force", rows.back().force_true_N, "N");
    rep.flag("settled", tail_error <= band && settling < rows.back().time_s);
    return rep;
}

ExperimentReport energy_audit(const Trajectory& trajectory, const PlantParams& params,
                              std::optional<double> cycle_period) {
    const auto& rows = trajectory.records;
    require(rows.size() >= 2, "energy audit needs at least two samples");

    const double m = params.motor_mass;
    const double k = params.spring_stiffness;
    const double b = params.spring_damping;

    auto stored = [&](double v_m, double deflection) {
        return 0.5 * m * v_m * v_m + 0.5 * k * deflection * deflection;
    };
    auto spring = [&](double deflection, double v_m, double v_l) { return k * deflection + b * (v_m - v_l); };
    auto friction_power = [&](double v) {
        return params.motor_coulomb * std::abs(v) + params.motor_viscous * v * v;
    };

    // Per-interval contributions, kept so per-cycle sums can be taken.
    const std::size_t n = rows.size();
    std::vector<double> motor(n, 0.0), load(n, 0.0), friction(n, 0.0), damping(n, 0.0), limiter(n, 0.0);
    std::size_t clamped = 0;
    double peak_spring = 0.5 * k * rows[0].deflection_m * rows[0].deflection_m;

    for (std::size_t i = 1; i < n; ++i) {
        const auto& a = rows[i - 1];
        const auto& z = rows[i];
        const double h = z.time_s - a.time_s;
        // A stick step starts from zero motor velocity; the kinetic energy it
        // removes is friction loss.
        const double va = z.stuck ? 0.0 : a.v_m;
        const double stick_loss = z.stuck ? 0.5 * m * a.v_m * a.v_m : 0.0;

        motor[i] = z.effort_N * 0.5 * (va + z.v_m) * h;
        const double fa = spring(a.deflection_m, va, a.v_l);
        const double fz = spring(z.deflection_m, z.v_m, z.v_l);
        load[i] = 0.5 * (fa * a.v_l + fz * z.v_l) * h;
        friction[i] = 0.5 * (friction_power(va) + friction_power(z.v_m)) * h + stick_loss;
        damping[i] = 0.5 * b * ((va - a.v_l) * (va - a.v_l) + (z.v_m - z.v_l) * (z.v_m - z.v_l)) * h;

        if (std::abs(z.v_m) >= params.max_speed) ++clamped;
        // Pinned at the speed clamp on both ends: the clamp absorbs the net
        // accelerating force, which would otherwise go missing.
        const bool pinned = !z.stuck && std::abs(va) >= params.max_speed && z.v_m == va;
        if (pinned) {
            const double net_a = (z.effort_N - fa) * va - friction_power(va);
            const double net_z = (z.effort_N - fz) * z.v_m - friction_power(z.v_m);
            limiter[i] = 0.5 * (net_a + net_z) * h;
        }
        peak_spring = std::max(peak_spring, 0.5 * k * z.deflection_m * z.deflection_m);
    }

    auto total = [](const std::vector<double>& v, std::size_t from) {
        double s = 0.0;
        for (std::size_t i = from; i < v.size(); ++i) s += v[i];
        return s;
    };

    const double w_motor = total(motor, 1);
    const double w_load = total(load, 1);
    const double d_friction = total(friction, 1);
    const double d_damping = total(damping, 1);
    const double d_limiter = total(limiter, 1);
    const double delta_stored = stored(rows.back().v_m, rows.back().deflection_m) -
                                stored(rows.front().v_m, rows.front().deflection_m);
    const double residual = w_motor - w_load - d_friction - d_damping - d_limiter - delta_stored;

    ExperimentReport rep;
    rep.experiment = "energy";
    rep.add("motor_work", w_motor, "J");
    rep.add("load_work", w_load, "J");
    rep.add("friction_dissipation", d_friction, "J");
    rep.add("damping_dissipation", d_damping, "J");
    rep.add("speed_limit_dissipation", d_limiter, "J");
    rep.add("stored_energy_change", delta_stored, "J");
    rep.add("closure_residual", residual, "J");
    rep.add("closure_relative", w_motor != 0.0 ? std::abs(residual) / std::abs(w_motor) : 0.0, "");
    rep.add("peak_spring_energy", peak_spring, "J");
    rep.add("motor_to_load_work_ratio", w_load != 0.0 ? w_motor / w_load : 0.0, "");
    rep.add("speed_clamped_samples", static_cast<double>(clamped), "");

    if (cycle_period) {
        require(*cycle_period > 0.0, "cycle period must be positive");
        const double t_end = rows.back().time_s;
        require(t_end >= *cycle_period, "trajectory shorter than one cycle");
        const auto cycle_steps = static_cast<std::size_t>(std::llround(*cycle_period / trajectory.dt));
        const std::size_t from = n - std::min(n - 1, cycle_steps);
        const double cm = total(motor, from);
        const double cl = total(load, from);
        rep.add("motor_work_per_cycle", cm, "J");
        rep.add("load_work_per_cycle", cl, "J");
        rep.add("dissipation_per_cycle", total(friction, from) + total(damping, from) + total(limiter, from), "J");
        rep.add("per_cycle_motor_to_load_ratio", cl != 0.0 ? cm / cl : 0.0, "");
    }
    return rep;
}

Trajectory harmonic_tracking_episode(const ActuatorSystem& system, const EnergyEpisode& episode) {
    const double c = episode.load_damping;
    const InertialLoad load{episode.load_mass, [c](double, double, double v) { return -c * v; }};
    const double w = 2.0 * std::numbers::pi * episode.frequency_hz;
    const double a = episode.amplitude;
    const long long steps = steps_for(episode.duration, system.dt, system.controller.sample_period);
    return run_position_loop(system.plant, load, system.controller, episode.position,
                             [a, w](double t) { return a * std::sin(w * t); },
                             static_cast<double>(steps) * system.dt, system.dt, system.seed);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    require(lo > 0.0 && hi > lo && count >= 2, "bad log spacing");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < count; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
    return out;
}

}  // namespace sea
