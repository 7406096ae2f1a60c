#include "sea/report.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sea/catalog.hpp"
#include "sea/csv.hpp"

namespace sea {

namespace {

std::string sig(double v, int digits = 4) {
    if (std::isnan(v)) return "nan";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, digits);
    return {buf.data(), res.ptr};
}

LoadModel load_model(const Settings& s) {
    const LoadSettings& l = s.load;
    if (l.type == "inertial") return InertialLoad{l.mass, {}};
    if (l.type == "environment") {
        const double k = l.contact_stiffness > 0.0 ? l.contact_stiffness : 1e3 * s.system.plant.spring_stiffness;
        return EnvironmentSpring{k, l.rest_position};
    }
    if (l.type == "motion") return sinusoidal_motion(l.amplitude, l.frequency);
    return LockedLoad{};
}

ForceProfile command_profile(const CommandSettings& c) {
    if (c.type == "sine") {
        const double w = 2.0 * std::numbers::pi * c.frequency;
        return [c, w](double t) { return c.offset + c.amplitude * std::sin(w * t); };
    }
    return [c](double t) { return t >= c.start ? c.offset + c.amplitude : c.offset; };
}

SweepOptions sweep_options(const Settings& s) {
    SweepOptions o;
    o.warmup_cycles = s.experiment.warmup_cycles;
    o.measure_cycles = s.experiment.measure_cycles;
    return o;
}

ImpedanceOptions impedance_options(const Settings& s) {
    ImpedanceOptions o;
    o.warmup_cycles = s.experiment.warmup_cycles;
    o.measure_cycles = s.experiment.measure_cycles;
    return o;
}

ActuatorSystem rigid_proxy(const Settings& s) {
    ActuatorSystem r = s.system;
    r.plant = stiffened(s.system.plant, s.experiment.rigid_multiplier);
    return r;
}

ActuatorSystem frictionless(const ActuatorSystem& sys) {
    ActuatorSystem f = sys;
    f.plant.motor_coulomb = 0.0;
    f.plant.motor_viscous = 0.0;
    return f;
}

void merge(ExperimentReport& into, const ExperimentReport& from, const std::string& prefix) {
    for (const auto& m : from.metrics) into.add(prefix + m.name, m.value, m.unit);
    for (const auto& v : from.verdicts) into.flag(prefix + v.name, v.value);
}

struct Sweeps {
    std::vector<FreqResponsePoint> small;
    std::vector<FreqResponsePoint> large;
    BandwidthResult small_bw;
    BandwidthResult large_bw;
};

Sweeps sweeps(const Settings& s) {
    const ExperimentSettings& e = s.experiment;
    Sweeps out;
    const auto fs = log_spaced(e.small_sweep_min, e.small_sweep_max, e.small_sweep_points);
    const auto fl = log_spaced(e.large_sweep_min, e.large_sweep_max, e.large_sweep_points);
    out.small = bode_force_tracking(s.system, e.small_amplitude, fs, sweep_options(s));
    out.large = bode_force_tracking(s.system, e.large_amplitude, fl, sweep_options(s));
    out.small_bw = bandwidth_from_points(out.small);
    out.large_bw = bandwidth_from_points(out.large);
    return out;
}

double saturation_law(const Settings& s) {
    const PlantParams& p = s.system.plant;
    return p.spring_stiffness * p.max_speed / (2.0 * std::numbers::pi * s.experiment.large_amplitude);
}

ExperimentReport energy_report(const Settings& s, Trajectory* keep = nullptr) {
    Trajectory traj = harmonic_tracking_episode(s.system, s.experiment.energy);
    ExperimentReport rep = energy_audit(traj, s.system.plant, 1.0 / s.experiment.energy.frequency_hz);
    if (keep) *keep = std::move(traj);
    return rep;
}

std::string trajectory_csv(const Trajectory& t) {
    std::ostringstream out;
    write_csv(out, t);
    return out.str();
}

}  // namespace

std::string bode_csv(const std::vector<FreqResponsePoint>& points) {
    std::string out = "frequency_hz,ratio,phase_deg,unstable\n";
    for (const auto& p : points) {
        out += csv::number(p.frequency_hz) + ',' + csv::number(p.amplitude_ratio) + ',' + csv::number(p.phase_deg) +
               ',' + (p.unstable ? "1" : "0") + '\n';
    }
    return out;
}

std::string impedance_csv(const std::vector<ImpedancePoint>& points) {
    std::string out = "frequency_hz,impedance_N_per_m\n";
    for (const auto& p : points) out += csv::number(p.frequency_hz) + ',' + csv::number(p.impedance_magnitude) + '\n';
    return out;
}

std::string stance_csv(const StanceProblem& problem, const StanceSolution& solution) {
    std::string out = "foot_index,fx,fy,fz,normal_component,tangential_magnitude\n";
    for (std::size_t i = 0; i < solution.forces.size(); ++i) {
        const Vec3& f = solution.forces[i];
        const double fn = f.dot(problem.feet[i].normal);
        const double ft = (f - fn * problem.feet[i].normal).norm();
        out += std::to_string(i) + ',' + csv::number(f.x()) + ',' + csv::number(f.y()) + ',' + csv::number(f.z()) +
               ',' + csv::number(fn) + ',' + csv::number(ft) + '\n';
    }
    return out;
}

std::string stance_text(const StanceProblem& problem, const StanceSolution& solution) {
    std::ostringstream out;
    const std::vector<std::string> head = {"foot", "fx_N", "fy_N", "fz_N", "normal_N", "tangential_N"};
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < solution.forces.size(); ++i) {
        const Vec3& f = solution.forces[i];
        const double fn = f.dot(problem.feet[i].normal);
        const double ft = (f - fn * problem.feet[i].normal).norm();
        rows.push_back({std::to_string(i), csv::fixed(f.x(), 3), csv::fixed(f.y(), 3), csv::fixed(f.z(), 3),
                        csv::fixed(fn, 3), csv::fixed(ft, 3)});
    }
    std::vector<std::size_t> width(head.size());
    for (std::size_t c = 0; c < head.size(); ++c) {
        width[c] = head[c].size();
        for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << std::string(width[c] - cells[c].size() + (c == 0 ? 0 : 2), ' ') << cells[c];
        }
        out << '\n';
    };
    line(head);
    for (const auto& r : rows) line(r);
    out << "residual_wrench";
    for (Eigen::Index k = 0; k < 6; ++k) out << ' ' << sig(solution.residual_wrench(k), 6);
    out << "\nobjective_N2 " << sig(solution.objective_value, 10) << "\nactive";
    if (solution.active_constraints.empty()) out << " none";
    for (const auto& a : solution.active_constraints) out << ' ' << a;
    out << '\n';
    return out.str();
}

Outcome run_simulate(const Settings& s) {
    SimState initial;
    if (s.load.type == "inertial") initial.v_l = s.load.initial_velocity;
    const Trajectory traj = run_closed_loop(s.system.plant, load_model(s), s.system.controller,
                                            command_profile(s.command), s.command.duration, s.system.dt,
                                            s.system.seed, initial);
    Outcome o;
    o.report.experiment = "simulate";
    double peak = 0.0;
    for (const auto& r : traj.records) peak = std::max(peak, std::abs(r.force_true_N));
    const auto& last = traj.records.back();
    o.report.add("samples", static_cast<double>(traj.records.size()), "");
    o.report.add("final_time", last.time_s, "s");
    o.report.add("final_force_true", last.force_true_N, "N");
    o.report.add("final_force_measured", last.force_meas_N, "N");
    o.report.add("final_command", last.cmd_N, "N");
    o.report.add("peak_abs_force", peak, "N");
    o.artifacts.push_back({"trajectory.csv", trajectory_csv(traj)});
    return o;
}

Outcome run_bode(const Settings& s) {
    const Sweeps sw = sweeps(s);
    Outcome o;
    o.report.experiment = "bode";
    o.report.add("small_amplitude", s.experiment.small_amplitude, "N");
    o.report.add("small_force_bandwidth", sw.small_bw.frequency_hz, "Hz");
    o.report.flag("small_force_censored", sw.small_bw.censored);
    o.report.add("large_amplitude", s.experiment.large_amplitude, "N");
    o.report.add("large_force_bandwidth", sw.large_bw.frequency_hz, "Hz");
    o.report.flag("large_force_censored", sw.large_bw.censored);
    o.report.add("saturation_law_bandwidth", saturation_law(s), "Hz");
    const auto any_unstable = [](const std::vector<FreqResponsePoint>& pts) {
        return std::any_of(pts.begin(), pts.end(), [](const FreqResponsePoint& p) { return p.unstable; });
    };
    o.report.flag("unstable_points", any_unstable(sw.small) || any_unstable(sw.large));
    o.artifacts.push_back({"bode_small.csv", bode_csv(sw.small)});
    o.artifacts.push_back({"bode_large.csv", bode_csv(sw.large)});
    return o;
}

Outcome run_impedance(const Settings& s) {
    const ExperimentSettings& e = s.experiment;
    const auto freqs = log_spaced(e.impedance_min, e.impedance_max, e.impedance_points);
    const auto closed = output_impedance(s.system, e.impedance_amplitude, freqs, impedance_options(s));
    const auto rigid = output_impedance(rigid_proxy(s), e.impedance_amplitude, freqs, impedance_options(s));
    Outcome o;
    o.report.experiment = "impedance";
    const double k = s.system.plant.spring_stiffness;
    o.report.add("spring_stiffness", k, "N/m");
    o.report.add("lowest_frequency_impedance_over_k", closed.front().impedance_magnitude / k, "");
    o.report.add("highest_frequency_impedance_over_k", closed.back().impedance_magnitude / k, "");
    o.report.add("highest_frequency_rigid_over_elastic",
                 rigid.back().impedance_magnitude / closed.back().impedance_magnitude, "");
    o.artifacts.push_back({"impedance.csv", impedance_csv(closed)});
    o.artifacts.push_back({"impedance_rigid.csv", impedance_csv(rigid)});
    return o;
}

Outcome run_resolve(const Settings& s) {
    const ResolutionResult r = smallest_resolvable_force(s.system, s.experiment.resolve);
    Outcome o;
    o.report.experiment = "resolve";
    o.report.add("smallest_resolvable_force", r.force, "N");
    o.report.add("quantization_floor", s.system.plant.spring_stiffness * s.system.plant.sensor_quantum, "N");
    o.report.flag("censored", r.censored);
    return o;
}

Outcome run_chatter(const Settings& s) {
    Outcome o;
    o.report.experiment = "chatter";
    merge(o.report, chatter_experiment(s.system, 1.0, s.experiment.chatter), "elastic_");
    merge(o.report, chatter_experiment(s.system, s.experiment.rigid_multiplier, s.experiment.chatter), "rigid_");
    return o;
}

Outcome run_shock(const Settings& s) {
    ShockOptions opt;
    opt.rigid_multiplier = s.experiment.rigid_multiplier;
    Outcome o;
    o.report = shock_test(s.system, s.experiment.shock_speed, s.experiment.shock_mass, opt);
    return o;
}

Outcome run_energy(const Settings& s) {
    Trajectory traj;
    Outcome o;
    o.report = energy_report(s, &traj);
    o.artifacts.push_back({"energy_trajectory.csv", trajectory_csv(traj)});
    return o;
}

Outcome run_stance(const Settings& s) {
    const StanceSolution sol = distribute_forces(s.stance);
    Outcome o;
    o.report.experiment = "stance";
    o.report.add("objective", sol.objective_value, "N^2");
    o.report.add("residual_norm", sol.residual_wrench.norm(), "");
    o.report.add("iterations", sol.iterations, "");
    o.report.add("active_constraints", static_cast<double>(sol.active_constraints.size()), "");
    o.artifacts.push_back({"stance.csv", stance_csv(s.stance, sol)});
    o.artifacts.push_back({"stance.txt", stance_text(s.stance, sol)});
    return o;
}

void validate(const GoldenRecord& g) {
    if (!(g.tolerance > 0.0) || !std::isfinite(g.tolerance)) {
        throw std::invalid_argument("golden record '" + g.metric + "': tolerance must be positive");
    }
}

bool passes(const GoldenRecord& g, double measured) {
    validate(g);
    if (!std::isfinite(measured)) return false;
    const double tol = g.relative ? g.tolerance * std::abs(g.value) : g.tolerance;
    switch (g.bound) {
        case Bound::Within: return std::abs(measured - g.value) <= tol;
        case Bound::AtMost: return measured <= g.value + tol;
        case Bound::AtLeast: return measured >= g.value - tol;
    }
    return false;
}

SuiteReport run_report(const Settings& s) {
    const ActuatorSpec& spec = find_spec(s.catalog);
    const ExperimentSettings& e = s.experiment;
    const double k = s.system.plant.spring_stiffness;

    SuiteReport rep;
    rep.catalog = s.catalog;
    rep.seed = s.system.seed;
    auto row = [&](GoldenRecord g, double measured, bool valid = true) {
        validate(g);
        rep.rows.push_back({g, measured, valid && passes(g, measured)});
    };
    constexpr double kTight = 1e-9;  // one-sided bounds are exact up to rounding

    // Force tracking.
    const Sweeps sw = sweeps(s);
    const std::vector<double> slow = {0.1};
    const double quasi = bode_force_tracking(s.system, e.quasi_static_amplitude, slow, sweep_options(s))[0].amplitude_ratio;
    row({"small_force_bandwidth", to_si(spec.small_force_bandwidth), "Hz", 0.2, true, Source::Published},
        sw.small_bw.frequency_hz, !sw.small_bw.censored);
    row({"large_force_bandwidth", to_si(spec.large_force_bandwidth), "Hz", 0.3, true, Source::Published},
        sw.large_bw.frequency_hz, !sw.large_bw.censored);
    row({"large_force_bandwidth_vs_saturation_law", saturation_law(s), "Hz", 0.3, true},
        sw.large_bw.frequency_hz, !sw.large_bw.censored);
    row({"large_not_above_small_bandwidth", sw.small_bw.frequency_hz, "Hz", kTight, true, Source::Derived,
         Bound::AtMost},
        sw.large_bw.frequency_hz);
    row({"tracking_ratio_0.1hz", 1.0, "", 0.01}, quasi);

    ExperimentReport bode;
    bode.experiment = "bode";
    bode.add("small_force_bandwidth", sw.small_bw.frequency_hz, "Hz");
    bode.add("large_force_bandwidth", sw.large_bw.frequency_hz, "Hz");
    bode.add("saturation_law_bandwidth", saturation_law(s), "Hz");
    bode.add("tracking_ratio_0.1hz", quasi, "");
    rep.details.push_back(bode);
    rep.artifacts.push_back({"bode_small.csv", bode_csv(sw.small)});
    rep.artifacts.push_back({"bode_large.csv", bode_csv(sw.large)});

    // Impedance: low frequency and the spring asymptote above the bandwidth.
    std::vector<double> zf = {e.impedance_low_frequency};
    for (double m : {5.0, 7.0, 10.0}) zf.push_back(m * sw.small_bw.frequency_hz);
    const auto z = output_impedance(s.system, e.impedance_amplitude, zf, impedance_options(s));
    const auto zr = output_impedance(rigid_proxy(s), e.impedance_amplitude, zf, impedance_options(s));
    double hf_min = std::numeric_limits<double>::infinity();
    double hf_max = 0.0;
    double ratio_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < zf.size(); ++i) {
        hf_min = std::min(hf_min, z[i].impedance_magnitude / k);
        hf_max = std::max(hf_max, z[i].impedance_magnitude / k);
        ratio_min = std::min(ratio_min, zr[i].impedance_magnitude / z[i].impedance_magnitude);
    }
    row({"impedance_low_frequency_over_k", 0.1, "", kTight, true, Source::Derived, Bound::AtMost},
        z[0].impedance_magnitude / k);
    row({"impedance_above_5x_bandwidth_min_over_k", 1.0, "", 0.5}, hf_min);
    row({"impedance_above_5x_bandwidth_max_over_k", 1.0, "", 0.5}, hf_max);
    row({"rigid_over_elastic_impedance_min", 10.0, "", kTight, true, Source::Derived, Bound::AtLeast}, ratio_min);
    ExperimentReport imp;
    imp.experiment = "impedance";
    imp.add("spring_stiffness", k, "N/m");
    for (std::size_t i = 0; i < zf.size(); ++i) {
        const std::string at = "at_" + csv::fixed(zf[i], 1) + "hz_";
        imp.add(at + "over_k", z[i].impedance_magnitude / k, "");
        imp.add(at + "rigid_over_elastic", zr[i].impedance_magnitude / z[i].impedance_magnitude, "");
    }
    rep.details.push_back(imp);
    rep.artifacts.push_back({"impedance_check.csv", impedance_csv(z)});
    rep.artifacts.push_back({"impedance_check_rigid.csv", impedance_csv(zr)});

    // Resolution.
    const ResolutionResult res = smallest_resolvable_force(s.system, e.resolve);
    const double lbf = units::kNewtonsPerPoundForce;
    row({"smallest_resolvable_force", lbf, "N", 0.5 * lbf, false, Source::Published}, res.force, !res.censored);
    ExperimentReport resolve_rep;
    resolve_rep.experiment = "resolve";
    resolve_rep.add("smallest_resolvable_force", res.force, "N");
    resolve_rep.flag("censored", res.censored);
    rep.details.push_back(resolve_rep);

    // Chatter.
    const ExperimentReport c1 = chatter_experiment(s.system, 1.0, e.chatter);
    const ExperimentReport cr = chatter_experiment(s.system, e.rigid_multiplier, e.chatter);
    row({"chatter_elastic_overshoot", 0.5, "", kTight, true, Source::Derived, Bound::AtMost},
        c1.metric("peak_overshoot"));
    row({"chatter_elastic_verdict", 0.0, "", 0.5}, c1.verdict("chatter") ? 1.0 : 0.0);
    row({"chatter_rigid_verdict", 1.0, "", 0.5}, cr.verdict("chatter") ? 1.0 : 0.0);
    ExperimentReport chatter;
    chatter.experiment = "chatter";
    merge(chatter, c1, "elastic_");
    merge(chatter, cr, "rigid_");
    rep.details.push_back(chatter);

    // Shock on the frictionless plant, where the closed form holds.
    ShockOptions so;
    so.rigid_multiplier = e.rigid_multiplier;
    const ExperimentReport shock = shock_test(frictionless(s.system), e.shock_speed, e.shock_mass, so);
    row({"shock_peak_ratio_rigid_over_elastic", std::sqrt(e.rigid_multiplier), "", 0.2, true},
        shock.metric("peak_ratio_rigid_over_elastic"));
    row({"shock_peak_force_elastic", shock.metric("free_impact_peak_elastic"), "N", 0.2, true},
        shock.metric("peak_force_elastic"));
    rep.details.push_back(shock);

    // Energy bookkeeping.
    const ExperimentReport energy = energy_report(s);
    row({"energy_closure_relative", 0.01, "", kTight, true, Source::Derived, Bound::AtMost},
        std::abs(energy.metric("closure_relative")));
    rep.details.push_back(energy);

    // Step settling.
    const ExperimentReport step = step_response(s.system, e.step_force, e.step_duration);
    row({"step_tail_error_relative", 0.02, "", kTight, true, Source::Derived, Bound::AtMost},
        step.metric("tail_error_relative"));
    rep.details.push_back(step);

    rep.exit_status = 0;
    for (const auto& r : rep.rows) {
        if (r.golden.source == Source::Published && !r.pass) rep.exit_status = 1;
    }
    return rep;
}

std::string format_report(const SuiteReport& rep) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"metric", "measured", "target", "tolerance", "verdict"});
    for (const auto& r : rep.rows) {
        const GoldenRecord& g = r.golden;
        const std::string unit = g.unit.empty() ? "" : " " + g.unit;
        std::string target = sig(g.value) + unit;
        std::string tol;
        if (g.bound == Bound::AtMost) {
            target = "<= " + target;
            tol = "bound";
        } else if (g.bound == Bound::AtLeast) {
            target = ">= " + target;
            tol = "bound";
        } else {
            tol = g.relative ? "+-" + sig(100.0 * g.tolerance) + "%" : "+-" + sig(g.tolerance) + unit;
        }
        std::string verdict = r.pass ? "pass" : "FAIL";
        if (g.source == Source::Published) verdict += " (published)";
        cells.push_back({g.metric, sig(r.measured) + unit, target, tol, verdict});
    }
    std::vector<std::size_t> width(5, 0);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], row[c].size());
    }

    std::ostringstream out;
    out << "report " << rep.catalog << "  seed " << rep.seed << '\n';
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 5; ++c) {
            out << row[c];
            if (c + 1 < 5) out << std::string(width[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    }
    int published = 0;
    int published_pass = 0;
    int pass = 0;
    for (const auto& r : rep.rows) {
        pass += r.pass ? 1 : 0;
        if (r.golden.source == Source::Published) {
            ++published;
            published_pass += r.pass ? 1 : 0;
        }
    }
    out << "\n" << pass << "/" << rep.rows.size() << " targets pass; " << published_pass << "/" << published
        << " published targets pass; exit status " << rep.exit_status << "\n\n";
    for (const auto& d : rep.details) out << d.to_text();
    return out.str();
}

}  // namespace sea
