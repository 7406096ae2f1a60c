// Acceptance run: one PASS/FAIL line per criterion at its stated tolerance.
//
// Exit status is 0 when the set of failing criteria equals the --expect-fail
// list (empty by default), so a known failure stays visible in the output
// while a new failure, or a known one that starts passing, turns the run red.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "sea/analysis.hpp"
#include "sea/catalog.hpp"
#include "sea/config.hpp"
#include "sea/csv.hpp"
#include "sea/defaults.hpp"
#include "sea/report.hpp"
#include "sea/stance.hpp"

using namespace sea;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

std::string g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

Result catalog_consistency() {
    Result r{true, ""};
    double worst = 0.0;
    for (const auto& spec : builtin_catalog()) {
        for (const auto& c : consistency_report(spec)) {
            if (!c.gated) continue;
            worst = std::max(worst, c.relative_error);
            if (c.relative_error >= 0.05) {
                r.pass = false;
                r.detail += spec.name + "." + c.name + " off by " + g(100 * c.relative_error) + "%; ";
            }
        }
    }
    r.detail += "worst gated relative error " + g(100 * worst) + "% (limit 5%)";
    return r;
}

Result plant_physics() {
    PlantParams p = default_settings("SEA-23-23").system.plant;
    p.motor_coulomb = 0.0;
    p.motor_viscous = 0.0;
    p.spring_damping = 0.0;
    const double dt = 1e-4;
    SimState s;
    s.x_m = 1e-3;
    const double e0 = mechanical_energy(p, s, LockedLoad{});
    double drift = 0.0;
    std::vector<double> crossings;
    for (int i = 0; i < 100000; ++i) {
        const SimState next = step(p, s, 0.0, LockedLoad{}, dt);
        if ((s.x_m > 0.0) != (next.x_m > 0.0)) crossings.push_back(s.time + dt * s.x_m / (s.x_m - next.x_m));
        s = next;
        drift = std::max(drift, std::abs(mechanical_energy(p, s, LockedLoad{}) - e0) / e0);
    }
    const double measured =
        0.5 * static_cast<double>(crossings.size() - 1) / (crossings.back() - crossings.front());
    const double oracle = std::sqrt(p.spring_stiffness / p.motor_mass) / (2.0 * std::numbers::pi);
    const double err = std::abs(measured - oracle) / oracle;
    return {err < 0.005 && drift < 0.001, "frequency " + g(measured) + " Hz vs sqrt(K/m)/2pi " + g(oracle) +
                                             " Hz (error " + g(100 * err) + "%, limit 0.5%); energy drift " +
                                             g(100 * drift) + "% over 10 s (limit 0.1%)"};
}

BandwidthResult sweep(const Settings& s, double amplitude, double lo, double hi, int points) {
    SweepOptions o;
    o.warmup_cycles = s.experiment.warmup_cycles;
    o.measure_cycles = s.experiment.measure_cycles;
    return bandwidth_from_points(bode_force_tracking(s.system, amplitude, log_spaced(lo, hi, points), o));
}

Result small_bandwidth(const Settings& s, double& bw_out) {
    const ExperimentSettings& e = s.experiment;
    const auto bw = sweep(s, e.small_amplitude, e.small_sweep_min, e.small_sweep_max, e.small_sweep_points);
    bw_out = bw.frequency_hz;
    const bool ok = !bw.censored && bw.frequency_hz >= 28.0 && bw.frequency_hz <= 42.0;
    return {ok, "amplitude " + g(e.small_amplitude) + " N: " + g(bw.frequency_hz) + " Hz" +
                    (bw.censored ? " (censored)" : "") + ", target [28, 42] Hz"};
}

Result large_bandwidth(const Settings& s) {
    const ExperimentSettings& e = s.experiment;
    const auto bw = sweep(s, e.large_amplitude, e.large_sweep_min, e.large_sweep_max, e.large_sweep_points);
    const PlantParams& p = s.system.plant;
    const double law = p.spring_stiffness * p.max_speed / (2.0 * std::numbers::pi * e.large_amplitude);
    const bool in_band = !bw.censored && bw.frequency_hz >= 5.25 && bw.frequency_hz <= 9.75;
    const bool near_law = std::abs(bw.frequency_hz - law) <= 0.3 * law;
    return {in_band && near_law, "amplitude " + g(e.large_amplitude) + " N: " + g(bw.frequency_hz) +
                                     " Hz, target [5.25, 9.75] Hz; saturation law " + g(law) + " Hz, off by " +
                                     g(100 * std::abs(bw.frequency_hz - law) / law) + "% (limit 30%)"};
}

Result impedance_asymptote(const Settings& s, double bw) {
    const double k = s.system.plant.spring_stiffness;
    const std::vector<double> f = {5.0 * bw, 7.0 * bw, 10.0 * bw};
    ImpedanceOptions o;
    o.warmup_cycles = s.experiment.warmup_cycles;
    o.measure_cycles = s.experiment.measure_cycles;
    ActuatorSystem rigid = s.system;
    rigid.plant = stiffened(s.system.plant, s.experiment.rigid_multiplier);
    const auto z = output_impedance(s.system, s.experiment.impedance_amplitude, f, o);
    const auto zr = output_impedance(rigid, s.experiment.impedance_amplitude, f, o);
    bool ok = true;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double zk = z[i].impedance_magnitude / k;
        const double ratio = zr[i].impedance_magnitude / z[i].impedance_magnitude;
        lo = std::min(lo, zk);
        hi = std::max(hi, zk);
        sep = std::min(sep, ratio);
        ok = ok && zk >= 0.5 && zk <= 1.5 && ratio >= 10.0;
    }
    return {ok, "at 5, 7, 10 x " + g(bw) + " Hz: |Z|/K in [" + g(lo) + ", " + g(hi) +
                    "] (limit [0.5, 1.5]); rigid/elastic >= " + g(sep) + " (limit 10)"};
}

Result resolution(const Settings& s) {
    const auto r = smallest_resolvable_force(s.system, s.experiment.resolve);
    const double lbf = r.force / units::kNewtonsPerPoundForce;
    return {!r.censored && lbf >= 0.5 && lbf <= 1.5,
            g(r.force) + " N = " + g(lbf) + " lbf" + (r.censored ? " (censored)" : "") + ", target [0.5, 1.5] lbf"};
}

Result chatter(const Settings& s) {
    const auto soft = chatter_experiment(s.system, 1.0, s.experiment.chatter);
    const auto stiff = chatter_experiment(s.system, s.experiment.rigid_multiplier, s.experiment.chatter);
    const double os = soft.metric("peak_overshoot");
    const bool ok = os < 0.5 && !soft.verdict("chatter") && stiff.verdict("chatter");
    return {ok, "step " + g(s.experiment.chatter.step_force) + " N: x1 overshoot " + g(100 * os) +
                    "% (limit 50%), chatter " + (soft.verdict("chatter") ? "yes" : "no") + "; x" +
                    g(s.experiment.rigid_multiplier) + " chatter " + (stiff.verdict("chatter") ? "yes" : "no")};
}

Result shock(const Settings& s) {
    ActuatorSystem sys = s.system;
    sys.plant.motor_coulomb = 0.0;
    sys.plant.motor_viscous = 0.0;
    ShockOptions o;
    o.rigid_multiplier = s.experiment.rigid_multiplier;
    const auto rep = shock_test(sys, s.experiment.shock_speed, s.experiment.shock_mass, o);
    const double ratio = rep.metric("peak_ratio_rigid_over_elastic");
    return {ratio >= 8.0 && ratio <= 12.0, "frictionless peak ratio " + g(ratio) + ", target [8, 12]"};
}

Result energy() {
    // Every episode kind the library logs, on every catalog entry.
    double worst = 0.0;
    int episodes = 0;
    for (const auto& spec : builtin_catalog()) {
        const Settings s = default_settings(spec.name);
        const auto& sys = s.system;
        std::vector<std::pair<Trajectory, std::optional<double>>> runs;
        const EnergyEpisode& ep = s.experiment.energy;
        runs.emplace_back(harmonic_tracking_episode(sys, ep), 1.0 / ep.frequency_hz);
        const double amp = s.experiment.small_amplitude;
        runs.emplace_back(run_closed_loop(sys.plant, LockedLoad{}, sys.controller,
                                          [amp](double t) { return amp * std::sin(2.0 * std::numbers::pi * 5.0 * t); },
                                          1.0, sys.dt, sys.seed),
                          0.2);
        const double big = s.experiment.large_amplitude;
        runs.emplace_back(run_closed_loop(sys.plant, LockedLoad{}, sys.controller,
                                          [big](double t) { return big * std::sin(2.0 * std::numbers::pi * 8.0 * t); },
                                          1.0, sys.dt, sys.seed),
                          0.125);
        runs.emplace_back(run_closed_loop(sys.plant, InertialLoad{2.0, {}}, sys.controller,
                                          [](double t) { return t < 0.05 ? 100.0 : 0.0; }, 0.3, sys.dt, sys.seed),
                          std::nullopt);
        for (const auto& [traj, period] : runs) {
            const auto rep = energy_audit(traj, sys.plant, period);
            worst = std::max(worst, rep.metric("closure_relative"));
            ++episodes;
        }
    }
    return {worst < 0.01, g(episodes) + " episodes, worst closure " + g(100 * worst) + "% of motor work (limit 1%)"};
}

Result stance() {
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> box(-0.5, 0.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double mus[] = {0.0, 0.5, 1.0};
    double worst = 0.0;
    double worst_violation = 0.0;
    auto violation = [](const StanceProblem& p, const StanceSolution& s) {
        double v = 0.0;
        double scale = 1.0;
        for (const auto& f : s.forces) scale = std::max(scale, f.norm());
        for (std::size_t i = 0; i < p.feet.size(); ++i) {
            const Vec3& f = s.forces[i];
            const double fn = f.dot(p.feet[i].normal);
            const auto [t1, t2] = pyramid_tangents(p.feet[i].normal);
            const double mu = p.feet[i].friction_coefficient;
            v = std::max(v, -fn);
            v = std::max(v, std::abs(f.dot(t1)) - mu * fn);
            v = std::max(v, std::abs(f.dot(t2)) - mu * fn);
        }
        return v / scale;
    };
    for (int k = 0; k < 120; ++k) {
        const int n = 3 + k % 3;
        const double mu = mus[(k / 3) % 3];
        StanceProblem p;
        std::vector<Vec3> sample;
        for (int i = 0; i < n; ++i) {
            FootContact c;
            c.position = Vec3(box(rng), box(rng), box(rng));
            c.friction_coefficient = mu;
            p.feet.push_back(c);
            const double fn = 100.0 * unit(rng);
            sample.emplace_back(0.99 * mu * fn * (2 * unit(rng) - 1), 0.99 * mu * fn * (2 * unit(rng) - 1), fn);
        }
        const Wrench w = net_wrench(p.feet, sample);
        p.desired_force = w.head<3>();
        p.desired_moment = w.tail<3>();
        const auto a = distribute_forces(p);
        const auto b = enumerate_oracle(p);
        worst = std::max(worst, std::abs(a.objective_value - b.objective_value) / std::max(b.objective_value, 1e-3));
        worst_violation = std::max(worst_violation, violation(p, a));
        worst_violation = std::max(worst_violation, a.residual_wrench.norm() / std::max(1.0, w.norm()));
    }

    StanceProblem table;
    for (double x : {-0.5, 0.2, 0.6}) {
        FootContact c;
        c.position = Vec3(x, 0, 0);
        c.friction_coefficient = std::numeric_limits<double>::infinity();
        table.feet.push_back(c);
    }
    table.desired_force = Vec3(0, 0, 900);
    const auto t = distribute_forces(table);
    const Vec3 want(387.10, 285.49, 227.42);
    double table_err = 0.0;
    for (int i = 0; i < 3; ++i) table_err = std::max(table_err, std::abs(t.forces[i].z() - want(i)));

    const bool ok = worst <= 1e-6 && table_err <= 0.01 && worst_violation <= 1e-9;
    return {ok, "120 instances of 3 to 5 feet, worst objective gap " + g(worst) + " (limit 1e-6); table example off by " +
                    g(table_err) + " N (limit 0.01); worst constraint violation " + g(worst_violation) +
                    " relative"};
}

Result determinism(const Settings& s) {
    auto render = [&] {
        const SuiteReport rep = run_report(s);
        std::string all = format_report(rep);
        for (const auto& a : rep.artifacts) all += a.name + "\n" + a.content;
        return all;
    };
    const std::string a = render();
    const std::string b = render();
    return {a == b, "two report runs, " + g(static_cast<double>(a.size())) + " bytes each, " +
                        (a == b ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria", "acceptance"};
    std::vector<int> expected;
    std::string catalog = "SEA-23-23";
    app.add_option("--expect-fail", expected, "criteria known to fail");
    app.add_option("--catalog", catalog, "actuator for the single-catalog criteria")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const Settings s = default_settings(catalog);
    double bw = 0.0;
    struct Criterion {
        int id;
        const char* name;
        double budget_s;  // 0: no runtime limit
        std::function<Result()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "catalog consistency", 1.0, catalog_consistency},
        {2, "plant physics", 5.0, plant_physics},
        {3, "small-force bandwidth", 60.0, [&] { return small_bandwidth(s, bw); }},
        {4, "large-force bandwidth", 60.0, [&] { return large_bandwidth(s); }},
        {5, "impedance asymptote", 0.0, [&] { return impedance_asymptote(s, bw); }},
        {6, "force resolution", 0.0, [&] { return resolution(s); }},
        {7, "chatter dichotomy", 0.0, [&] { return chatter(s); }},
        {8, "shock attenuation", 0.0, [&] { return shock(s); }},
        {9, "energy audit closure", 0.0, energy},
        {10, "stance solver", 30.0, stance},
        {11, "determinism", 0.0, [&] { return determinism(s); }},
    };

    std::cout << "acceptance " << catalog << "  seed " << s.system.seed << '\n';
    std::set<int> failed;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0 && secs >= c.budget_s) {
            r.pass = false;
            r.detail += "; over the " + g(c.budget_s) + " s budget";
        }
        if (!r.pass) failed.insert(c.id);
        char head[64];
        std::snprintf(head, sizeof head, "%s %2d %-22s", r.pass ? "PASS" : "FAIL", c.id, c.name);
        std::cout << head << ' ' << r.detail << " [" << csv::fixed(secs, 2) << " s]" << std::endl;
    }

    const std::set<int> expect(expected.begin(), expected.end());
    std::cout << (criteria.size() - failed.size()) << "/" << criteria.size() << " criteria pass";
    if (!expect.empty()) {
        std::cout << "; expected failures:";
        for (int id : expect) std::cout << ' ' << id;
    }
    std::cout << '\n';
    if (failed != expect) {
        std::cout << "failing set differs from the expected set\n";
        return 1;
    }
    return 0;
}
