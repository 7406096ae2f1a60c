#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "sea/analysis.hpp"
#include "sea/defaults.hpp"

using namespace sea;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ActuatorSystem reference() { return default_system(find_spec("SEA-23-23")); }

FreqResponsePoint pt(double f, double r) { return {f, r, 0.0, false}; }

}  // namespace

TEST_CASE("sine fit recovers amplitude and phase") {
    std::vector<double> t;
    std::vector<double> y;
    for (int i = 0; i < 4000; ++i) {
        t.push_back(i * 1e-3);
        y.push_back(3.0 * std::sin(2.0 * std::numbers::pi * 2.5 * t.back() + 0.4) + 0.7);
    }
    const SineFit fit = fit_sine(t, y, 2.5);
    CHECK_THAT(fit.amplitude, WithinRel(3.0, 1e-9));
    CHECK_THAT(fit.phase_deg, WithinRel(0.4 * 180.0 / std::numbers::pi, 1e-9));
}

TEST_CASE("bandwidth interpolates in log frequency") {
    const std::vector<FreqResponsePoint> pts = {pt(1, 1.0), pt(10, 0.9), pt(20, 0.5)};
    const auto bw = bandwidth_from_points(pts);
    // 10^(log10 10 + (0.9 - 1/sqrt2) / (0.9 - 0.5) * (log10 20 - log10 10))
    const double oracle = std::pow(10.0, 1.0 + (0.9 - 1.0 / std::sqrt(2.0)) / 0.4 * std::log10(2.0));
    CHECK_FALSE(bw.censored);
    CHECK_THAT(bw.frequency_hz, WithinRel(oracle, 1e-12));
    CHECK_THAT(bw.frequency_hz, WithinAbs(13.97, 0.005));
}

TEST_CASE("bandwidth censoring and rejection") {
    const std::vector<FreqResponsePoint> flat = {pt(1, 1.0), pt(10, 1.0), pt(100, 1.0)};
    const auto bw = bandwidth_from_points(flat);
    CHECK(bw.censored);
    CHECK(bw.frequency_hz == 100.0);
    const std::vector<FreqResponsePoint> low = {pt(1, 0.5)};
    CHECK_THROWS_AS(bandwidth_from_points(low), std::invalid_argument);
    CHECK_THROWS_AS(bandwidth_from_points({}), std::invalid_argument);
    std::vector<FreqResponsePoint> unstable = {pt(1, 1.0), pt(2, 1.3), pt(4, 0.9)};
    unstable[1].unstable = true;
    CHECK(bandwidth_from_points(unstable).frequency_hz < 2.0);
}

TEST_CASE("log spacing") {
    const auto f = log_spaced(1.0, 100.0, 3);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == 1.0);
    CHECK_THAT(f[1], WithinRel(10.0, 1e-14));
    CHECK_THAT(f[2], WithinRel(100.0, 1e-14));
    CHECK_THROWS(log_spaced(0.0, 1.0, 3));
}

TEST_CASE("report lookup") {
    ExperimentReport r;
    r.experiment = "x";
    r.add("a", 1.5, "N");
    r.flag("ok", true);
    CHECK(r.metric("a") == 1.5);
    CHECK(r.verdict("ok"));
    CHECK_THROWS_AS(r.metric("b"), std::out_of_range);
    CHECK(r.to_text() == "experiment: x\n  a   1.5 N\n  ok  yes\n");
}

TEST_CASE("quasi-static tracking") {
    const std::vector<double> f = {0.1};
    const auto p = bode_force_tracking(reference(), 44.5, f);
    CHECK(p[0].amplitude_ratio >= 0.99);
    CHECK(p[0].amplitude_ratio <= 1.01);
    CHECK_FALSE(p[0].unstable);
    CHECK_THROWS_AS(bode_force_tracking(reference(), 0.0, f), std::invalid_argument);
}

TEST_CASE("parallel sweep equals sequential sweep") {
    const auto f = log_spaced(2.0, 80.0, 6);
    SweepOptions seq;
    seq.parallel = false;
    const auto a = bode_force_tracking(reference(), 56.5, f);
    const auto b = bode_force_tracking(reference(), 56.5, f, seq);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(a[i].amplitude_ratio == b[i].amplitude_ratio);
        CHECK(a[i].phase_deg == b[i].phase_deg);
    }
}

TEST_CASE("small-force bandwidth of the reference actuator") {
    const ActuatorSystem sys = reference();
    const double amp = 0.1 * to_si(find_spec("SEA-23-23").continuous_force);
    const auto f = log_spaced(1.0, 140.0, 40);
    const auto bw = bandwidth_from_points(bode_force_tracking(sys, amp, f));
    CHECK_FALSE(bw.censored);
    CHECK(bw.frequency_hz >= 28.0);
    CHECK(bw.frequency_hz <= 42.0);
}

TEST_CASE("large-force bandwidth stays below the small-force one") {
    const ActuatorSystem sys = reference();
    const double big = to_si(pounds_force(300));
    const auto f = log_spaced(0.5, 30.0, 40);
    const auto large = bandwidth_from_points(bode_force_tracking(sys, big, f));
    CHECK_FALSE(large.censored);
    CHECK(large.frequency_hz < 38.0);
    // Regression value; this exceeds the speed-saturation law, see the notes.
    CHECK_THAT(large.frequency_hz, WithinRel(12.93, 0.01));
}

TEST_CASE("locked motor shows the bare spring") {
    ActuatorSystem sys = reference();
    sys.plant.spring_damping = 0.0;
    ImpedanceOptions opt;
    opt.motor_locked = true;
    const std::vector<double> f = {0.5, 7.0, 120.0};
    for (const auto& p : output_impedance(sys, 0.005, f, opt)) {
        CHECK_THAT(p.impedance_magnitude, WithinRel(sys.plant.spring_stiffness, 1e-9));
    }
    sys = reference();
    const double w = 2.0 * std::numbers::pi * 120.0;
    const double b = sys.plant.spring_damping;
    const double k = sys.plant.spring_stiffness;
    const std::vector<double> one = {120.0};
    CHECK_THAT(output_impedance(sys, 0.005, one, opt)[0].impedance_magnitude,
               WithinRel(std::hypot(k, b * w), 1e-6));
}

TEST_CASE("closed-loop impedance: back-drivable low, spring-like high") {
    const ActuatorSystem sys = reference();
    const double k = sys.plant.spring_stiffness;
    const std::vector<double> f = {0.5, 100.0};
    const auto z = output_impedance(sys, 0.005, f);
    CHECK(z[0].impedance_magnitude < 0.1 * k);
    CHECK(z[1].impedance_magnitude <= 1.2 * k);
    const double w = 2.0 * std::numbers::pi * 100.0;
    CHECK(z[1].impedance_magnitude <= 0.1 * sys.plant.motor_mass * w * w);
    CHECK_THROWS_AS(output_impedance(sys, 0.0, f), std::invalid_argument);
}

TEST_CASE("resolution threshold") {
    ActuatorSystem ideal = reference();
    ideal.plant.motor_coulomb = 0.0;
    ideal.plant.sensor_quantum = 0.0;
    const auto floor = smallest_resolvable_force(ideal);
    CHECK_THAT(floor.force, WithinAbs(0.1, 1e-12));

    const ActuatorSystem sys = reference();
    CHECK_THAT(sys.plant.spring_stiffness * sys.plant.sensor_quantum, WithinRel(4.50, 1e-3));
    const auto r = smallest_resolvable_force(sys);
    CHECK_FALSE(r.censored);
    CHECK(r.force >= 2.2);
    CHECK(r.force <= 6.7);
    CHECK_THAT(r.force, WithinAbs(3.613, 0.01));  // regression value
}

TEST_CASE("chatter needs the stiff sensor") {
    const ActuatorSystem sys = reference();
    ChatterOptions opt;
    opt.step_force = to_si(pounds_force(100));
    const auto soft = chatter_experiment(sys, 1.0, opt);
    CHECK_FALSE(soft.verdict("chatter"));
    CHECK(soft.metric("peak_overshoot") < 0.5);
    CHECK(chatter_experiment(sys, 100.0, opt).verdict("chatter"));

    ActuatorSystem open = sys;
    open.controller.kp = 0.0;
    open.controller.kd = 0.0;
    open.controller.feedforward = false;
    CHECK_FALSE(chatter_experiment(open, 1.0, opt).verdict("chatter"));
}

TEST_CASE("shock peak scales with the square root of stiffness") {
    ActuatorSystem sys = reference();
    sys.plant.motor_coulomb = 0.0;
    sys.plant.motor_viscous = 0.0;
    const auto rep = shock_test(sys, 1.0, 1.0);
    CHECK_THAT(rep.metric("peak_ratio_rigid_over_elastic"), WithinRel(10.0, 0.2));
    CHECK_THAT(rep.metric("peak_force_elastic"), WithinRel(std::sqrt(1.0 * 1.0 * 2.2508e5), 0.2));
    CHECK(rep.metric("peak_force_rigid") > 8.0 * 474.5 * 0.8);

    const auto still = shock_test(sys, 0.0, 1.0);
    CHECK(still.metric("peak_force_elastic") == 0.0);
    CHECK(still.metric("peak_force_rigid") == 0.0);
}

TEST_CASE("held deflection stores half k d squared") {
    const PlantParams p = reference().plant;
    Trajectory t;
    t.dt = 1e-3;
    for (int i = 0; i < 3; ++i) {
        TrajectoryRecord r;
        r.time_s = i * 1e-3;
        r.deflection_m = 0.004;
        r.x_m = 0.004;
        t.records.push_back(r);
    }
    const auto rep = energy_audit(t, p);
    CHECK_THAT(rep.metric("peak_spring_energy"), WithinRel(0.5 * p.spring_stiffness * 0.004 * 0.004, 1e-15));
    CHECK(rep.metric("motor_work") == 0.0);
    CHECK(rep.metric("stored_energy_change") == 0.0);
}

TEST_CASE("frictionless harmonic episode: motor work reaches the load") {
    ActuatorSystem sys = reference();
    sys.plant.motor_coulomb = 0.0;
    sys.plant.motor_viscous = 0.0;
    sys.plant.spring_damping = 0.0;
    const EnergyEpisode ep;
    const auto rep = energy_audit(harmonic_tracking_episode(sys, ep), sys.plant, 1.0 / ep.frequency_hz);
    CHECK_THAT(rep.metric("motor_work_per_cycle"), WithinRel(rep.metric("load_work_per_cycle"), 0.01));
    CHECK(rep.metric("closure_relative") < 0.01);
}

TEST_CASE("episode with friction closes the audit") {
    const ActuatorSystem sys = reference();
    const EnergyEpisode ep;
    const auto rep = energy_audit(harmonic_tracking_episode(sys, ep), sys.plant, 1.0 / ep.frequency_hz);
    CHECK(rep.metric("friction_dissipation") > 0.0);
    CHECK(rep.metric("closure_relative") < 0.01);
    const double lhs = rep.metric("motor_work") - rep.metric("load_work") - rep.metric("stored_energy_change");
    const double rhs = rep.metric("friction_dissipation") + rep.metric("damping_dissipation");
    CHECK_THAT(lhs, WithinRel(rhs, 0.01));
}

TEST_CASE("speed clamp absorbs the surplus drive") {
    const PlantParams p = reference().plant;
    const double v = p.max_speed;
    Trajectory t;
    t.dt = 1e-3;
    for (int i = 0; i < 11; ++i) {
        TrajectoryRecord r;
        r.time_s = i * 1e-3;
        r.x_m = r.x_l = v * r.time_s;
        r.v_m = r.v_l = v;
        r.effort_N = 1000.0;
        t.records.push_back(r);
    }
    const auto rep = energy_audit(t, p);
    const double surplus = (1000.0 - p.motor_coulomb - p.motor_viscous * v) * v * 0.01;
    CHECK_THAT(rep.metric("speed_limit_dissipation"), WithinRel(surplus, 1e-12));
    CHECK(rep.metric("closure_relative") < 1e-12);

    // a saturating sine: the clamp dominates the budget and the audit still closes
    const ActuatorSystem sys = reference();
    const double amp = 300.0 * units::kNewtonsPerPoundForce;
    const auto traj = run_closed_loop(sys.plant, LockedLoad{}, sys.controller,
                                      [=](double s) { return amp * std::sin(2.0 * std::numbers::pi * 8.0 * s); }, 1.0,
                                      sys.dt, sys.seed);
    const auto sat = energy_audit(traj, sys.plant, 0.125);
    CHECK(sat.metric("speed_clamped_samples") > 0.0);
    CHECK(sat.metric("speed_limit_dissipation") > 0.5 * sat.metric("motor_work"));
    CHECK(sat.metric("closure_relative") < 0.01);
}
