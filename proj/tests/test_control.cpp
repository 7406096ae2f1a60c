#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "sea/analysis.hpp"
#include "sea/control.hpp"
#include "sea/defaults.hpp"

using namespace sea;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Heavily damped, frictionless plant: the force loop is a slow first-order
// lag, so a proportional servo settles to its analytic equilibrium.
PlantParams damped() {
    PlantParams p;
    p.motor_mass = 100.0;
    p.spring_stiffness = 1e4;
    p.motor_viscous = 1e5;
    p.max_effort_continuous = 1e9;
    p.max_effort_intermittent = 1e9;
    p.max_speed = 1e9;
    return p;
}

ControllerConfig proportional(double kp) {
    ControllerConfig c;
    c.kp = kp;
    c.kd = 0.0;
    c.feedforward = false;
    return c;
}

double final_force(const PlantParams& p, const ControllerConfig& c, double f_des, double duration) {
    const auto t = run_closed_loop(p, LockedLoad{}, c, [=](double) { return f_des; }, duration, 1e-4, 0);
    return t.records.back().force_true_N;
}

ActuatorSystem reference() { return default_system(find_spec("SEA-23-23")); }

}  // namespace

TEST_CASE("PD law") {
    ControllerConfig c = proportional(100.0);
    CHECK(pd_force_command(c, 100.0, 0.0, 0.0) == 10000.0);
    c.feedforward = true;
    c.kd = 0.02;
    CHECK(pd_force_command(c, 250.0, 250.0, 0.0) == 250.0);
    CHECK_THAT(pd_force_command(c, 10.0, 8.0, 50.0), WithinRel(10.0 + 200.0 + 1.0, 1e-15));
    CHECK_THROWS_AS(pd_force_command(c, NAN, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("position loop over the force loop") {
    PositionLoopConfig c{1e4, 0.0, 1334.0};
    SimState s;
    s.x_l = 0.02;
    CHECK(position_over_force(c, 0.02, s) == 0.0);
    CHECK_THAT(position_over_force(c, 0.03, s), WithinRel(100.0, 1e-12));
    c.kp_pos = 1e6;
    CHECK(position_over_force(c, 0.03, s) == 1334.0);
    CHECK(position_over_force(c, 0.01, s) == -1334.0);
    c.kp_pos = 0.0;
    c.kd_pos = 50.0;
    s.v_l = 2.0;
    CHECK(position_over_force(c, 0.0, s) == -100.0);
}

TEST_CASE("error rate filter") {
    ErrorRateFilter raw(1e-3, 0.0);
    CHECK(raw.update(0.0) == 0.0);
    CHECK_THAT(raw.update(0.5), WithinRel(500.0, 1e-12));
    CHECK_THAT(raw.update(1.0), WithinRel(500.0, 1e-12));

    // First-order lag: a ramp's rate converges to the slope.
    ErrorRateFilter lag(1e-3, 1e-3);
    double r = 0.0;
    for (int i = 0; i < 100; ++i) r = lag.update(2.0 * i);
    CHECK_THAT(r, WithinRel(2000.0, 1e-12));
    CHECK_THAT(lag.rate(), WithinRel(2000.0, 1e-12));
}

TEST_CASE("proportional loop equilibrium without feedforward") {
    // u = F and u = kp (F_des - F) give F = kp F_des / (1 + kp).
    const double f = final_force(damped(), proportional(100.0), 100.0, 2.0);
    CHECK_THAT(f, WithinRel(100.0 * 100.0 / 101.0, 1e-6));
    CHECK_THAT(f, WithinAbs(99.0099, 1e-4));
}

TEST_CASE("larger kp leaves the smaller offset") {
    const double lo = final_force(damped(), proportional(10.0), 100.0, 20.0);
    const double hi = final_force(damped(), proportional(100.0), 100.0, 2.0);
    CHECK(100.0 - hi < 100.0 - lo);
    CHECK_THAT(100.0 - lo, WithinRel(100.0 / 11.0, 1e-6));
}

TEST_CASE("zero command holds zero force") {
    const ActuatorSystem sys = reference();
    const auto t = run_closed_loop(sys.plant, LockedLoad{}, sys.controller, [](double) { return 0.0; }, 0.5,
                                   sys.dt, sys.seed);
    const double floor = sys.plant.spring_stiffness * sys.plant.sensor_quantum;
    for (const auto& r : t.records) REQUIRE(std::abs(r.force_true_N) <= floor);
}

TEST_CASE("reference step settles and its settling time is frozen") {
    const ActuatorSystem sys = reference();
    const double f = 100.0 * units::kNewtonsPerPoundForce;
    const ExperimentReport rep = step_response(sys, f, 0.5);
    CHECK(rep.verdict("settled"));
    CHECK(rep.metric("tail_error_relative") <= 0.02);
    // Golden value from the first run with the shipped constants.
    CHECK_THAT(rep.metric("settling_time"), WithinAbs(0.0648, 1e-9));
    // With feedforward the residual offset is set by the quantizer, not kp.
    CHECK(std::abs(rep.metric("final_force") - f) <= sys.plant.spring_stiffness * sys.plant.sensor_quantum);
}

TEST_CASE("sine tracking agrees with the sweep") {
    const ActuatorSystem sys = reference();
    const double amp = 44.5;
    const auto t = run_closed_loop(sys.plant, LockedLoad{}, sys.controller,
                                   [=](double s) { return amp * std::sin(2.0 * std::numbers::pi * s); }, 15.0,
                                   sys.dt, sys.seed);
    std::vector<double> time;
    std::vector<double> force;
    for (const auto& r : t.records) {
        if (r.time_s >= 5.0 && r.time_s < 15.0) {
            time.push_back(r.time_s);
            force.push_back(r.force_true_N);
        }
    }
    const double ratio = fit_sine(time, force, 1.0).amplitude / amp;
    const std::vector<double> one = {1.0};
    const double swept = bode_force_tracking(sys, amp, one)[0].amplitude_ratio;
    CHECK_THAT(ratio, WithinRel(swept, 0.01));
}

TEST_CASE("effort is held between controller ticks") {
    const ActuatorSystem sys = reference();
    const auto t = run_closed_loop(sys.plant, LockedLoad{}, sys.controller,
                                   [](double s) { return 200.0 * std::sin(30.0 * s); }, 0.2, sys.dt, sys.seed);
    // rows 10k+1 .. 10k+10 come from the tick at 10k
    for (std::size_t i = 1; i + 1 < t.records.size(); ++i) {
        if (i % 10 != 0) REQUIRE(t.records[i].effort_N == t.records[i + 1].effort_N);
    }
}

TEST_CASE("episodes are reproducible from the seed") {
    ActuatorSystem sys = reference();
    sys.plant.sensor_noise_sigma = 5e-6;
    auto run = [&](std::uint64_t seed) {
        return run_closed_loop(sys.plant, InertialLoad{2.0, {}}, sys.controller, [](double) { return 100.0; }, 0.3,
                               sys.dt, seed);
    };
    const auto a = run(11);
    const auto b = run(11);
    const auto c = run(12);
    std::ostringstream sa, sb, sc;
    write_csv(sa, a);
    write_csv(sb, b);
    write_csv(sc, c);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str() != sc.str());
}

TEST_CASE("trajectory csv round trip") {
    const ActuatorSystem sys = reference();
    const auto t = run_closed_loop(sys.plant, LockedLoad{}, sys.controller, [](double) { return 50.0; }, 0.05,
                                   sys.dt, 0);
    std::stringstream buf;
    write_csv(buf, t);
    CHECK(buf.str().rfind("time_s,x_m,v_m,x_l,v_l,deflection_m,force_true_N,force_meas_N,cmd_N,effort_N,stuck\n", 0) ==
          0);
    const Trajectory back = read_csv(buf);
    REQUIRE(back.records.size() == t.records.size());
    for (std::size_t i = 0; i < t.records.size(); ++i) {
        REQUIRE(back.records[i].force_true_N == t.records[i].force_true_N);
        REQUIRE(back.records[i].stuck == t.records[i].stuck);
    }
    std::istringstream broken("time_s\n1,2,3\n");
    CHECK_THROWS(read_csv(broken));
}

TEST_CASE("sample period must be a multiple of dt") {
    ActuatorSystem sys = reference();
    sys.controller.sample_period = 1.5e-4;
    CHECK_THROWS_AS(run_closed_loop(sys.plant, LockedLoad{}, sys.controller, [](double) { return 0.0; }, 0.1,
                                    1e-4, 0),
                    std::invalid_argument);
    ControllerConfig bad;
    bad.kp = -1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
