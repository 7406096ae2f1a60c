#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "sea/plant.hpp"

using namespace sea;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Frictionless, undamped, with limits far out of reach.
PlantParams ideal(double k = 1e4, double m = 10.0) {
    PlantParams p;
    p.motor_mass = m;
    p.spring_stiffness = k;
    p.max_effort_continuous = 1e9;
    p.max_effort_intermittent = 1e9;
    p.max_speed = 1e9;
    return p;
}

}  // namespace

TEST_CASE("spring force") {
    PlantParams p = ideal(1000.0);
    SimState s;
    CHECK(spring_force(p, s) == 0.0);
    s.x_m = 0.01;
    CHECK_THAT(spring_force(p, s), WithinRel(10.0, 1e-12));
    p = ideal(2.2508e5);
    s.x_m = 5.928e-3;
    CHECK_THAT(spring_force(p, s), WithinRel(1334.3, 1e-3));
    p.spring_damping = 3.0;
    s.v_m = 2.0;
    s.v_l = 0.5;
    CHECK_THAT(spring_force(p, s), WithinRel(2.2508e5 * 5.928e-3 + 4.5, 1e-12));
}

TEST_CASE("quantized deflection sensor") {
    PlantParams p = ideal(2.2508e5);
    SimState s;
    s.x_m = 1.234e-4;
    CHECK(measure_force(p, s, 0.7) == spring_force(p, s));  // ideal sensor, sigma 0
    p.sensor_quantum = 2e-5;
    s.x_m = 1e-5;
    CHECK_THAT(measure_force(p, s, 0.0), WithinRel(4.5016, 1e-12));
    s.x_m = 9e-6;
    CHECK(measure_force(p, s, 0.0) == 0.0);
    p.sensor_noise_sigma = 1e-5;
    s.x_m = 0.0;
    CHECK_THAT(measure_force(p, s, 1.2), WithinRel(4.5016, 1e-12));
}

TEST_CASE("Karnopp friction") {
    PlantParams p = ideal();
    p.motor_coulomb = 4.5;
    auto r = friction_force(p, 0.0, 3.0);
    CHECK(r.stuck);
    CHECK(r.force == -3.0);
    r = friction_force(p, 0.1, 0.0);
    CHECK_FALSE(r.stuck);
    CHECK(r.force == -4.5);
    r = friction_force(p, 0.0, 10.0);  // breakaway at rest opposes the push
    CHECK_FALSE(r.stuck);
    CHECK(r.force == -4.5);
    p.motor_coulomb = 0.0;
    p.motor_viscous = 10.0;
    r = friction_force(p, 0.2, 0.0);
    CHECK_FALSE(r.stuck);
    CHECK_THAT(r.force, WithinRel(-2.0, 1e-12));
}

TEST_CASE("friction never injects energy while sliding") {
    PlantParams p = ideal();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        p.motor_coulomb = 10.0 * std::abs(u(rng));
        p.motor_viscous = 50.0 * std::abs(u(rng));
        const double v = u(rng) * (i % 3 == 0 ? 1e-4 : 1.0);
        const double applied = 20.0 * u(rng);
        const auto r = friction_force(p, v, applied);
        if (r.stuck) {
            CHECK(r.force + applied == 0.0);
        } else {
            CHECK(r.force * v <= 0.0);
        }
    }
}

TEST_CASE("stuck motor does not accelerate") {
    PlantParams p = ideal();
    p.motor_coulomb = 5.0;
    SimState s;
    const SimState next = step(p, s, 3.0, LockedLoad{}, 1e-4);
    CHECK(next.stuck);
    CHECK(next.x_m == 0.0);
    CHECK(next.v_m == 0.0);
}

TEST_CASE("unforced oscillation frequency and energy") {
    const double k = 1e4;
    const double m = 10.0;
    const PlantParams p = ideal(k, m);
    const double dt = 1e-4;
    SimState s;
    s.x_m = 0.01;
    const double e0 = mechanical_energy(p, s, LockedLoad{});
    CHECK_THAT(e0, WithinRel(0.5, 1e-12));

    // Zero crossings of x_m, interpolated, over 10 s.
    std::vector<double> crossings;
    double max_drift = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const SimState next = step(p, s, 0.0, LockedLoad{}, dt);
        if ((s.x_m > 0.0) != (next.x_m > 0.0)) {
            crossings.push_back(s.time + dt * s.x_m / (s.x_m - next.x_m));
        }
        s = next;
        max_drift = std::max(max_drift, std::abs(mechanical_energy(p, s, LockedLoad{}) - e0) / e0);
    }
    REQUIRE(crossings.size() > 10);
    const double period = 2.0 * (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    const double oracle_hz = std::sqrt(k / m) / (2.0 * std::numbers::pi);
    CHECK_THAT(1.0 / period, WithinRel(oracle_hz, 0.005));
    CHECK_THAT(1.0 / period, WithinRel(5.033, 1e-3));
    CHECK(max_drift < 1e-3);
}

TEST_CASE("equilibrium stays put") {
    const PlantParams p = ideal();
    SimState s;
    for (double dt : {1e-6, 1e-4, 1e-2}) {
        const SimState next = step(p, s, 0.0, LockedLoad{}, dt);
        CHECK(next.x_m == 0.0);
        CHECK(next.v_m == 0.0);
        CHECK(next.time == dt);
    }
}

TEST_CASE("effort clamp sets the acceleration") {
    PlantParams p = ideal(2.2508e5, 50.0);
    p.max_effort_continuous = 565.0;
    p.max_effort_intermittent = 1334.0;
    const double dt = 1e-6;
    const SimState next = step(p, SimState{}, 1e6, LockedLoad{}, dt);
    CHECK_THAT(next.v_m / dt, WithinRel(1334.0 / 50.0, 1e-6));
    CHECK(clamp_effort(p, -1e6) == -1334.0);
    CHECK(clamp_effort(p, 100.0) == 100.0);
}

TEST_CASE("motor speed never exceeds the clamp") {
    PlantParams p = ideal(2.2508e5, 50.0);
    p.max_speed = 0.2794;
    p.max_effort_continuous = 565.0;
    p.max_effort_intermittent = 1334.0;
    p.motor_coulomb = 4.45;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5000.0, 5000.0);
    SimState s;
    const auto load = sinusoidal_motion(0.02, 3.0);
    for (int i = 0; i < 20000; ++i) {
        s = step(p, s, u(rng), load, 1e-4);
        REQUIRE(std::abs(s.v_m) <= p.max_speed);
    }
}

TEST_CASE("free two-mass system conserves momentum") {
    const PlantParams p = ideal(5e3, 2.0);
    const InertialLoad load{3.0, {}};
    SimState s;
    s.v_m = 0.4;
    s.x_l = -0.01;
    const double p0 = 2.0 * s.v_m + 3.0 * s.v_l;
    const double e0 = mechanical_energy(p, s, load);
    for (int i = 0; i < 20000; ++i) s = step(p, s, 0.0, load, 1e-4);
    CHECK_THAT(2.0 * s.v_m + 3.0 * s.v_l, WithinAbs(p0, 1e-12));
    CHECK_THAT(mechanical_energy(p, s, load), WithinRel(e0, 1e-6));
}

TEST_CASE("external force reaches the load") {
    const PlantParams p = ideal();
    const InertialLoad load{2.0, [](double, double, double) { return 4.0; }};
    const SimState next = step(p, SimState{}, 0.0, load, 1e-5);
    CHECK_THAT(next.v_l / 1e-5, WithinRel(2.0, 1e-6));
}

TEST_CASE("massless output on a one-sided contact") {
    const PlantParams p = ideal(1e4);
    const EnvironmentSpring env{3e4, 0.001};
    SimState s;
    s.x_m = 0.0005;  // short of the contact: output follows the motor
    SimState r = resolve_load(p, s, env);
    CHECK(r.x_l == s.x_m);
    CHECK(spring_force(p, r) == 0.0);
    s.x_m = 0.005;
    r = resolve_load(p, s, env);
    // series springs: K (x_m - x_l) = k_c (x_l - rest)
    const double oracle = (1e4 * 0.005 + 3e4 * 0.001) / (1e4 + 3e4);
    CHECK_THAT(r.x_l, WithinRel(oracle, 1e-12));
}

TEST_CASE("prescribed motion") {
    const auto m = sinusoidal_motion(0.005, 2.0);
    CHECK_THAT(m.position(0.125), WithinAbs(0.005, 1e-15));
    CHECK_THAT(m.velocity(0.0), WithinRel(0.005 * 4.0 * std::numbers::pi, 1e-15));
    SimState s;
    s.time = 0.125;
    const SimState r = resolve_load(ideal(), s, m);
    CHECK_THAT(r.x_l, WithinAbs(0.005, 1e-15));
}

TEST_CASE("stiffened proxy keeps the force resolution") {
    PlantParams p = ideal(2.2508e5, 50.0);
    p.spring_damping = 67.0;
    p.sensor_quantum = 2e-5;
    p.sensor_noise_sigma = 1e-6;
    const PlantParams r = stiffened(p, 100.0);
    CHECK(r.spring_stiffness == 2.2508e7);
    CHECK_THAT(r.spring_damping, WithinRel(670.0, 1e-12));
    CHECK_THAT(r.spring_stiffness * r.sensor_quantum, WithinRel(p.spring_stiffness * p.sensor_quantum, 1e-12));
    CHECK_THAT(r.sensor_noise_sigma, WithinRel(1e-8, 1e-12));
    CHECK_THROWS_AS(stiffened(p, 0.0), std::invalid_argument);
}

TEST_CASE("bad inputs are rejected") {
    const PlantParams p = ideal();
    CHECK_THROWS_AS(step(p, SimState{}, 0.0, LockedLoad{}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(step(p, SimState{}, NAN, LockedLoad{}, 1e-4), std::invalid_argument);
    SimState bad;
    bad.v_m = INFINITY;
    CHECK_THROWS_AS(step(p, bad, 0.0, LockedLoad{}, 1e-4), std::invalid_argument);
    PlantParams q = p;
    q.motor_mass = 0.0;
    CHECK_THROWS_AS(validate(q), std::invalid_argument);
    q = p;
    q.max_effort_intermittent = 1.0;
    q.max_effort_continuous = 2.0;
    CHECK_THROWS_AS(validate(q), std::invalid_argument);
    CHECK_THROWS_AS(validate(LoadModel{InertialLoad{-1.0, {}}}), std::invalid_argument);
}

TEST_CASE("stepping is deterministic") {
    PlantParams p = ideal(2.2508e5, 50.0);
    p.motor_coulomb = 4.45;
    p.spring_damping = 67.0;
    auto run = [&] {
        SimState s;
        for (int i = 0; i < 5000; ++i) s = step(p, s, 300.0 * std::sin(0.01 * i), InertialLoad{1.0, {}}, 1e-4);
        return s;
    };
    const SimState a = run();
    const SimState b = run();
    CHECK(a.x_m == b.x_m);
    CHECK(a.v_m == b.v_m);
    CHECK(a.x_l == b.x_l);
    CHECK(a.v_l == b.v_l);
}
