#include "sea/plant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sea {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

using Vec4 = std::array<double, 4>;  // x_m, v_m, x_l, v_l

// Load coordinates implied by the model for motor position/velocity at time t.
// InertialLoad keeps the integrated values.
void load_coordinates(const PlantParams& p, const LoadModel& load, double t, double x_m, double v_m,
                      double& x_l, double& v_l) {
    std::visit(Overloaded{
                   [&](const LockedLoad&) {
                       x_l = 0.0;
                       v_l = 0.0;
                   },
                   [&](const InertialLoad&) {},
                   [&](const EnvironmentSpring& env) {
                       // Massless output: spring and contact carry the same force.
                       if (x_m > env.rest_position) {
                           const double share = p.spring_stiffness /
                                                (p.spring_stiffness + env.contact_stiffness);
                           x_l = env.rest_position + share * (x_m - env.rest_position);
                           v_l = share * v_m;
                       } else {
                           x_l = x_m;
                           v_l = v_m;
                       }
                   },
                   [&](const PrescribedMotion& motion) {
                       x_l = motion.position(t);
                       v_l = motion.velocity(t);
                   },
               },
               load);
}

double sliding_friction(const PlantParams& p, double velocity, double applied_net) {
    const double direction = velocity != 0.0 ? sign(velocity) : sign(applied_net);
    return -direction * p.motor_coulomb - p.motor_viscous * velocity;
}

}  // namespace

void validate(const PlantParams& p) {
    const std::array values{p.motor_mass,          p.spring_stiffness,        p.spring_damping,
                            p.motor_viscous,       p.motor_coulomb,           p.max_effort_continuous,
                            p.max_effort_intermittent, p.max_speed,           p.sensor_quantum,
                            p.sensor_noise_sigma,  p.stick_velocity_band};
    for (double v : values) require(std::isfinite(v), "plant parameters must be finite");
    require(p.motor_mass > 0.0, "motor_mass must be positive");
    require(p.spring_stiffness > 0.0, "spring_stiffness must be positive");
    require(p.spring_damping >= 0.0, "spring_damping must be non-negative");
    require(p.motor_viscous >= 0.0, "motor_viscous must be non-negative");
    require(p.motor_coulomb >= 0.0, "motor_coulomb must be non-negative");
    require(p.max_effort_continuous > 0.0, "max_effort_continuous must be positive");
    require(p.max_effort_intermittent >= p.max_effort_continuous,
            "max_effort_intermittent must be at least max_effort_continuous");
    require(p.max_speed > 0.0, "max_speed must be positive");
    require(p.sensor_quantum >= 0.0, "sensor_quantum must be non-negative");
    require(p.sensor_noise_sigma >= 0.0, "sensor_noise_sigma must be non-negative");
    require(p.stick_velocity_band > 0.0, "stick_velocity_band must be positive");
}

PlantParams stiffened(const PlantParams& params, double multiplier) {
    require(std::isfinite(multiplier) && multiplier > 0.0, "stiffness multiplier must be positive");
    PlantParams out = params;
    out.spring_stiffness *= multiplier;
    out.spring_damping *= std::sqrt(multiplier);
    out.sensor_quantum /= multiplier;
    out.sensor_noise_sigma /= multiplier;
    return out;
}

PrescribedMotion sinusoidal_motion(double amplitude, double frequency_hz) {
    const double w = 2.0 * std::numbers::pi * frequency_hz;
    return {[=](double t) { return amplitude * std::sin(w * t); },
            [=](double t) { return amplitude * w * std::cos(w * t); }};
}

void validate(const LoadModel& load) {
    std::visit(Overloaded{
                   [](const LockedLoad&) {},
                   [](const InertialLoad& l) {
                       require(std::isfinite(l.mass) && l.mass > 0.0, "load mass must be positive");
                   },
                   [](const EnvironmentSpring& e) {
                       require(std::isfinite(e.contact_stiffness) && e.contact_stiffness > 0.0,
                               "contact stiffness must be positive");
                       require(std::isfinite(e.rest_position), "rest position must be finite");
                   },
                   [](const PrescribedMotion& m) {
                       require(static_cast<bool>(m.position) && static_cast<bool>(m.velocity),
                               "prescribed motion needs position and velocity");
                   },
               },
               load);
}

double spring_force(const PlantParams& p, const SimState& s) {
    return p.spring_stiffness * (s.x_m - s.x_l) + p.spring_damping * (s.v_m - s.v_l);
}

double measure_force(const PlantParams& p, const SimState& s, double noise_draw) {
    double deflection = s.deflection() + p.sensor_noise_sigma * noise_draw;
    if (p.sensor_quantum > 0.0) deflection = p.sensor_quantum * std::round(deflection / p.sensor_quantum);
    return p.spring_stiffness * deflection;
}

FrictionResult friction_force(const PlantParams& p, double velocity, double applied_net) {
    if (std::abs(velocity) < p.stick_velocity_band && std::abs(applied_net) <= p.motor_coulomb) {
        return {-applied_net, true};
    }
    return {sliding_friction(p, velocity, applied_net), false};
}

double clamp_effort(const PlantParams& p, double command) {
    return std::clamp(command, -p.max_effort_intermittent, p.max_effort_intermittent);
}

SimState resolve_load(const PlantParams& p, SimState s, const LoadModel& load) {
    load_coordinates(p, load, s.time, s.x_m, s.v_m, s.x_l, s.v_l);
    return s;
}

SimState step(const PlantParams& p, const SimState& state, double motor_effort_command,
              const LoadModel& load, double dt) {
    require(std::isfinite(dt) && dt > 0.0, "time step must be positive and finite");
    require(std::isfinite(motor_effort_command), "effort command must be finite");
    require(std::isfinite(state.time) && std::isfinite(state.x_m) && std::isfinite(state.v_m) &&
                std::isfinite(state.x_l) && std::isfinite(state.v_l),
            "state must be finite");

    const double u = clamp_effort(p, motor_effort_command);
    const bool inertial = std::holds_alternative<InertialLoad>(load);

    SimState start = resolve_load(p, state, load);
    const FrictionResult fr = friction_force(p, start.v_m, u - spring_force(p, start));
    const bool stuck = fr.stuck;
    if (stuck) start.v_m = 0.0;

    auto deriv = [&](double t, const Vec4& y) {
        double x_l = y[2];
        double v_l = y[3];
        load_coordinates(p, load, t, y[0], y[1], x_l, v_l);
        const double fs = p.spring_stiffness * (y[0] - x_l) + p.spring_damping * (y[1] - v_l);

        Vec4 d{0.0, 0.0, 0.0, 0.0};
        if (!stuck) {
            const double accel = (u + sliding_friction(p, y[1], u - fs) - fs) / p.motor_mass;
            d[0] = std::clamp(y[1], -p.max_speed, p.max_speed);
            const bool pinned = (y[1] >= p.max_speed && accel > 0.0) ||
                                (y[1] <= -p.max_speed && accel < 0.0);
            d[1] = pinned ? 0.0 : accel;
        }
        if (inertial) {
            const auto& l = std::get<InertialLoad>(load);
            const double ext = l.external_force ? l.external_force(t, y[2], y[3]) : 0.0;
            d[2] = y[3];
            d[3] = (fs + ext) / l.mass;
        }
        return d;
    };

    const Vec4 y0{start.x_m, start.v_m, start.x_l, start.v_l};
    const double t0 = start.time;
    auto axpy = [](const Vec4& y, double h, const Vec4& k) {
        return Vec4{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
    };
    const Vec4 k1 = deriv(t0, y0);
    const Vec4 k2 = deriv(t0 + 0.5 * dt, axpy(y0, 0.5 * dt, k1));
    const Vec4 k3 = deriv(t0 + 0.5 * dt, axpy(y0, 0.5 * dt, k2));
    const Vec4 k4 = deriv(t0 + dt, axpy(y0, dt, k3));

    SimState next;
    next.time = t0 + dt;
    next.stuck = stuck;
    Vec4 y1;
    for (std::size_t i = 0; i < 4; ++i) {
        y1[i] = y0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    next.x_m = y1[0];
    next.v_m = std::clamp(y1[1], -p.max_speed, p.max_speed);
    next.x_l = y1[2];
    next.v_l = y1[3];
    if (!inertial) next = resolve_load(p, next, load);

    require(std::isfinite(next.x_m) && std::isfinite(next.v_m) && std::isfinite(next.x_l) &&
                std::isfinite(next.v_l),
            "integration produced a non-finite state");
    return next;
}

double mechanical_energy(const PlantParams& p, const SimState& s, const LoadModel& load) {
    const double d = s.deflection();
    double e = 0.5 * p.motor_mass * s.v_m * s.v_m + 0.5 * p.spring_stiffness * d * d;
    if (const auto* l = std::get_if<InertialLoad>(&load)) e += 0.5 * l->mass * s.v_l * s.v_l;
    if (const auto* env = std::get_if<EnvironmentSpring>(&load)) {
        const double pen = std::max(0.0, s.x_l - env->rest_position);
        e += 0.5 * env->contact_stiffness * pen * pen;
    }
    return e;
}

}  // namespace sea
