#include "sea/defaults.hpp"

#include <cmath>

namespace sea {

ActuatorSystem default_system(const ActuatorSpec& spec) {
    using namespace defaults;
    const double k = derive_spring_stiffness(spec).stiffness.magnitude;
    const double lambda = to_si(spec.small_force_bandwidth) / kReferenceSmallBandwidth;

    ActuatorSystem sys;
    PlantParams& p = sys.plant;
    p.spring_stiffness = k;
    p.motor_mass = kReferenceMotorMass * (k / kReferenceStiffness) / (lambda * lambda);
    p.spring_damping = kSpringDampingFraction * std::sqrt(k * p.motor_mass);
    p.motor_viscous = 0.0;
    p.motor_coulomb = kCoulombFriction;
    p.max_effort_continuous = to_si(spec.continuous_force);
    p.max_effort_intermittent = to_si(spec.peak_force());
    p.max_speed = to_si(spec.max_speed);
    p.sensor_quantum = kReferenceQuantum * kReferenceStiffness / k;
    p.sensor_noise_sigma = 0.0;
    p.stick_velocity_band = kStickVelocityBand;

    sys.controller.kp = kReferenceKp;
    sys.controller.kd = kReferenceKd / lambda;
    sys.controller.feedforward = true;
    sys.controller.sample_period = kSamplePeriod;
    sys.controller.derivative_filter_tc = kReferenceFilterTc / lambda;
    sys.dt = kPlantStep;
    sys.seed = kSeed;
    return sys;
}

}  // namespace sea
