#pragma once

#include "sea/analysis.hpp"
#include "sea/catalog.hpp"

// Shipped constants. Everything a default run depends on lives here.
namespace sea::defaults {

// Reference actuator (SEA-23-23). The table publishes no inertia, so the
// output-referred motor mass is chosen to put the open-loop spring/motor
// resonance near 10.7 Hz, well below the 35 Hz closed-loop target.
inline constexpr double kReferenceMotorMass = 50.0;          // kg
inline constexpr double kReferenceStiffness = 2.2508e5;      // N/m, from derive_spring_stiffness
inline constexpr double kReferenceSmallBandwidth = 35.0;     // Hz
inline constexpr double kCoulombFriction = 4.45;             // N, about 1 lbf at the output
inline constexpr double kReferenceQuantum = 2e-5;            // m, K*q is about 1 lbf
inline constexpr double kSpringDampingFraction = 0.02;       // of sqrt(K*m)
inline constexpr double kStickVelocityBand = 1e-4;           // m/s

inline constexpr double kPlantStep = 1e-4;        // s
inline constexpr double kSamplePeriod = 1e-3;     // s
inline constexpr std::uint64_t kSeed = 0;

// Force-loop gains for the reference actuator.
//
// Tuning procedure: grid over kp in {1, 1.5, 2, 2.5, 3, 4}, kd in
// {0.01 .. 0.03} s and tc in {0, 0.5, 1} ms on the full nonlinear plant
// (friction, quantizer, saturation). Keep points whose small-force bandwidth
// sits in [28, 42] Hz, whose 0.1 Hz ratio is within 1% of unity, whose
// 100 lbf contact step overshoots by less than 50% at stiffness x1 and
// chatters at x100, and whose resolution threshold lies in [2.2, 6.7] N.
// Below kp = 2 the loop never dithers across the quantizer and the threshold
// stalls at 7.2 N; above kp = 2.5 the step overshoot approaches the limit.
// kp = 2, kd = 0.02 s, tc = 1 ms is the centre of the surviving region
// (38.3 Hz, 3.6 N, 26% overshoot).
inline constexpr double kReferenceKp = 2.0;
inline constexpr double kReferenceKd = 0.02;        // s
inline constexpr double kReferenceFilterTc = 1e-3;  // s

// Excitation and experiment defaults.
inline constexpr double kSmallAmplitudeFraction = 0.1;  // of continuous force
inline constexpr double kImpedanceAmplitude = 0.005;    // m
inline constexpr double kRigidMultiplier = 100.0;
inline constexpr double kShockSpeed = 1.0;              // m/s
inline constexpr double kShockMass = 1.0;               // kg

}  // namespace sea::defaults

namespace sea {

/// Default plant and servo for a catalog entry. Stiffness comes from
/// derive_spring_stiffness. The other actuators are dynamically scaled from the
/// reference: with lambda = f_small / 35 Hz the motor mass keeps the same
/// resonance-to-bandwidth ratio, kd and tc shrink by 1/lambda, kp is unchanged,
/// and the quantum keeps the reference force step K*q. Effort limits are the listed
/// continuous and peak forces, max speed the listed speed.
ActuatorSystem default_system(const ActuatorSpec& spec);

}  // namespace sea
