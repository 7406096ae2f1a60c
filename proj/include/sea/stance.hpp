#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sea {

using Vec3 = Eigen::Vector3d;
using Wrench = Eigen::Matrix<double, 6, 1>;  // force then moment about the body origin

struct FootContact {
    Vec3 position = Vec3::Zero();   // m, body frame
    Vec3 normal = Vec3::UnitZ();     // unit length
    // Pyramid half-width ratio. Zero allows normal force only; +infinity
    // leaves the tangential components unconstrained.
    double friction_coefficient = 0.0;
    bool in_contact = true;
    // Optional ceiling on the normal component, N.
    std::optional<double> max_normal_force;
};

struct StanceProblem {
    std::vector<FootContact> feet;
    Vec3 desired_force = Vec3::Zero();   // N
    Vec3 desired_moment = Vec3::Zero();  // N*m about the body origin
    double regularization = 0.0;
};

struct StanceSolution {
    std::vector<Vec3> forces;                 // one per foot, zero when out of contact
    Wrench residual_wrench = Wrench::Zero();  // desired minus achieved
    std::vector<std::string> active_constraints;
    double objective_value = 0.0;             // (1 + regularization) * sum |f_i|^2, N^2
    int iterations = 0;
};

/// Raised when the active-set loop hits its cap. Carries the best feasible
/// iterate found so far.
class StanceSolverError : public std::runtime_error {
public:
    StanceSolverError(const std::string& what, StanceSolution best)
        : std::runtime_error(what), best_(std::move(best)) {}
    [[nodiscard]] const StanceSolution& best_iterate() const { return best_; }

private:
    StanceSolution best_;
};

/// Throws std::invalid_argument for a non-unit normal, negative friction
/// coefficient, negative cap, negative regularization or no foot in contact.
void validate(const StanceProblem& problem);

/// (sum f_i, sum p_i x f_i). Throws std::invalid_argument on length mismatch.
Wrench net_wrench(const std::vector<FootContact>& feet, const std::vector<Vec3>& forces);

/// Tangent directions of the friction pyramid: the body x axis projected onto
/// the contact plane (the y axis when x is parallel to the normal), then
/// normal x t1.
std::pair<Vec3, Vec3> pyramid_tangents(const Vec3& normal);

/// Minimum sum of squared foot forces reproducing the desired wrench, subject
/// to unilateral normals and a four-face friction pyramid per foot. When the
/// wrench is not reachable the solution minimizes the wrench residual first
/// and the force norm second. Two primal active-set passes over
/// minimum-norm equality-constrained least-squares subproblems.
///
/// Constraint identifiers read "foot<i>.<kind>" with kind one of normal,
/// face+t1, face-t1, face+t2, face-t2, cap. With a finite positive friction
/// coefficient the four faces imply the normal bound, which is then not a
/// separate constraint; with zero friction the tangential components are
/// eliminated and only the normal bound remains.
StanceSolution distribute_forces(const StanceProblem& problem);

/// Number of inequality constraints the problem carries.
int inequality_count(const StanceProblem& problem);

/// Exhaustive reference solver: every active subset is solved as an equality
/// problem and the best feasible candidate kept. Subsets that pin a foot to the
/// same affine set are solved once. Throws std::invalid_argument above 20
/// inequality constraints.
StanceSolution enumerate_oracle(const StanceProblem& problem);

struct VirtualSuspension {
    Vec3 linear_stiffness = Vec3::Zero();   // N/m
    Vec3 linear_damping = Vec3::Zero();     // N*s/m
    Vec3 angular_stiffness = Vec3::Zero();  // N*m/rad
    Vec3 angular_damping = Vec3::Zero();    // N*m*s/rad
    Vec3 setpoint_position = Vec3::Zero();  // m
    Vec3 setpoint_rpy = Vec3::Zero();       // rad
};

struct BodyState {
    Vec3 position = Vec3::Zero();
    Vec3 rpy = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    Vec3 angular_velocity = Vec3::Zero();
};

/// Componentwise spring-damper toward the setpoint pose. Roll, pitch and yaw
/// are treated as small: any magnitude at or above pi/2 is rejected, as are
/// negative gains.
Wrench suspension_wrench(const VirtualSuspension& suspension, const BodyState& body);

}  // namespace sea
