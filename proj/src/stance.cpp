#include "sea/stance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

namespace sea {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

bool finite(const Vec3& v) { return v.allFinite(); }

Eigen::Matrix3d skew(const Vec3& p) {
    Eigen::Matrix3d s;
    s << 0.0, -p.z(), p.y(), p.z(), 0.0, -p.x(), -p.y(), p.x(), 0.0;
    return s;
}

// One foot's constraints in its own reduced coordinates.
struct LocalConstraints {
    MatrixXd rows;  // k x dim, unit-norm rows
    VectorXd rhs;
    std::vector<std::string> kinds;
};

// The problem in reduced coordinates z. Feet with zero friction keep only the
// normal component; out-of-contact feet carry no variables.
struct Formulation {
    int nz = 0;
    std::vector<int> offset;  // per foot, -1 when out of contact
    std::vector<int> dim;
    std::vector<MatrixXd> basis;  // 3 x dim, maps local z to the foot force
    std::vector<LocalConstraints> local;
    MatrixXd A;  // 6 x nz
    MatrixXd G;  // m x nz
    VectorXd g;
    std::vector<std::string> names;
    Wrench w = Wrench::Zero();
    double scale = 1.0;
};

LocalConstraints foot_constraints(const FootContact& foot) {
    LocalConstraints lc;
    const double mu = foot.friction_coefficient;
    std::vector<Eigen::RowVector3d> rows;
    std::vector<double> rhs;
    if (mu == 0.0) {
        lc.rows.resize(foot.max_normal_force ? 2 : 1, 1);
        lc.rhs.resize(lc.rows.rows());
        lc.rows(0, 0) = 1.0;
        lc.rhs(0) = 0.0;
        lc.kinds.push_back("normal");
        if (foot.max_normal_force) {
            lc.rows(1, 0) = -1.0;
            lc.rhs(1) = -*foot.max_normal_force;
            lc.kinds.push_back("cap");
        }
        return lc;
    }
    const Vec3& n = foot.normal;
    if (std::isinf(mu)) {
        rows.push_back(n.transpose());
        rhs.push_back(0.0);
        lc.kinds.push_back("normal");
    } else {
        const auto [t1, t2] = pyramid_tangents(n);
        const Vec3 faces[4] = {mu * n + t1, mu * n - t1, mu * n + t2, mu * n - t2};
        const char* kinds[4] = {"face+t1", "face-t1", "face+t2", "face-t2"};
        for (int i = 0; i < 4; ++i) {
            rows.push_back(faces[i].normalized().transpose());
            rhs.push_back(0.0);
            lc.kinds.emplace_back(kinds[i]);
        }
    }
    if (foot.max_normal_force) {
        rows.push_back(-n.transpose());
        rhs.push_back(-*foot.max_normal_force);
        lc.kinds.push_back("cap");
    }
    lc.rows.resize(static_cast<Eigen::Index>(rows.size()), 3);
    lc.rhs.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        lc.rows.row(static_cast<Eigen::Index>(i)) = rows[i];
        lc.rhs(static_cast<Eigen::Index>(i)) = rhs[i];
    }
    return lc;
}

Formulation formulate(const StanceProblem& problem) {
    validate(problem);
    Formulation f;
    const std::size_t nf = problem.feet.size();
    f.offset.assign(nf, -1);
    f.dim.assign(nf, 0);
    f.basis.resize(nf);
    f.local.resize(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        const FootContact& foot = problem.feet[i];
        if (!foot.in_contact) continue;
        f.offset[i] = f.nz;
        if (foot.friction_coefficient == 0.0) {
            f.dim[i] = 1;
            f.basis[i] = foot.normal;
        } else {
            f.dim[i] = 3;
            f.basis[i] = Eigen::Matrix3d::Identity();
        }
        f.local[i] = foot_constraints(foot);
        f.nz += f.dim[i];
    }

    f.A = MatrixXd::Zero(6, f.nz);
    int m = 0;
    for (std::size_t i = 0; i < nf; ++i) {
        if (f.offset[i] < 0) continue;
        f.A.block(0, f.offset[i], 3, f.dim[i]) = f.basis[i];
        f.A.block(3, f.offset[i], 3, f.dim[i]) = skew(problem.feet[i].position) * f.basis[i];
        m += static_cast<int>(f.local[i].rows.rows());
    }
    f.G = MatrixXd::Zero(m, f.nz);
    f.g = VectorXd::Zero(m);
    int row = 0;
    for (std::size_t i = 0; i < nf; ++i) {
        if (f.offset[i] < 0) continue;
        const LocalConstraints& lc = f.local[i];
        for (Eigen::Index k = 0; k < lc.rows.rows(); ++k, ++row) {
            f.G.block(row, f.offset[i], 1, f.dim[i]) = lc.rows.row(k);
            f.g(row) = lc.rhs(k);
            f.names.push_back("foot" + std::to_string(i) + "." + lc.kinds[static_cast<std::size_t>(k)]);
        }
    }
    f.w << problem.desired_force, problem.desired_moment;
    f.scale = std::max(1.0, f.w.norm());
    for (const auto& foot : problem.feet) {
        if (foot.in_contact && foot.max_normal_force) f.scale = std::max(f.scale, *foot.max_normal_force);
    }
    return f;
}

// Rank threshold shared by every decomposition.
constexpr double kRankThreshold = 1e-10;

VectorXd min_norm_solve(const MatrixXd& M, const VectorXd& rhs) {
    if (M.cols() == 0) return VectorXd::Zero(0);
    if (M.rows() == 0) return VectorXd::Zero(M.cols());
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(M);
    cod.setThreshold(kRankThreshold);
    return cod.solve(rhs);
}

// Particular solution and null-space basis of G x = g. Returns false when the
// system is inconsistent.
bool affine_set(const MatrixXd& G, const VectorXd& g, int n, VectorXd& x0, MatrixXd& N) {
    if (G.rows() == 0) {
        x0 = VectorXd::Zero(n);
        N = MatrixXd::Identity(n, n);
        return true;
    }
    Eigen::JacobiSVD<MatrixXd> svd(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(kRankThreshold);
    const auto rank = svd.rank();
    x0 = svd.solve(g);
    N = svd.matrixV().rightCols(n - rank);
    return (G * x0 - g).norm() <= 1e-9 * std::max(1.0, g.norm());
}

MatrixXd rows_of(const MatrixXd& M, const std::vector<int>& idx) {
    MatrixXd out(static_cast<Eigen::Index>(idx.size()), M.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = M.row(idx[k]);
    return out;
}

VectorXd entries_of(const VectorXd& v, const std::vector<int>& idx) {
    VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(idx[k]);
    return out;
}

// Lexicographic least squares on the working set: minimum residual
// |A x - w| first, minimum |x| among the minimizers second.
VectorXd residual_subproblem(const Formulation& f, const std::vector<int>& W) {
    VectorXd x0;
    MatrixXd N;
    affine_set(rows_of(f.G, W), entries_of(f.g, W), f.nz, x0, N);
    const VectorXd z = min_norm_solve(f.A * N, f.w - f.A * x0);
    return x0 + N * z;
}

struct Equality {
    MatrixXd E;
    VectorXd e;
};

// A x = target rewritten with independent orthonormal rows.
Equality wrench_equality(const Formulation& f, const Wrench& target) {
    Eigen::JacobiSVD<MatrixXd> svd(f.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kRankThreshold);
    const auto r = svd.rank();
    Equality eq;
    eq.E = svd.matrixV().leftCols(r).transpose();
    eq.e = svd.singularValues().head(r).cwiseInverse().asDiagonal() *
           (svd.matrixU().leftCols(r).transpose() * target);
    return eq;
}

StanceSolution assemble(const StanceProblem& problem, const Formulation& f, const VectorXd& x,
                        int iterations) {
    StanceSolution s;
    s.forces.assign(problem.feet.size(), Vec3::Zero());
    for (std::size_t i = 0; i < problem.feet.size(); ++i) {
        if (f.offset[i] < 0) continue;
        s.forces[i] = f.basis[i] * x.segment(f.offset[i], f.dim[i]);
    }
    s.residual_wrench = f.w - net_wrench(problem.feet, s.forces);
    double sq = 0.0;
    for (const auto& fi : s.forces) sq += fi.squaredNorm();
    s.objective_value = (1.0 + problem.regularization) * sq;
    const VectorXd slack = f.G * x - f.g;
    for (Eigen::Index k = 0; k < slack.size(); ++k) {
        if (std::abs(slack(k)) <= 1e-9 * f.scale) s.active_constraints.push_back(f.names[static_cast<std::size_t>(k)]);
    }
    s.iterations = iterations;
    return s;
}

// Primal active-set loop from a feasible start. `solve` returns the working-set
// optimum and `multipliers` the working-set multipliers at it.
template <class Solve, class Multipliers>
VectorXd active_set(const Formulation& f, VectorXd x, const Solve& solve, const Multipliers& multipliers,
                    int cap, int& iterations, const StanceProblem& problem) {
    std::vector<int> W;
    const double step_tol = 1e-12 * f.scale;
    const double mult_tol = 1e-10 * f.scale;
    for (int it = 0; it < cap; ++it, ++iterations) {
        const VectorXd p = solve(W);
        const VectorXd d = p - x;
        if (d.norm() <= step_tol) {
            if (W.empty()) return p;
            const VectorXd lambda = multipliers(W, p);
            Eigen::Index j = 0;
            if (lambda.minCoeff(&j) >= -mult_tol) return p;
            W.erase(W.begin() + j);
            x = p;
            continue;
        }
        double alpha = 1.0;
        int blocking = -1;
        for (int i = 0; i < f.G.rows(); ++i) {
            if (std::find(W.begin(), W.end(), i) != W.end()) continue;
            const double gd = f.G.row(i).dot(d);
            if (gd >= -1e-14 * d.norm()) continue;
            const double slack = std::max(0.0, f.G.row(i).dot(x) - f.g(i));
            const double a = slack / -gd;
            if (a < alpha) {
                alpha = a;
                blocking = i;
            }
        }
        x += alpha * d;
        if (blocking >= 0) W.push_back(blocking);
    }
    throw StanceSolverError("stance solver did not converge within " + std::to_string(cap) + " iterations",
                            assemble(problem, f, x, iterations));
}

}  // namespace

void validate(const StanceProblem& problem) {
    require(!problem.feet.empty(), "stance problem has no feet");
    bool any = false;
    for (std::size_t i = 0; i < problem.feet.size(); ++i) {
        const FootContact& foot = problem.feet[i];
        const std::string tag = "foot " + std::to_string(i) + ": ";
        require(finite(foot.position), tag + "position must be finite");
        require(finite(foot.normal) && std::abs(foot.normal.norm() - 1.0) <= 1e-9,
                tag + "normal must have unit length");
        require(!std::isnan(foot.friction_coefficient) && foot.friction_coefficient >= 0.0,
                tag + "friction coefficient must be non-negative");
        if (foot.max_normal_force) {
            require(std::isfinite(*foot.max_normal_force) && *foot.max_normal_force >= 0.0,
                    tag + "normal force cap must be non-negative");
        }
        any = any || foot.in_contact;
    }
    require(any, "stance problem has no foot in contact");
    require(finite(problem.desired_force) && finite(problem.desired_moment), "desired wrench must be finite");
    require(std::isfinite(problem.regularization) && problem.regularization >= 0.0,
            "regularization must be non-negative");
}

Wrench net_wrench(const std::vector<FootContact>& feet, const std::vector<Vec3>& forces) {
    require(feet.size() == forces.size(), "net_wrench: " + std::to_string(forces.size()) +
                                              " forces for " + std::to_string(feet.size()) + " feet");
    Wrench w = Wrench::Zero();
    for (std::size_t i = 0; i < feet.size(); ++i) {
        w.head<3>() += forces[i];
        w.tail<3>() += feet[i].position.cross(forces[i]);
    }
    return w;
}

std::pair<Vec3, Vec3> pyramid_tangents(const Vec3& normal) {
    Vec3 t1 = Vec3::UnitX() - normal.x() * normal;
    if (t1.norm() < 1e-6) t1 = Vec3::UnitY() - normal.y() * normal;
    t1.normalize();
    return {t1, normal.cross(t1)};
}

int inequality_count(const StanceProblem& problem) {
    int count = 0;
    for (const auto& foot : problem.feet) {
        if (!foot.in_contact) continue;
        const double mu = foot.friction_coefficient;
        count += (mu == 0.0 || std::isinf(mu)) ? 1 : 4;
        if (foot.max_normal_force) ++count;
    }
    return count;
}

StanceSolution distribute_forces(const StanceProblem& problem) {
    const Formulation f = formulate(problem);
    const int cap = 100 + 20 * static_cast<int>(f.G.rows());
    int iterations = 0;

    // Pass 1: smallest reachable wrench residual. The origin is always feasible.
    const VectorXd x1 = active_set(
        f, VectorXd::Zero(f.nz), [&](const std::vector<int>& W) { return residual_subproblem(f, W); },
        [&](const std::vector<int>& W, const VectorXd& x) {
            const VectorXd grad = f.A.transpose() * (f.A * x - f.w);
            return min_norm_solve(rows_of(f.G, W).transpose(), grad);
        },
        cap, iterations, problem);

    // Pass 2: smallest forces producing that wrench.
    const Wrench reached = f.A * x1;
    const bool exact = (reached - f.w).norm() <= 1e-10 * f.scale;
    const Equality eq = wrench_equality(f, exact ? f.w : reached);
    const auto r = eq.E.rows();
    const VectorXd x2 = active_set(
        f, x1,
        [&](const std::vector<int>& W) {
            MatrixXd M(r + static_cast<Eigen::Index>(W.size()), f.nz);
            VectorXd rhs(M.rows());
            M << eq.E, rows_of(f.G, W);
            rhs << eq.e, entries_of(f.g, W);
            return min_norm_solve(M, rhs);
        },
        [&](const std::vector<int>& W, const VectorXd& x) {
            MatrixXd M(f.nz, r + static_cast<Eigen::Index>(W.size()));
            M << eq.E.transpose(), rows_of(f.G, W).transpose();
            return VectorXd(min_norm_solve(M, x).tail(static_cast<Eigen::Index>(W.size())));
        },
        cap, iterations, problem);

    return assemble(problem, f, x2, iterations);
}

StanceSolution enumerate_oracle(const StanceProblem& problem) {
    const int count = inequality_count(problem);
    require(count <= 20, "enumerate_oracle: " + std::to_string(count) + " inequality constraints exceed 20");
    const Formulation f = formulate(problem);

    // Distinct affine sets each foot can be pinned to. A set on which the
    // remaining constraints force a further equality (two opposite rows) or
    // admit no point is dropped: its feasible part lies inside the tighter set,
    // which then has the same optimum and is enumerated anyway.
    struct Pattern {
        VectorXd x0;
        MatrixXd N;
        MatrixXd AN;  // wrench map restricted to the set
        Wrench Ax0;
    };
    std::vector<int> feet;
    std::vector<std::vector<Pattern>> patterns;
    for (std::size_t i = 0; i < problem.feet.size(); ++i) {
        if (f.offset[i] < 0) continue;
        const LocalConstraints& lc = f.local[i];
        const auto k = static_cast<int>(lc.rows.rows());
        const MatrixXd Ai = f.A.middleCols(f.offset[i], f.dim[i]);
        std::vector<Pattern> found;
        for (int mask = 0; mask < (1 << k); ++mask) {
            std::vector<int> idx, rest;
            for (int b = 0; b < k; ++b) ((mask & (1 << b)) ? idx : rest).push_back(b);
            Pattern pat;
            if (!affine_set(rows_of(lc.rows, idx), entries_of(lc.rhs, idx), f.dim[i], pat.x0, pat.N)) continue;
            const MatrixXd R = rows_of(lc.rows, rest) * pat.N;
            const VectorXd h = entries_of(lc.rhs, rest) - rows_of(lc.rows, rest) * pat.x0;
            bool collapses = false;
            for (Eigen::Index a = 0; a < R.rows() && !collapses; ++a) {
                if (R.row(a).norm() <= 1e-12 && h(a) > 1e-12 * f.scale) collapses = true;
                for (Eigen::Index b = a + 1; b < R.rows() && !collapses; ++b) {
                    if (R.cols() > 0 && (R.row(a) + R.row(b)).norm() <= 1e-12 && R.row(a).norm() > 1e-12 &&
                        h(a) + h(b) >= -1e-12 * f.scale) {
                        collapses = true;
                    }
                }
            }
            if (collapses) continue;
            const MatrixXd P = pat.N * pat.N.transpose();
            const bool seen = std::any_of(found.begin(), found.end(), [&](const Pattern& q) {
                return q.N.cols() == pat.N.cols() && (q.N * q.N.transpose() - P).norm() <= 1e-12 &&
                       (q.x0 - pat.x0).norm() <= 1e-12 * f.scale;
            });
            if (seen) continue;
            pat.AN = Ai * pat.N;
            pat.Ax0 = Ai * pat.x0;
            found.push_back(std::move(pat));
        }
        feet.push_back(static_cast<int>(i));
        patterns.push_back(std::move(found));
    }

    const double feas_tol = 1e-9 * f.scale;
    const double res_tol = 1e-9 * f.scale;
    double best_res = std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    VectorXd best = VectorXd::Zero(f.nz);
    int evaluated = 0;

    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod;
    MatrixXd M;
    VectorXd x(f.nz);
    std::vector<std::size_t> choice(feet.size(), 0);
    while (true) {
        int cols = 0;
        Wrench rhs = f.w;
        for (std::size_t j = 0; j < feet.size(); ++j) {
            const Pattern& pat = patterns[j][choice[j]];
            cols += static_cast<int>(pat.N.cols());
            rhs -= pat.Ax0;
        }
        M.resize(6, cols);
        int c = 0;
        for (std::size_t j = 0; j < feet.size(); ++j) {
            const Pattern& pat = patterns[j][choice[j]];
            M.middleCols(c, pat.AN.cols()) = pat.AN;
            c += static_cast<int>(pat.AN.cols());
        }
        VectorXd z = VectorXd::Zero(cols);
        if (cols > 0) {
            cod.setThreshold(kRankThreshold);
            cod.compute(M);
            z = cod.solve(rhs);
        }
        c = 0;
        for (std::size_t j = 0; j < feet.size(); ++j) {
            const Pattern& pat = patterns[j][choice[j]];
            const int off = f.offset[static_cast<std::size_t>(feet[j])];
            x.segment(off, pat.x0.size()) = pat.x0 + pat.N * z.segment(c, pat.N.cols());
            c += static_cast<int>(pat.N.cols());
        }
        ++evaluated;
        if (((f.G * x - f.g).array() >= -feas_tol).all()) {
            const double res = (f.A * x - f.w).norm();
            const double obj = x.squaredNorm();
            if (res < best_res - res_tol || (res <= best_res + res_tol && obj < best_obj)) {
                best_res = std::min(best_res, res);
                best_obj = obj;
                best = x;
            }
        }
        std::size_t j = 0;
        while (j < feet.size() && ++choice[j] == patterns[j].size()) choice[j++] = 0;
        if (j == feet.size()) break;
    }
    return assemble(problem, f, best, evaluated);
}

Wrench suspension_wrench(const VirtualSuspension& s, const BodyState& body) {
    for (const Vec3* gain : {&s.linear_stiffness, &s.linear_damping, &s.angular_stiffness, &s.angular_damping}) {
        require(finite(*gain) && (gain->array() >= 0.0).all(), "suspension gains must be non-negative");
    }
    require(finite(body.position) && finite(body.rpy) && finite(body.velocity) &&
                finite(body.angular_velocity) && finite(s.setpoint_position) && finite(s.setpoint_rpy),
            "body state must be finite");
    const double limit = std::numbers::pi / 2.0;
    require((body.rpy.array().abs() < limit).all() && (s.setpoint_rpy.array().abs() < limit).all(),
            "roll, pitch and yaw must stay below pi/2 in magnitude");
    Wrench w;
    w.head<3>() = s.linear_stiffness.cwiseProduct(s.setpoint_position - body.position) -
                  s.linear_damping.cwiseProduct(body.velocity);
    w.tail<3>() = s.angular_stiffness.cwiseProduct(s.setpoint_rpy - body.rpy) -
                  s.angular_damping.cwiseProduct(body.angular_velocity);
    return w;
}

}  // namespace sea
