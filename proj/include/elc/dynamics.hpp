#pragma once

#include "elc/types.hpp"

namespace elc {

enum class FrictionModel { Viscous, Constant };

struct JointState {
    Vec2 q;
    Vec2 dq;
};

/**
 * Two-link planar manipulator with inertia parameters p1..p3 (kg m^2) and
 * joint friction coefficients fd1, fd2.  The dynamics are linear in
 * theta = [p1, p2, p3, fd1, fd2].
 */
struct TwoLinkParams {
    double p1 = 3.473;
    double p2 = 0.196;
    double p3 = 0.242;
    double fd1 = 5.3;
    double fd2 = 1.1;
    FrictionModel friction_model = FrictionModel::Viscous;

    Vec5 theta() const {
        Vec5 th;
        th << p1, p2, p3, fd1, fd2;
        return th;
    }
};

/// Certified inertia-matrix bounds: m1 <= lambda(M(q)) <= m2 <= m_bar for all q.
struct ModelBounds {
    double m1 = 0.0;
    double m2 = 0.0;
    double m_bar = 0.0;
};

/// M(q) = [[p1+2 p3 c2, p2+p3 c2], [p2+p3 c2, p2]]
Mat2 mass_matrix(const TwoLinkParams& p, const Vec2& q);

/// Vm(q,dq) = [[-p3 s2 dq2, -p3 s2 (dq1+dq2)], [p3 s2 dq1, 0]]
Mat2 coriolis_matrix(const TwoLinkParams& p, const Vec2& q, const Vec2& dq);

/// Viscous: diag(fd1,fd2)*dq.  Constant: the fixed vector (fd1, fd2).
Vec2 friction(const TwoLinkParams& p, const Vec2& dq);

/// Identically zero for this arm.
Vec2 gravity(const TwoLinkParams& p, const Vec2& q);

/// qdd = M(q)^{-1} (tau + d - Vm dq - Gr - Fd).  Throws SingularInertiaError
/// if cond(M) exceeds 1e12.
Vec2 forward_dynamics(const TwoLinkParams& p, const JointState& s, const Vec2& tau, const Vec2& d);

/// Regressor of Y*theta = M(alpha*de - ddq_d) + Vm(r - dq) - Fd - Gr.
/// Columns follow the ordering [p1, p2, p3, fd1, fd2]; the friction columns
/// depend on the friction model.
Mat25 regressor(const Vec2& q, const Vec2& dq, const Vec2& de, const Vec2& ddq_d, const Vec2& r,
                double alpha, FrictionModel fm = FrictionModel::Viscous);

/// Dense eigenvalue sweep over q2 in [0, 2pi] (10001 points); m_bar = 1.01 * m2.
/// Throws NonPositiveDefiniteError if M is not positive definite on the grid.
ModelBounds inertia_bounds(const TwoLinkParams& p);

/// mu^T (Mdot - 2 Vm) mu with Mdot formed analytically from dM/dq2 * dq2.
double skew_defect(const TwoLinkParams& p, const Vec2& q, const Vec2& dq, const Vec2& mu);

}  // namespace elc
