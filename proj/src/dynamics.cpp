#include "elc/dynamics.hpp"

#include <cmath>

namespace elc {

Mat2 mass_matrix(const TwoLinkParams& p, const Vec2& q) {
    const double c2 = std::cos(q[1]);
    Mat2 M;
    M << p.p1 + 2.0 * p.p3 * c2, p.p2 + p.p3 * c2,
         p.p2 + p.p3 * c2,       p.p2;
    return M;
}

Mat2 coriolis_matrix(const TwoLinkParams& p, const Vec2& q, const Vec2& dq) {
    const double s2 = std::sin(q[1]);
    Mat2 Vm;
    Vm << -p.p3 * s2 * dq[1], -p.p3 * s2 * (dq[0] + dq[1]),
          p.p3 * s2 * dq[0],  0.0;
    return Vm;
}

Vec2 friction(const TwoLinkParams& p, const Vec2& dq) {
    if (p.friction_model == FrictionModel::Viscous) return Vec2(p.fd1 * dq[0], p.fd2 * dq[1]);
    return Vec2(p.fd1, p.fd2);
}

Vec2 gravity(const TwoLinkParams&, const Vec2&) { return Vec2::Zero(); }

namespace {

// Eigenvalues of a symmetric 2x2 matrix, closed form.
std::pair<double, double> sym_eig2(const Mat2& M) {
    const double tr = M(0, 0) + M(1, 1);
    const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

}  // namespace

Vec2 forward_dynamics(const TwoLinkParams& p, const JointState& s, const Vec2& tau,
                      const Vec2& d) {
    const Mat2 M = mass_matrix(p, s.q);
    const auto [lo, hi] = sym_eig2(M);
    if (!(lo > 0.0) || hi / lo > 1e12)
        throw SingularInertiaError("inertia matrix ill-conditioned, cond = " +
                                   std::to_string(lo > 0.0 ? hi / lo : -1.0));
    const Vec2 rhs = tau + d - coriolis_matrix(p, s.q, s.dq) * s.dq - gravity(p, s.q) -
                     friction(p, s.dq);
    // direct 2x2 solve
    const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    return Vec2((M(1, 1) * rhs[0] - M(0, 1) * rhs[1]) / det,
                (-M(1, 0) * rhs[0] + M(0, 0) * rhs[1]) / det);
}

Mat25 regressor(const Vec2& q, const Vec2& dq, const Vec2& de, const Vec2& ddq_d, const Vec2& r,
                double alpha, FrictionModel fm) {
    const double c2 = std::cos(q[1]);
    const double s2 = std::sin(q[1]);
    const Vec2 a = alpha * de - ddq_d;   // multiplies M columns
    const Vec2 b = r - dq;               // multiplies Vm columns
    Mat25 Y = Mat25::Zero();
    Y(0, 0) = a[0];
    Y(0, 1) = a[1];
    Y(0, 2) = 2.0 * c2 * a[0] + c2 * a[1] - s2 * dq[1] * b[0] - s2 * (dq[0] + dq[1]) * b[1];
    Y(1, 1) = a[0] + a[1];
    Y(1, 2) = c2 * a[0] + s2 * dq[0] * b[0];
    if (fm == FrictionModel::Viscous) {
        Y(0, 3) = -dq[0];
        Y(1, 4) = -dq[1];
    } else {
        Y(0, 3) = -1.0;
        Y(1, 4) = -1.0;
    }
    return Y;
}

ModelBounds inertia_bounds(const TwoLinkParams& p) {
    constexpr int kGrid = 10001;
    double m1 = std::numeric_limits<double>::infinity();
    double m2 = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        const double q2 = 2.0 * M_PI * i / (kGrid - 1);
        const auto [lo, hi] = sym_eig2(mass_matrix(p, Vec2(0.0, q2)));
        if (lo <= 0.0)
            throw NonPositiveDefiniteError("inertia matrix not positive definite at q2 = " +
                                           std::to_string(q2));
        m1 = std::min(m1, lo);
        m2 = std::max(m2, hi);
    }
    return ModelBounds{m1, m2, m2 * 1.01};
}

double skew_defect(const TwoLinkParams& p, const Vec2& q, const Vec2& dq, const Vec2& mu) {
    const double s2 = std::sin(q[1]);
    Mat2 Mdot;
    Mdot << -2.0 * p.p3 * s2, -p.p3 * s2,
            -p.p3 * s2,       0.0;
    Mdot *= dq[1];
    const Mat2 S = Mdot - 2.0 * coriolis_matrix(p, q, dq);
    return mu.dot(S * mu);
}

}  // namespace elc
