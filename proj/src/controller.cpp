#include "elc/controller.hpp"

#include <cmath>

namespace elc {

Vec2 filtered_error(const Vec2& e, const Vec2& de, double alpha) { return de + alpha * e; }

Vec2 auxiliary_control(const Mat25& Y, const Vec5& theta_hat, const Mat2& K1, const Vec2& r) {
    return -(Y * theta_hat) - K1 * r;
}

Vec2 saturate(const Vec2& u, double tau_bar) {
    const double n = u.norm();
    if (n <= tau_bar) return u;
    return (tau_bar / n) * u;
}

double blf_value(const Vec2& r, double kappa_m, double m_bar) {
    const double km2 = kappa_m * kappa_m;
    const double den = km2 - m_bar * r.squaredNorm();
    if (den <= 0.0) throw BarrierDomainError(r.norm(), kappa_m / std::sqrt(m_bar));
    return 0.5 * std::log(km2 / den);
}

double lyapunov_value(const Vec2& r, const Vec5& theta_tilde, const Mat5& Gamma, double kappa_m,
                      double m_bar) {
    return blf_value(r, kappa_m, m_bar) +
           0.5 * theta_tilde.dot(Gamma.ldlt().solve(theta_tilde));
}

Vec5 projection(const Vec5& theta_hat, const Vec5& y, double radius, double eps) {
    const double n2 = theta_hat.squaredNorm();
    const double f = (n2 - radius * radius) / (eps * radius * radius);
    if (f <= 0.0) return y;
    // grad f is parallel to theta_hat; only the sign of grad.y matters.
    const double gy = theta_hat.dot(y);
    if (gy <= 0.0) return y;
    return y - (f * gy / n2) * theta_hat;
}

Vec5 adaptation_rhs(const Mat25& Y, const Vec2& r, const ControllerConfig& cc,
                    const Vec5& theta_hat, bool* floor_hit) {
    const double km2 = cc.kappa_m_sq();
    const double floor = cc.den_floor_rel * km2;
    double den = km2 - cc.m_bar * r.squaredNorm();
    if (den < floor) {
        den = floor;
        if (floor_hit) *floor_hit = true;
    }
    const Vec5 drive = cc.Gamma * (Y.transpose() * r) / den;
    return projection(theta_hat, drive, cc.radius(), cc.proj_eps);
}

ControlOutput control_pipeline(const TwoLinkParams& model, const ControllerConfig& cc,
                               const JointState& state, const RefSample& ref,
                               const Vec5& theta_hat) {
    ControlOutput out;
    out.e = state.q - ref.q_d;
    out.de = state.dq - ref.dq_d;
    out.r = filtered_error(out.e, out.de, cc.alpha);
    if (cc.m_bar * out.r.squaredNorm() >= cc.kappa_m_sq())
        throw BarrierDomainError(out.r.norm(), cc.kappa);
    out.Y = regressor(state.q, state.dq, out.de, ref.ddq_d, out.r, cc.alpha,
                      model.friction_model);
    out.u = auxiliary_control(out.Y, theta_hat, cc.K1, out.r);
    out.tau = saturate(out.u, cc.tau_bar);
    out.delta_tau = out.tau - out.u;
    return out;
}

Vec2 baseline_control(const Mat25& Y, const Vec5& theta_hat, const Mat2& K1, const Vec2& r) {
    return auxiliary_control(Y, theta_hat, K1, r);
}

Vec5 baseline_adaptation_rhs(const Mat25& Y, const Vec2& r, const Mat5& Gamma_c,
                             const Vec5& theta_hat, double radius, double eps) {
    return projection(theta_hat, Gamma_c * (Y.transpose() * r), radius, eps);
}

}  // namespace elc
