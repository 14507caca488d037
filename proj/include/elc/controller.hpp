#pragma once

#include "elc/dynamics.hpp"
#include "elc/types.hpp"

namespace elc {

/**
 * Gains and bounds of the saturated adaptive controller.
 *
 * theta_bar is the parameter-norm bound used by the feasibility arithmetic;
 * proj_radius is the radius of the projection ball for the estimate (defaults
 * to theta_bar).  kappa is the filtered-error bound E_V - alpha*E_Q and
 * kappa_m = kappa*sqrt(m_bar).
 */
struct ControllerConfig {
    Mat2 K1 = Mat2::Identity();
    double alpha = 0.5;
    Mat5 Gamma = Mat5::Identity();
    double theta_bar = 6.2;
    double tau_bar = 30.0;
    double kappa = 0.043;
    double m_bar = 4.05;
    double proj_eps = 0.05;
    double proj_radius = 0.0;        // 0 => use theta_bar
    double den_floor_rel = 1e-9;     // adaptation denominator floor, relative to kappa_m^2

    double radius() const { return proj_radius > 0.0 ? proj_radius : theta_bar; }
    double kappa_m() const { return kappa * std::sqrt(m_bar); }
    double kappa_m_sq() const { return kappa * kappa * m_bar; }
};

struct ControlOutput {
    Vec2 e;
    Vec2 de;
    Vec2 r;
    Mat25 Y;
    Vec2 u;
    Vec2 tau;
    Vec2 delta_tau;
};

/// One sample of the reference trajectory.
struct RefSample {
    Vec2 q_d;
    Vec2 dq_d;
    Vec2 ddq_d;
};

/// r = de + alpha * e
Vec2 filtered_error(const Vec2& e, const Vec2& de, double alpha);

/// u = -Y*theta_hat - K1*r
Vec2 auxiliary_control(const Mat25& Y, const Vec5& theta_hat, const Mat2& K1, const Vec2& r);

/// Norm saturation: pass-through for ||u|| <= tau_bar, else scaled to the boundary.
Vec2 saturate(const Vec2& u, double tau_bar);

/// V1 = 0.5 log(kappa_m^2 / (kappa_m^2 - m_bar ||r||^2)).  Throws BarrierDomainError
/// outside the barrier domain.
double blf_value(const Vec2& r, double kappa_m, double m_bar);

/// V = V1 + 0.5 theta_tilde^T Gamma^{-1} theta_tilde (diagnostic).
double lyapunov_value(const Vec2& r, const Vec5& theta_tilde, const Mat5& Gamma, double kappa_m,
                      double m_bar);

/// Smooth projection with boundary function f = (||th||^2 - radius^2)/(eps*radius^2).
/// Keeps the flow of theta_hat inside ||th|| <= radius*sqrt(1+eps).
Vec5 projection(const Vec5& theta_hat, const Vec5& y, double radius, double eps);

/// d(theta_hat)/dt = proj(Gamma Y^T r / max(kappa_m^2 - m_bar ||r||^2, floor)).
/// Sets *floor_hit when the denominator floor activates.
Vec5 adaptation_rhs(const Mat25& Y, const Vec2& r, const ControllerConfig& cc,
                    const Vec5& theta_hat, bool* floor_hit = nullptr);

/// e, de, r, Y, u, tau, delta_tau in one pass; throws BarrierDomainError when
/// the filtered error has left the barrier domain.
ControlOutput control_pipeline(const TwoLinkParams& model, const ControllerConfig& cc,
                               const JointState& state, const RefSample& ref,
                               const Vec5& theta_hat);

/// Classical robust adaptive law: same formula as auxiliary_control, no saturation.
Vec2 baseline_control(const Mat25& Y, const Vec5& theta_hat, const Mat2& K1, const Vec2& r);

/// d(theta_hat)/dt = proj(Gamma_c Y^T r); no barrier denominator.
Vec5 baseline_adaptation_rhs(const Mat25& Y, const Vec2& r, const Mat5& Gamma_c,
                             const Vec5& theta_hat, double radius, double eps);

}  // namespace elc
