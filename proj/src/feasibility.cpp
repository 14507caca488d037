#include "elc/feasibility.hpp"

#include <cmath>

namespace elc {

namespace {

std::pair<double, double> k1_eigs(const Mat2& K1) {
    const Mat2 S = 0.5 * (K1 + K1.transpose());
    const double tr = S(0, 0) + S(1, 1);
    const double det = S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

}  // namespace

std::pair<double, double> error_margins(const ConstraintSpec& spec, const ReferenceBounds& rb) {
    const double E_Q = spec.Q_bar - rb.Qd_bar;
    const double E_V = spec.V_bar - rb.Vd_bar;
    if (E_Q <= 0.0)
        throw InfeasibleReferenceError("reference exceeds state constraint: Qd_bar >= Q_bar");
    if (E_V <= 0.0)
        throw InfeasibleReferenceError("reference exceeds state constraint: Vd_bar >= V_bar");
    return {E_Q, E_V};
}

double alpha_max(double E_Q, double E_V) { return E_V / E_Q; }

double kappa_of(double E_V, double alpha, double E_Q) {
    const double kappa = E_V - alpha * E_Q;
    if (kappa <= 0.0)
        throw GainConditionError("gain condition violated: alpha >= E_V/E_Q (kappa <= 0)");
    return kappa;
}

Omegas omegas(double theta_bar, double alpha, const Mat2& K1, const ReferenceBounds& rb,
              double d_bar) {
    const auto [lmin, lmax] = k1_eigs(K1);
    Omegas w;
    w.omega2 = lmax + theta_bar * (2.0 * alpha + 3.0) - lmin;
    w.omega3 = alpha * (w.omega2 - theta_bar * (alpha + 1.0));
    w.omega1 = theta_bar * (rb.Vd_bar + rb.alpha3 + 2.0) + d_bar - w.omega2 * rb.Vd_bar +
               w.omega3 * rb.Qd_bar;
    return w;
}

double tau_min(double theta_bar, double alpha, const Mat2& K1, const ReferenceBounds& rb,
               double E_Q, double E_V, double d_bar) {
    const auto [lmin, lmax] = k1_eigs(K1);
    // pre-simplification form from the stability argument
    const double direct =
        theta_bar * (alpha * alpha * E_Q + alpha * E_Q + rb.Vd_bar + rb.alpha3 + 2.0) + d_bar +
        (E_V - alpha * E_Q) * (theta_bar * (2.0 * alpha + 3.0) + lmax - lmin);
    // omega form: omega1 + omega2 V_bar - omega3 Q_bar
    const Omegas w = omegas(theta_bar, alpha, K1, rb, d_bar);
    const double via_omegas = w.omega1 + w.omega2 * (rb.Vd_bar + E_V) - w.omega3 * (rb.Qd_bar + E_Q);
    if (std::abs(direct - via_omegas) > 1e-9 * std::max(1.0, std::abs(direct)))
        throw InternalInconsistencyError("tau_min forms disagree: " + std::to_string(direct) +
                                         " vs " + std::to_string(via_omegas));
    return direct;
}

FeasibilityReport check_c1(const ConstraintSpec& spec, const ReferenceBounds& rb,
                           const GainSettings& gains) {
    FeasibilityReport rep;
    rep.alpha = gains.alpha;
    rep.E_Q = spec.Q_bar - rb.Qd_bar;
    rep.E_V = spec.V_bar - rb.Vd_bar;
    if (rep.E_Q <= 0.0 || rep.E_V <= 0.0) {
        rep.feasible = false;
        rep.reason = "reference exceeds state constraint";
        rep.alpha_max = rep.kappa = rep.omega1 = rep.omega2 = rep.omega3 = rep.Psi = rep.xi =
            rep.tau_min = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    rep.alpha_max = alpha_max(rep.E_Q, rep.E_V);
    rep.kappa = rep.E_V - gains.alpha * rep.E_Q;
    const auto [lmin, lmax] = k1_eigs(gains.K1);
    const Omegas w = omegas(gains.theta_bar, gains.alpha, gains.K1, rb, spec.d_bar);
    rep.omega1 = w.omega1;
    rep.omega2 = w.omega2;
    rep.omega3 = w.omega3;
    rep.Psi = gains.theta_bar * (2.0 * gains.alpha + 3.0) + lmax;
    rep.xi = gains.theta_bar * (gains.alpha * gains.alpha * rep.E_Q + gains.alpha * rep.E_Q -
                                rep.kappa * (gains.alpha + 1.0) + rb.Vd_bar + rb.alpha3 + 2.0);
    rep.tau_min = tau_min(gains.theta_bar, gains.alpha, gains.K1, rb, rep.E_Q, rep.E_V, spec.d_bar);
    if (!(gains.alpha < rep.alpha_max)) {
        rep.feasible = false;
        rep.reason = "gain condition violated: alpha >= E_V/E_Q";
        return rep;
    }
    if (!(spec.tau_bar > rep.tau_min)) {
        rep.feasible = false;
        rep.reason = "C1: tau_bar " + std::to_string(spec.tau_bar) + " <= tau_min " +
                     std::to_string(rep.tau_min);
        return rep;
    }
    rep.feasible = true;
    return rep;
}

namespace {

// Solved axis-1 bound at a given axis-2 value, clamped from below by the
// Assumption-1 floor of axis 1.
double boundary_value(SweepCase sweep_case, const ConstraintSpec& fixed, const ReferenceBounds& rb,
                      const GainSettings& gains, double axis2_value) {
    const Omegas w = omegas(gains.theta_bar, gains.alpha, gains.K1, rb, fixed.d_bar);
    switch (sweep_case) {
        case SweepCase::TauVsQ:
            // tau = omega1 + omega2 V_fixed - omega3 Q
            return std::max(w.omega1 + w.omega2 * fixed.V_bar - w.omega3 * axis2_value, 0.0);
        case SweepCase::TauVsV:
            return std::max(w.omega1 + w.omega2 * axis2_value - w.omega3 * fixed.Q_bar, 0.0);
        case SweepCase::QVsV:
            // Q = (omega1 + omega2 V - tau_fixed) / omega3, floored at Qd_bar
            return std::max((w.omega1 + w.omega2 * axis2_value - fixed.tau_bar) / w.omega3,
                            rb.Qd_bar);
    }
    return 0.0;
}

ConstraintSpec with_axes(SweepCase sweep_case, const ConstraintSpec& fixed, double a1, double a2) {
    ConstraintSpec s = fixed;
    switch (sweep_case) {
        case SweepCase::TauVsQ: s.tau_bar = a1; s.Q_bar = a2; break;
        case SweepCase::TauVsV: s.tau_bar = a1; s.V_bar = a2; break;
        case SweepCase::QVsV:   s.Q_bar = a1;   s.V_bar = a2; break;
    }
    return s;
}

}  // namespace

FeasibilityGrid sweep(SweepCase sweep_case, const ConstraintSpec& fixed, const ReferenceBounds& rb,
                      const GainSettings& gains, const AxisRange& axis1, const AxisRange& axis2) {
    FeasibilityGrid grid;
    grid.sweep_case = sweep_case;
    grid.axis1 = axis1;
    grid.axis2 = axis2;
    switch (sweep_case) {
        case SweepCase::TauVsQ: grid.axis1_name = "tau_bar"; grid.axis2_name = "Q_bar"; break;
        case SweepCase::TauVsV: grid.axis1_name = "tau_bar"; grid.axis2_name = "V_bar"; break;
        case SweepCase::QVsV:   grid.axis1_name = "Q_bar";   grid.axis2_name = "V_bar"; break;
    }
    grid.feasible.resize(static_cast<std::size_t>(axis1.count) * axis2.count);
    grid.boundary.resize(grid.feasible.size());
    for (int i = 0; i < axis1.count; ++i) {
        for (int j = 0; j < axis2.count; ++j) {
            const ConstraintSpec pt = with_axes(sweep_case, fixed, axis1.at(i), axis2.at(j));
            grid.feasible[grid.index(i, j)] = check_c1(pt, rb, gains).feasible ? 1 : 0;
            grid.boundary[grid.index(i, j)] =
                boundary_value(sweep_case, fixed, rb, gains, axis2.at(j));
        }
    }
    return grid;
}

namespace {

ConstraintSpec with_axis(Axis axis, const ConstraintSpec& spec, double v) {
    ConstraintSpec s = spec;
    switch (axis) {
        case Axis::QBar: s.Q_bar = v; break;
        case Axis::VBar: s.V_bar = v; break;
        case Axis::TauBar: s.tau_bar = v; break;
    }
    return s;
}

double axis_floor(Axis axis, const ReferenceBounds& rb) {
    switch (axis) {
        case Axis::QBar: return rb.Qd_bar;
        case Axis::VBar: return rb.Vd_bar;
        case Axis::TauBar: return 0.0;
    }
    return 0.0;
}

double current_value(Axis axis, const ConstraintSpec& spec) {
    switch (axis) {
        case Axis::QBar: return spec.Q_bar;
        case Axis::VBar: return spec.V_bar;
        case Axis::TauBar: return spec.tau_bar;
    }
    return 0.0;
}

}  // namespace

double min_feasible(Axis axis, const ConstraintSpec& spec, const ReferenceBounds& rb,
                    const GainSettings& gains) {
    const auto feasible_at = [&](double v) {
        return check_c1(with_axis(axis, spec, v), rb, gains).feasible;
    };
    const double floor = axis_floor(axis, rb);
    double lo = floor + 1e-9;
    double hi;
    const double cur = current_value(axis, spec);
    if (feasible_at(cur)) {
        if (feasible_at(lo)) return lo;
        hi = cur;
    } else {
        // scan upward for a feasible bracket end
        lo = cur;
        hi = cur;
        bool found = false;
        for (double v = std::max(cur, floor + 1e-9) * 2.0; v <= 1e3 * std::max(cur, 1.0);
             v *= 2.0) {
            if (feasible_at(v)) {
                hi = v;
                found = true;
                break;
            }
            lo = v;
        }
        if (!found) throw NoSolutionError("no feasible point in the search bracket");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-6; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace elc
