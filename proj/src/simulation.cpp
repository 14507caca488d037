#include "elc/simulation.hpp"

#include <cmath>

namespace elc {

namespace {

struct PipelineAux {
    ControlOutput out;
    Vec2 d;
};

// Shared between closed_loop_rhs and the logger so both see identical signals.
PipelineAux eval_controller(const SimConfig& cfg, ControllerKind kind, double t,
                            const StateVec& x) {
    PipelineAux aux;
    const JointState state{x.head<2>(), x.segment<2>(2)};
    const Vec5 th = x.tail<5>();
    const RefSample ref = reference_eval(cfg.reference, t);
    if (kind == ControllerKind::Proposed) {
        aux.out = control_pipeline(cfg.model, cfg.controller, state, ref, th);
    } else {
        aux.out.e = state.q - ref.q_d;
        aux.out.de = state.dq - ref.dq_d;
        aux.out.r = filtered_error(aux.out.e, aux.out.de, cfg.controller.alpha);
        aux.out.Y = regressor(state.q, state.dq, aux.out.de, ref.ddq_d, aux.out.r,
                              cfg.controller.alpha, cfg.model.friction_model);
        aux.out.u = baseline_control(aux.out.Y, th, cfg.controller.K1, aux.out.r);
        aux.out.tau = aux.out.u;  // no saturation
        aux.out.delta_tau = Vec2::Zero();
    }
    aux.d = disturbance_eval(cfg.disturbance, t);
    return aux;
}

}  // namespace

StateVec closed_loop_rhs(const SimConfig& cfg, ControllerKind kind, double t, const StateVec& x) {
    const PipelineAux aux = eval_controller(cfg, kind, t, x);
    const JointState state{x.head<2>(), x.segment<2>(2)};
    const Vec5 th = x.tail<5>();
    const Vec2 ddq = forward_dynamics(cfg.model, state, aux.out.tau, aux.d);
    Vec5 dth;
    if (kind == ControllerKind::Proposed) {
        dth = adaptation_rhs(aux.out.Y, aux.out.r, cfg.controller, th);
    } else {
        dth = baseline_adaptation_rhs(aux.out.Y, aux.out.r, cfg.Gamma_c, th,
                                      cfg.controller.radius(), cfg.controller.proj_eps);
    }
    StateVec dx;
    dx << state.dq, ddq, dth;
    return dx;
}

AssumptionReport check_assumptions(const SimConfig& cfg) {
    AssumptionReport rep;
    const auto& cc = cfg.controller;

    const ReferenceSups sups = reference_bounds_oracle(cfg.reference, cfg.t_end, cfg.dt);
    rep.items.push_back({"reference position bound (sup||q_d|| <= Qd_bar)",
                         sups.sup_q <= cfg.ref_bounds.Qd_bar, false, sups.sup_q,
                         cfg.ref_bounds.Qd_bar, "declared bound vs numeric supremum"});
    rep.items.push_back({"reference velocity bound (sup||dq_d|| <= Vd_bar)",
                         sups.sup_dq <= cfg.ref_bounds.Vd_bar, false, sups.sup_dq,
                         cfg.ref_bounds.Vd_bar, "declared bound vs numeric supremum"});
    rep.items.push_back({"reference acceleration bound (sup||ddq_d|| <= alpha3)",
                         sups.sup_ddq <= cfg.ref_bounds.alpha3, false, sups.sup_ddq,
                         cfg.ref_bounds.alpha3, "declared bound vs numeric supremum"});

    const RefSample r0 = reference_eval(cfg.reference, 0.0);
    const Vec2 q0 = cfg.q0.value_or(r0.q_d);
    const Vec2 dq0 = cfg.dq0.value_or(r0.dq_d);
    const Vec2 e0 = q0 - r0.q_d;
    const Vec2 de0 = dq0 - r0.dq_d;
    const double E_Q = cfg.constraints.Q_bar - cfg.ref_bounds.Qd_bar;
    const double e0_limit = E_Q - cc.kappa / cc.alpha;
    rep.items.push_back({"initial position error (||e(0)|| <= E_Q - kappa/alpha)",
                         e0.norm() <= e0_limit, true, e0.norm(), e0_limit, ""});
    const Vec2 rr0 = filtered_error(e0, de0, cc.alpha);
    rep.items.push_back({"initial filtered error (||r(0)|| < kappa)", rr0.norm() < cc.kappa, true,
                         rr0.norm(), cc.kappa, ""});

    const double th_norm = cfg.model.theta().norm();
    rep.items.push_back({"parameter norm bound (||theta|| < theta_bar)", th_norm < cc.theta_bar,
                         false, th_norm, cc.theta_bar,
                         "true-parameter diagnostic; only known in simulation"});

    const GainSettings gains{cc.K1, cc.alpha, cc.theta_bar};
    rep.feasibility = check_c1(cfg.constraints, cfg.ref_bounds, gains);
    rep.items.push_back({"feasibility condition C1 (tau_bar > tau_min)", rep.feasibility.feasible,
                         true, cfg.constraints.tau_bar, rep.feasibility.tau_min,
                         rep.feasibility.reason});
    rep.items.push_back({"gain condition (alpha < E_V/E_Q)",
                         cc.alpha < rep.feasibility.alpha_max, true, cc.alpha,
                         rep.feasibility.alpha_max, ""});
    return rep;
}

namespace {

struct Integrator {
    const SimConfig& cfg;
    ControllerKind kind;
    std::uint64_t rhs_evals = 0;
    std::uint64_t substeps = 0;
    int max_depth_seen = 0;

    static constexpr int kMaxDepth = 48;
    static constexpr std::uint64_t kSubstepBudget = 200'000'000;

    StateVec rhs(double t, const StateVec& x) {
        ++rhs_evals;
        return closed_loop_rhs(cfg, kind, t, x);
    }

    bool in_domain(double t, const StateVec& x) const {
        if (!x.allFinite()) return false;
        if (kind == ControllerKind::Baseline) return true;
        const RefSample ref = reference_eval(cfg.reference, t);
        const Vec2 e = x.head<2>() - ref.q_d;
        const Vec2 de = x.segment<2>(2) - ref.dq_d;
        const Vec2 r = filtered_error(e, de, cfg.controller.alpha);
        return cfg.controller.m_bar * r.squaredNorm() < cfg.controller.kappa_m_sq();
    }

    // One macro/sub step; recursively halves when the committed endpoint leaves
    // the barrier domain (or a stage evaluation does).  Throws
    // BarrierDomainError when max refinement still commits out of domain.
    StateVec advance(double t, const StateVec& x, double dt, int depth) {
        ++substeps;
        max_depth_seen = std::max(max_depth_seen, depth);
        if (substeps > kSubstepBudget)
            throw BarrierDomainError(std::numeric_limits<double>::quiet_NaN(),
                                     cfg.controller.kappa);
        bool stage_ok = true;
        StateVec xn = x;
        try {
            auto f = [this](double tt, const StateVec& xx) { return rhs(tt, xx); };
            xn = rk4_step(f, t, x, dt);
        } catch (const BarrierDomainError&) {
            stage_ok = false;  // a stage evaluation grazed the barrier
        }
        if (stage_ok && in_domain(t + dt, xn)) return xn;
        if (depth >= kMaxDepth)
            throw BarrierDomainError(barrier_r_norm(t + dt, xn), cfg.controller.kappa);
        const StateVec xm = advance(t, x, 0.5 * dt, depth + 1);
        return advance(t + 0.5 * dt, xm, 0.5 * dt, depth + 1);
    }

    double barrier_r_norm(double t, const StateVec& x) const {
        const RefSample ref = reference_eval(cfg.reference, t);
        const Vec2 e = x.head<2>() - ref.q_d;
        const Vec2 de = x.segment<2>(2) - ref.dq_d;
        return filtered_error(e, de, cfg.controller.alpha).norm();
    }
};

LogRow make_row(const SimConfig& cfg, ControllerKind kind, double t, const StateVec& x) {
    LogRow row;
    row.t = t;
    row.q = x.head<2>();
    row.dq = x.segment<2>(2);
    row.theta_hat = x.tail<5>();
    const PipelineAux aux = eval_controller(cfg, kind, t, x);
    const RefSample ref = reference_eval(cfg.reference, t);
    row.q_d = ref.q_d;
    row.dq_d = ref.dq_d;
    row.e = aux.out.e;
    row.de = aux.out.de;
    row.r = aux.out.r;
    row.u = aux.out.u;
    row.tau = aux.out.tau;
    row.delta_tau = aux.out.delta_tau;
    row.d = aux.d;
    const double km = cfg.controller.kappa_m();
    const Vec5 theta_tilde = cfg.model.theta() - row.theta_hat;
    try {
        row.V1 = blf_value(row.r, km, cfg.controller.m_bar);
        row.V = row.V1 + 0.5 * theta_tilde.dot(cfg.controller.Gamma.ldlt().solve(theta_tilde));
    } catch (const BarrierDomainError&) {
        row.V1 = std::numeric_limits<double>::quiet_NaN();
        row.V = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

}  // namespace

RunResult run(const SimConfig& cfg, ControllerKind kind) {
    if (cfg.gate == AssumptionGate::Enforce && kind == ControllerKind::Proposed) {
        const AssumptionReport rep = check_assumptions(cfg);
        if (!rep.ok())
            throw GainConditionError("assumption gate failed; rerun with gate=warn to override");
    }

    RunResult res;
    const RefSample r0 = reference_eval(cfg.reference, 0.0);
    StateVec x;
    x << cfg.q0.value_or(r0.q_d), cfg.dq0.value_or(r0.dq_d), cfg.theta_hat0;

    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    const int dec = std::max(cfg.decimation, 1);
    Integrator integ{cfg, kind};

    const auto record_violation = [&](double t_event) {
        res.truncated = true;
        res.log.events.push_back({t_event, "barrier_violation",
                                  "filtered error left the barrier domain, ||r|| >= kappa "
                                  "(substep depth " +
                                      std::to_string(integ.max_depth_seen) + ", substeps " +
                                      std::to_string(integ.substeps) + ")"});
        if (!res.log.rows.empty()) res.metrics = metrics(res.log, cfg.constraints, cfg.controller.kappa);
        res.metrics.barrier_violation = true;
        res.metrics.t_barrier = t_event;
        res.rhs_evals = integ.rhs_evals;
    };

    bool floor_seen = false;
    long i = 0;
    for (; i <= n_steps; ++i) {
        const double t = i * cfg.dt;
        if (!integ.in_domain(t, x)) {
            record_violation(t);
            return res;
        }
        if (i % dec == 0) res.log.rows.push_back(make_row(cfg, kind, t, x));
        if (i == n_steps) break;
        try {
            if (cfg.zoh) {
                // sampled control: torque and adaptation rate held over the step,
                // plant still integrated with RK4 under the held input
                const PipelineAux aux = eval_controller(cfg, kind, t, x);
                const Vec2 tau_held = aux.out.tau;
                const Vec5 th = x.tail<5>();
                const Vec5 dth_held =
                    kind == ControllerKind::Proposed
                        ? adaptation_rhs(aux.out.Y, aux.out.r, cfg.controller, th)
                        : baseline_adaptation_rhs(aux.out.Y, aux.out.r, cfg.Gamma_c, th,
                                                  cfg.controller.radius(), cfg.controller.proj_eps);
                const auto held = [&](double tt, const StateVec& xx) {
                    ++integ.rhs_evals;
                    const JointState st{xx.head<2>(), xx.segment<2>(2)};
                    const Vec2 ddq = forward_dynamics(cfg.model, st, tau_held,
                                                      disturbance_eval(cfg.disturbance, tt));
                    StateVec dx;
                    dx << st.dq, ddq, dth_held;
                    return dx;
                };
                x = rk4_step(held, t, x, cfg.dt);
                if (!integ.in_domain(t + cfg.dt, x))
                    throw BarrierDomainError(integ.barrier_r_norm(t + cfg.dt, x),
                                             cfg.controller.kappa);
            } else {
                x = integ.advance(t, x, cfg.dt, 0);
            }
        } catch (const BarrierDomainError&) {
            record_violation(t + cfg.dt);
            return res;
        }
        // barrier-proximity note: denominator floor activity at committed states
        if (kind == ControllerKind::Proposed && !floor_seen) {
            const RefSample ref = reference_eval(cfg.reference, (i + 1) * cfg.dt);
            const Vec2 rr = filtered_error(Vec2(x.head<2>() - ref.q_d),
                                           Vec2(x.segment<2>(2) - ref.dq_d), cfg.controller.alpha);
            const double den = cfg.controller.kappa_m_sq() - cfg.controller.m_bar * rr.squaredNorm();
            if (den < cfg.controller.den_floor_rel * cfg.controller.kappa_m_sq()) {
                floor_seen = true;
                res.log.events.push_back({(i + 1) * cfg.dt, "barrier_proximity",
                                          "adaptation denominator floor active"});
            }
        }
    }
    if (integ.max_depth_seen > 0)
        res.log.events.push_back({0.0, "barrier_layer_refinement",
                                  "max substep depth " + std::to_string(integ.max_depth_seen) +
                                      ", substeps " + std::to_string(integ.substeps)});
    res.metrics = metrics(res.log, cfg.constraints, cfg.controller.kappa);
    res.rhs_evals = integ.rhs_evals;
    return res;
}

Metrics metrics(const SimLog& log, const ConstraintSpec& spec, double kappa) {
    if (log.rows.empty()) throw EmptyLogError("metrics on empty log");
    Metrics m;
    double sum_e2 = 0.0, sum_de2 = 0.0;
    for (const auto& row : log.rows) {
        const double nq = row.q.norm(), ndq = row.dq.norm(), ntau = row.tau.norm(),
                     nu = row.u.norm(), ne = row.e.norm(), nde = row.de.norm(),
                     nr = row.r.norm(), nth = row.theta_hat.norm(), nd = row.d.norm();
        m.max_q = std::max(m.max_q, nq);
        m.max_dq = std::max(m.max_dq, ndq);
        m.max_tau = std::max(m.max_tau, ntau);
        m.max_u = std::max(m.max_u, nu);
        m.max_e = std::max(m.max_e, ne);
        m.max_de = std::max(m.max_de, nde);
        m.max_r = std::max(m.max_r, nr);
        m.max_theta_hat = std::max(m.max_theta_hat, nth);
        m.max_d = std::max(m.max_d, nd);
        sum_e2 += ne * ne;
        sum_de2 += nde * nde;
        if (nq >= spec.Q_bar && !m.position_violation) {
            m.position_violation = true;
            m.t_position = row.t;
        }
        if (ndq >= spec.V_bar && !m.velocity_violation) {
            m.velocity_violation = true;
            m.t_velocity = row.t;
        }
        if (ntau > spec.tau_bar + 1e-9 && !m.input_violation) {
            m.input_violation = true;
            m.t_input = row.t;
        }
        if (nr >= kappa && !m.filtered_error_violation) {
            m.filtered_error_violation = true;
            m.t_filtered = row.t;
        }
    }
    m.rms_e = std::sqrt(sum_e2 / log.rows.size());
    m.rms_de = std::sqrt(sum_de2 / log.rows.size());
    return m;
}

}  // namespace elc
