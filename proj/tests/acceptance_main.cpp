// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "elc/config.hpp"
#include "elc/simulation.hpp"

using namespace elc;

namespace {

const std::string kConfigDir = ELC_CONFIG_DIR;

std::mt19937 rng(987654321);
double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
Vec2 rvec2(double lo, double hi) { return Vec2(uni(lo, hi), uni(lo, hi)); }
Vec5 rvec5(double lo, double hi) {
    Vec5 v;
    for (int i = 0; i < 5; ++i) v[i] = uni(lo, hi);
    return v;
}

struct Criterion {
    int number;
    std::string name;
    std::function<bool(std::string&)> body;
};

// ---------------------------------------------------------------- criterion 1
bool crit_tracking_run(std::string& detail) {
    const AppConfig cfg = parse_config(kConfigDir + "/paper_sec5.json");
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult res = run(cfg.sim, ControllerKind::Proposed);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Metrics& m = res.metrics;
    const double kappa = cfg.sim.controller.kappa;
    std::ostringstream os;
    os << "max_q=" << m.max_q << " max_dq=" << m.max_dq << " max_tau=" << m.max_tau
       << " max_r=" << m.max_r << " (kappa=" << kappa << ") wall=" << wall << "s";
    bool ok = !res.truncated && m.max_q < 2.5 && m.max_dq < 1.0 && m.max_tau <= 30.0 + 1e-9 &&
              m.max_r < kappa && wall < 60.0;
    if (res.truncated)
        os << "; barrier violation at t=" << m.t_barrier
           << " (disturbance onset exceeds the adaptation impulse budget; see README)";
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 2
bool crit_feasibility_arithmetic(std::string& detail) {
    const AppConfig cfg = parse_config(kConfigDir + "/paper_sec5.json");
    const double theta_bar = 6.2, alpha = 0.5, d_bar = 5.0;
    const double Qd = 2.0, Vd = 0.707, a3 = 0.3;
    const double E_Q = 2.5 - Qd, E_V = 1.0 - Vd;
    const double lmin = 1.0, lmax = 1.5;

    // pre-simplification form, written out independently of the library
    const double direct = theta_bar * (alpha * alpha * E_Q + alpha * E_Q + Vd + a3 + 2.0) + d_bar +
                          (E_V - alpha * E_Q) * (theta_bar * (2.0 * alpha + 3.0) + lmax - lmin);
    // omega form, also from scratch
    const double w2 = lmax + theta_bar * (2.0 * alpha + 3.0) - lmin;
    const double w3 = alpha * (w2 - theta_bar * (alpha + 1.0));
    const double w1 = theta_bar * (Vd + a3 + 2.0) + d_bar - w2 * Vd + w3 * Qd;
    const double via_omegas = w1 + w2 * 1.0 - w3 * 2.5;

    const FeasibilityReport rep = check_c1(cfg.sim.constraints, cfg.sim.ref_bounds, cfg.gains);
    const double published = cfg.published.tau_min.value_or(0.0);
    const double discrepancy = std::abs(rep.tau_min - published) / published;

    std::ostringstream os;
    os << "tau_min=" << rep.tau_min << " (direct " << direct << ", omega-form " << via_omegas
       << "), published " << published << ", discrepancy " << 100.0 * discrepancy << "%";
    detail = os.str();
    return std::abs(direct - via_omegas) < 1e-9 && std::abs(rep.tau_min - direct) < 1e-9 &&
           std::abs(rep.tau_min - 27.0563) < 1e-4 && published == 28.5 && discrepancy <= 0.10;
}

// ---------------------------------------------------------------- criterion 3
bool crit_property_suite(std::string& detail) {
    const TwoLinkParams p;  // viscous benchmark arm
    const ModelBounds b = inertia_bounds(p);
    int fails = 0;

    for (int i = 0; i < 10000; ++i) {
        const Vec2 q = rvec2(-M_PI, M_PI), dq = rvec2(-3, 3), mu = rvec2(-3, 3);
        if (std::abs(skew_defect(p, q, dq, mu)) >= 1e-10) ++fails;
    }
    const int skew_fails = fails;

    fails = 0;
    const Vec5 th = p.theta();
    for (int i = 0; i < 10000; ++i) {
        const Vec2 q = rvec2(-M_PI, M_PI), dq = rvec2(-2, 2), de = rvec2(-2, 2);
        const Vec2 dd = rvec2(-1, 1), r = rvec2(-1, 1);
        const Mat25 Y = regressor(q, dq, de, dd, r, 0.5, p.friction_model);
        const Vec2 direct = mass_matrix(p, q) * (0.5 * de - dd) +
                            coriolis_matrix(p, q, dq) * (r - dq) - friction(p, dq);
        if ((Y * th - direct).norm() >= 1e-9) ++fails;
    }
    const int reg_fails = fails;

    fails = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec2 u = rvec2(-100, 100);
        const double tb = uni(0.1, 50.0);
        const Vec2 t = saturate(u, tb);
        const bool norm_ok = t.norm() <= tb * (1.0 + 4e-16);
        const bool dir_ok =
            std::abs(u[0] * t[1] - u[1] * t[0]) < 1e-12 * std::max(1.0, u.norm() * t.norm());
        if (!norm_ok || !dir_ok) ++fails;
    }
    const int sat_fails = fails;

    // projection containment along integrated trajectories: (a) synthetic
    // bounded drives inside the barrier domain, (b) full closed-loop runs
    fails = 0;
    ControllerConfig cc;
    cc.K1 << 1.5, 0, 0, 1.0;
    cc.Gamma = 10.0 * Mat5::Identity();
    cc.theta_bar = 6.2;
    cc.kappa = 0.043;
    cc.m_bar = b.m_bar;
    const double ball = cc.theta_bar * std::sqrt(1.0 + cc.proj_eps);
    for (int traj = 0; traj < 16; ++traj) {
        Vec5 est = 0.9 * cc.theta_bar * rvec5(-1, 1).normalized();
        Mat25 Y0;
        for (int k = 0; k < 10; ++k) Y0(k / 5, k % 5) = uni(-1, 1);
        Vec2 amp = rvec2(0.1, 1.0);
        amp *= uni(0.1, 0.7) * cc.kappa / amp.norm();  // the law only runs inside ||r|| < kappa
        const double w1 = uni(0.5, 3.0), w2 = uni(0.5, 3.0);
        const double dt = 1e-3;
        for (int i = 0; i < 500; ++i) {
            const auto f = [&](double tt, const Vec5& x) {
                const Vec2 r(amp[0] * std::sin(w1 * tt), amp[1] * std::cos(w2 * tt));
                return adaptation_rhs(Y0, r, cc, x);
            };
            const double t = i * dt;
            const Vec5 k1 = f(t, est), k2 = f(t + dt / 2, est + dt / 2 * k1);
            const Vec5 k3 = f(t + dt / 2, est + dt / 2 * k2), k4 = f(t + dt, est + dt * k3);
            est += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
            if (est.norm() > ball) ++fails;
        }
    }
    {
        AppConfig app = parse_config(kConfigDir + "/smoke_short.json");
        app.sim.t_end = 4.0;
        app.sim.decimation = 1;
        const Vec5 prior = app.sim.theta_hat0;
        for (int traj = 0; traj < 5; ++traj) {
            app.sim.theta_hat0 = prior + 0.3 * rvec5(-1, 1).normalized();
            app.sim.gate = AssumptionGate::Warn;
            const RunResult rr = run(app.sim, ControllerKind::Proposed);
            if (rr.truncated || rr.log.rows.size() != 4001) ++fails;  // must stay healthy
            const double rb =
                app.sim.controller.radius() * std::sqrt(1.0 + app.sim.controller.proj_eps);
            for (const auto& row : rr.log.rows)
                if (row.theta_hat.norm() > rb) ++fails;
        }
    }
    const int proj_fails = fails;

    fails = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec2 q = rvec2(0.0, 2.0 * M_PI), mu = rvec2(-3, 3);
        const double quad = mu.dot(mass_matrix(p, q) * mu);
        if (quad < b.m1 * mu.squaredNorm() - 1e-12 || quad > b.m_bar * mu.squaredNorm() + 1e-12)
            ++fails;
    }
    const int sandwich_fails = fails;

    std::ostringstream os;
    os << "fails out of 10000 each: skew=" << skew_fails << " regressor=" << reg_fails
       << " saturate=" << sat_fails << " projection=" << proj_fails
       << " sandwich=" << sandwich_fails;
    detail = os.str();
    return skew_fails + reg_fails + sat_fails + proj_fails + sandwich_fails == 0;
}

// ---------------------------------------------------------------- criterion 4
bool crit_closed_loop_identity(std::string& detail) {
    const AppConfig app = parse_config(kConfigDir + "/paper_sec5.json");
    const TwoLinkParams model = app.sim.model;
    const ControllerConfig cc = app.sim.controller;
    const ReferenceSignal ref = app.sim.reference;
    double worst = 0.0;
    int checked = 0;
    for (int i = 0; checked < 1000 && i < 100000; ++i) {
        const double t = uni(0.0, 300.0);
        const RefSample s = reference_eval(ref, t);
        const JointState st{s.q_d + 0.02 * rvec2(-1, 1), s.dq_d + 0.01 * rvec2(-1, 1)};
        const Vec2 e = st.q - s.q_d, de = st.dq - s.dq_d;
        if (filtered_error(e, de, cc.alpha).norm() >= 0.95 * cc.kappa) continue;
        ++checked;
        const Vec5 th = rvec5(-6, 6);
        const Vec2 d = rvec2(-5, 5);
        const ControlOutput out = control_pipeline(model, cc, st, s, th);
        const Vec2 qdd = forward_dynamics(model, st, out.tau, d);
        const Vec2 rdot = (qdd - s.ddq_d) + cc.alpha * out.de;
        const Vec2 lhs = mass_matrix(model, st.q) * rdot;
        const Vec2 rhs = out.Y * (model.theta() - th) - cc.K1 * out.r -
                         coriolis_matrix(model, st.q, st.dq) * out.r + out.delta_tau + d;
        worst = std::max(worst, (lhs - rhs).norm());
    }
    std::ostringstream os;
    os << checked << " states, worst residual " << worst;
    detail = os.str();
    return checked == 1000 && worst < 1e-8;
}

// ---------------------------------------------------------------- criterion 5
bool crit_baseline_comparison(std::string& detail) {
    const AppConfig cfg = parse_config(kConfigDir + "/sec5_compare.json");
    const RunResult prop = run(cfg.sim, ControllerKind::Proposed);
    const RunResult base = run(cfg.sim, ControllerKind::Baseline);
    std::ostringstream os;
    os << "baseline max_u=" << base.metrics.max_u
       << (base.metrics.input_violation ? " (input flag set)" : " (<30, no input flag)")
       << "; proposed "
       << (prop.metrics.any_violation() || prop.truncated ? "has flags" : "clean");
    if (prop.truncated) os << " (barrier violation at t=" << prop.metrics.t_barrier << ")";
    detail = os.str();
    const bool baseline_ok = base.metrics.input_violation;
    const bool proposed_ok = !prop.truncated && !prop.metrics.any_violation();
    return baseline_ok && proposed_ok;
}

// ---------------------------------------------------------------- criterion 6
bool crit_region_monotonicity(std::string& detail) {
    const AppConfig app = parse_config(kConfigDir + "/paper_sec5.json");
    const ConstraintSpec spec = app.sim.constraints;
    const ReferenceBounds rb = app.sim.ref_bounds;
    const GainSettings gains = app.gains;
    std::ostringstream os;
    bool ok = true;

    {  // tau vs Q at fixed V: boundary strictly decreasing in Q
        const FeasibilityGrid g = sweep(SweepCase::TauVsQ, spec, rb, gains,
                                        AxisRange{20.0, 40.0, 50}, AxisRange{2.0, 2.49, 50});
        for (int j = 0; j + 1 < g.axis2.count; ++j)
            ok = ok && g.boundary[g.index(0, j + 1)] < g.boundary[g.index(0, j)];
        for (int j = 0; j < g.axis2.count; ++j)
            for (int i = 0; i + 1 < g.axis1.count; ++i)
                if (g.feasible[g.index(i, j)] && !g.feasible[g.index(i + 1, j)]) ok = false;
        os << "tau-q monotone " << (ok ? "yes" : "NO");
    }
    {  // tau vs V at fixed Q: boundary strictly increasing in V
        const FeasibilityGrid g = sweep(SweepCase::TauVsV, spec, rb, gains,
                                        AxisRange{20.0, 40.0, 50}, AxisRange{0.70, 1.19, 50});
        bool mono = true;
        for (int j = 0; j + 1 < g.axis2.count; ++j)
            mono = mono && g.boundary[g.index(0, j + 1)] > g.boundary[g.index(0, j)];
        ok = ok && mono;
        os << "; tau-v monotone " << (mono ? "yes" : "NO");
    }
    {  // Q vs V at fixed tau: boundary non-decreasing; floors recovered
        const AxisRange aQ{2.0, 2.49, 50}, aV{0.70, 1.19, 50};
        const FeasibilityGrid g = sweep(SweepCase::QVsV, spec, rb, gains, aQ, aV);
        bool mono = true;
        for (int j = 0; j + 1 < g.axis2.count; ++j)
            mono = mono && g.boundary[g.index(0, j + 1)] >= g.boundary[g.index(0, j)];
        double minQ = 1e9, minV = 1e9;
        for (int i = 0; i < g.axis1.count; ++i)
            for (int j = 0; j < g.axis2.count; ++j)
                if (g.feasible[g.index(i, j)]) {
                    minQ = std::min(minQ, g.axis1.at(i));
                    minV = std::min(minV, g.axis2.at(j));
                }
        const double stepQ = (aQ.hi - aQ.lo) / (aQ.count - 1);
        const double stepV = (aV.hi - aV.lo) / (aV.count - 1);
        const bool floors =
            minQ - 2.0 <= 2.0 * stepQ + 1e-12 && minV - 0.7071067811865476 <= 2.0 * stepV + 1e-12;
        ok = ok && mono && floors;
        os << "; q-v monotone " << (mono ? "yes" : "NO") << ", floors Q_min=" << minQ
           << " V_min=" << minV << (floors ? " (within grid resolution)" : " (OUT OF RANGE)");
    }
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 7
bool crit_rk4_order(std::string& detail) {
    using V1 = Eigen::Matrix<double, 1, 1>;
    const auto f = [](double, const V1& x) { return V1(-x[0]); };
    const auto err = [&](double dt) {
        V1 x(1.0);
        const long n = std::lround(1.0 / dt);
        for (long i = 0; i < n; ++i) x = rk4_step(f, i * dt, x, dt);
        return std::abs(x[0] - std::exp(-1.0));
    };
    const double e1 = err(0.01), e2 = err(0.005);
    const double order = std::log2(e1 / e2);
    std::ostringstream os;
    os << "observed order " << order;
    detail = os.str();
    return order >= 3.9;
}

// ---------------------------------------------------------------- criterion 8
bool crit_exact_cancellation(std::string& detail) {
    AppConfig cfg = parse_config(kConfigDir + "/paper_sec5.json");
    cfg.sim.disturbance = DisturbanceProfile::none();
    cfg.sim.theta_hat0 = cfg.sim.model.theta();
    cfg.sim.t_end = 10.0;
    const RunResult res = run(cfg.sim, ControllerKind::Proposed);
    std::ostringstream os;
    os << "max tracking error " << res.metrics.max_e << " over 10 s";
    detail = os.str();
    return !res.truncated && res.metrics.max_e < 1e-6;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "benchmark tracking run within all constraint bounds", crit_tracking_run},
        {2, "feasibility arithmetic, two algebraic routes + published value",
         crit_feasibility_arithmetic},
        {3, "randomized property suite (10000 draws each)", crit_property_suite},
        {4, "closed-loop identity through forward dynamics (1000 states)",
         crit_closed_loop_identity},
        {5, "baseline comparison flags (input violation vs clean run)", crit_baseline_comparison},
        {6, "feasibility-region monotonicity and floors (50x50 sweeps)",
         crit_region_monotonicity},
        {7, "integrator convergence order >= 3.9", crit_rk4_order},
        {8, "exact cancellation with true parameters", crit_exact_cancellation},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": " << c.name
                  << " -- " << detail << "\n";
    }
    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed"
                                : "ACCEPTANCE: " + std::to_string(failures) + " criteria failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
