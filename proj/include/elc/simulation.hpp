#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "elc/controller.hpp"
#include "elc/dynamics.hpp"
#include "elc/feasibility.hpp"
#include "elc/reference.hpp"

namespace elc {

enum class ControllerKind { Proposed, Baseline };
enum class AssumptionGate { Enforce, Warn };

struct SimConfig {
    TwoLinkParams model;
    ControllerConfig controller;
    ConstraintSpec constraints;
    ReferenceBounds ref_bounds;
    ReferenceSignal reference;
    DisturbanceProfile disturbance = DisturbanceProfile::none();
    double t_end = 300.0;
    double dt = 1e-3;
    int decimation = 10;
    std::optional<Vec2> q0;   // default: q_d(0)
    std::optional<Vec2> dq0;  // default: dq_d(0)
    Vec5 theta_hat0 = Vec5::Zero();
    AssumptionGate gate = AssumptionGate::Enforce;
    bool zoh = false;
    Mat5 Gamma_c = 20.0 * Mat5::Identity();
};

struct LogRow {
    double t;
    Vec2 q, dq, q_d, dq_d, e, de, r;
    Vec5 theta_hat;
    Vec2 u, tau, delta_tau, d;
    double V1, V;  // NaN outside the barrier domain (baseline runs)
};

struct SimEvent {
    double t;
    std::string kind;
    std::string detail;
};

struct SimLog {
    std::vector<LogRow> rows;
    std::vector<SimEvent> events;
};

struct Metrics {
    double max_q = 0.0, max_dq = 0.0, max_tau = 0.0, max_u = 0.0;
    double max_e = 0.0, max_de = 0.0, max_r = 0.0, max_theta_hat = 0.0, max_d = 0.0;
    double rms_e = 0.0, rms_de = 0.0;
    bool position_violation = false;
    bool velocity_violation = false;
    bool input_violation = false;
    bool filtered_error_violation = false;
    bool barrier_violation = false;
    double t_position = -1.0, t_velocity = -1.0, t_input = -1.0, t_filtered = -1.0,
           t_barrier = -1.0;

    bool any_violation() const {
        return position_violation || velocity_violation || input_violation ||
               filtered_error_violation || barrier_violation;
    }
};

struct AssumptionItem {
    std::string name;
    bool pass = false;
    bool hard = true;  // hard items gate the run; soft items only warn
    double measured = 0.0;
    double limit = 0.0;
    std::string note;
};

struct AssumptionReport {
    std::vector<AssumptionItem> items;
    FeasibilityReport feasibility;
    bool ok() const {
        for (const auto& it : items)
            if (it.hard && !it.pass) return false;
        return true;
    }
    bool warnings() const {
        for (const auto& it : items)
            if (!it.hard && !it.pass) return true;
        return false;
    }
};

struct RunResult {
    SimLog log;
    Metrics metrics;
    bool truncated = false;  // barrier violation ended the run early
    std::uint64_t rhs_evals = 0;
};

/// Classical RK4 step; `f` may throw, which propagates.
template <typename Vec, typename F>
Vec rk4_step(F&& f, double t, const Vec& x, double dt) {
    const Vec k1 = f(t, x);
    const Vec k2 = f(t + 0.5 * dt, Vec(x + 0.5 * dt * k1));
    const Vec k3 = f(t + 0.5 * dt, Vec(x + 0.5 * dt * k2));
    const Vec k4 = f(t + dt, Vec(x + dt * k3));
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// x = [q; dq; theta_hat] -> [dq; forward dynamics; adaptation].
/// Throws BarrierDomainError (proposed controller) outside the barrier domain.
StateVec closed_loop_rhs(const SimConfig& cfg, ControllerKind kind, double t, const StateVec& x);

/// Verifies reference bounds, initial-error conditions, the parameter-norm
/// bound, C1 and the gain condition.  Items (b),(d),(e) are hard gates;
/// the reference-bound oracle and the true-parameter check are warnings.
AssumptionReport check_assumptions(const SimConfig& cfg);

/// Fixed-step closed-loop integration with barrier-layer refinement: macro
/// steps at cfg.dt; a step whose committed endpoint leaves the barrier domain
/// (or goes non-finite) is recursively halved.  A violation is declared only
/// when max refinement still commits an out-of-domain state; the log is then
/// truncated at the event.
RunResult run(const SimConfig& cfg, ControllerKind kind);

/// Max/RMS columns and violation flags for a finished log.
Metrics metrics(const SimLog& log, const ConstraintSpec& spec, double kappa);

}  // namespace elc
