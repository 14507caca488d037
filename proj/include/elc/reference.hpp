#pragma once

#include <vector>

#include "elc/controller.hpp"
#include "elc/types.hpp"

namespace elc {

/**
 * Per-joint sinusoid q_d_i(t) = A_i sin(w_i t + phi_i) with exact analytic
 * derivatives.  The default is the two-link benchmark trajectory
 * (0.5 sin t, 2 cos(t/4)).
 */
struct ReferenceSignal {
    Vec2 amplitude{0.5, 2.0};
    Vec2 omega{1.0, 0.25};
    Vec2 phase{0.0, M_PI_2};
};

RefSample reference_eval(const ReferenceSignal& ref, double t);

/// Numeric suprema of ||q_d||, ||dq_d||, ||ddq_d|| over [0, horizon] at step dt.
struct ReferenceSups {
    double sup_q = 0.0;
    double sup_dq = 0.0;
    double sup_ddq = 0.0;
};

ReferenceSups reference_bounds_oracle(const ReferenceSignal& ref, double horizon, double dt);

/// Piecewise disturbance d(t) = amp * (sin t, cos t) on [t_start, t_end);
/// the final segment persists past its end time.
struct DisturbanceSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double amplitude = 0.0;
};

struct DisturbanceProfile {
    std::vector<DisturbanceSegment> segments;

    static DisturbanceProfile none();
    /// 0 until t=100, amplitude 3 on [100,200), amplitude 5 from t=200 on.
    static DisturbanceProfile staged();
    static DisturbanceProfile persistent(double amplitude);

    double max_amplitude() const;
};

Vec2 disturbance_eval(const DisturbanceProfile& profile, double t);

}  // namespace elc
