#include "elc/reference.hpp"

#include <cmath>

namespace elc {

RefSample reference_eval(const ReferenceSignal& ref, double t) {
    RefSample s;
    for (int i = 0; i < 2; ++i) {
        const double ph = ref.omega[i] * t + ref.phase[i];
        const double A = ref.amplitude[i];
        const double w = ref.omega[i];
        s.q_d[i] = A * std::sin(ph);
        s.dq_d[i] = A * w * std::cos(ph);
        s.ddq_d[i] = -A * w * w * std::sin(ph);
    }
    return s;
}

ReferenceSups reference_bounds_oracle(const ReferenceSignal& ref, double horizon, double dt) {
    ReferenceSups sups;
    const long n = std::lround(horizon / dt);
    for (long i = 0; i <= n; ++i) {
        const RefSample s = reference_eval(ref, i * dt);
        sups.sup_q = std::max(sups.sup_q, s.q_d.norm());
        sups.sup_dq = std::max(sups.sup_dq, s.dq_d.norm());
        sups.sup_ddq = std::max(sups.sup_ddq, s.ddq_d.norm());
    }
    return sups;
}

DisturbanceProfile DisturbanceProfile::none() { return DisturbanceProfile{}; }

DisturbanceProfile DisturbanceProfile::staged() {
    DisturbanceProfile p;
    p.segments = {{0.0, 100.0, 0.0}, {100.0, 200.0, 3.0}, {200.0, 300.0, 5.0}};
    return p;
}

DisturbanceProfile DisturbanceProfile::persistent(double amplitude) {
    DisturbanceProfile p;
    p.segments = {{0.0, std::numeric_limits<double>::infinity(), amplitude}};
    return p;
}

double DisturbanceProfile::max_amplitude() const {
    double m = 0.0;
    for (const auto& s : segments) m = std::max(m, std::abs(s.amplitude));
    return m;
}

Vec2 disturbance_eval(const DisturbanceProfile& profile, double t) {
    if (profile.segments.empty()) return Vec2::Zero();
    const DisturbanceSegment* seg = nullptr;
    for (const auto& s : profile.segments) {
        if (t >= s.t_start && t < s.t_end) {
            seg = &s;
            break;
        }
    }
    // the last segment persists past its end time
    if (!seg && t >= profile.segments.back().t_start) seg = &profile.segments.back();
    if (!seg || seg->amplitude == 0.0) return Vec2::Zero();
    return Vec2(seg->amplitude * std::sin(t), seg->amplitude * std::cos(t));
}

}  // namespace elc
