#pragma once

#include <string>
#include <vector>

#include "elc/types.hpp"

namespace elc {

/// User constraints: position / velocity norm bounds, input norm bound, disturbance bound.
struct ConstraintSpec {
    double Q_bar = 2.5;
    double V_bar = 1.0;
    double tau_bar = 30.0;
    double d_bar = 5.0;
};

/// Known bounds on the reference trajectory and its first two derivatives.
struct ReferenceBounds {
    double Qd_bar = 2.0;
    double Vd_bar = 0.707;
    double alpha3 = 0.3;
};

/// Gains entering the feasibility arithmetic.
struct GainSettings {
    Mat2 K1 = Mat2::Identity();
    double alpha = 0.5;
    double theta_bar = 6.2;
};

struct FeasibilityReport {
    double E_Q = 0.0;
    double E_V = 0.0;
    double alpha = 0.0;
    double alpha_max = 0.0;
    double kappa = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double omega3 = 0.0;
    double Psi = 0.0;
    double xi = 0.0;
    double tau_min = 0.0;
    bool feasible = false;
    std::string reason;  // empty when feasible
};

struct Omegas {
    double omega1;
    double omega2;
    double omega3;
};

enum class SweepCase { TauVsQ, TauVsV, QVsV };
enum class Axis { QBar, VBar, TauBar };

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;
    double at(int i) const { return count < 2 ? lo : lo + (hi - lo) * i / (count - 1); }
};

/// Row-major feasibility grid over (axis1, axis2); boundary holds the solved
/// axis1 bound per point (clamped from below by the axis floor).
struct FeasibilityGrid {
    SweepCase sweep_case = SweepCase::QVsV;
    std::string axis1_name;
    std::string axis2_name;
    AxisRange axis1;
    AxisRange axis2;
    std::vector<int> feasible;      // size axis1.count * axis2.count
    std::vector<double> boundary;   // same shape
    int index(int i, int j) const { return i * axis2.count + j; }
};

/// (E_Q, E_V) = (Q_bar - Qd_bar, V_bar - Vd_bar); throws InfeasibleReferenceError
/// if a margin is non-positive.
std::pair<double, double> error_margins(const ConstraintSpec& spec, const ReferenceBounds& rb);

/// Supremum of admissible filter gains: E_V / E_Q.
double alpha_max(double E_Q, double E_V);

/// kappa = E_V - alpha*E_Q; throws GainConditionError if non-positive.
double kappa_of(double E_V, double alpha, double E_Q);

/// The C1 coefficients (lambda extremes taken from the symmetric part of K1).
Omegas omegas(double theta_bar, double alpha, const Mat2& K1, const ReferenceBounds& rb,
              double d_bar);

/// Minimal feasible input bound.  Evaluates the pre-simplification form and the
/// omega form and requires agreement to 1e-9.
double tau_min(double theta_bar, double alpha, const Mat2& K1, const ReferenceBounds& rb,
               double E_Q, double E_V, double d_bar);

/// Full feasibility report; never throws (failures land in report.reason).
FeasibilityReport check_c1(const ConstraintSpec& spec, const ReferenceBounds& rb,
                           const GainSettings& gains);

FeasibilityGrid sweep(SweepCase sweep_case, const ConstraintSpec& fixed, const ReferenceBounds& rb,
                      const GainSettings& gains, const AxisRange& axis1, const AxisRange& axis2);

/// Bisection (tolerance 1e-6) for the smallest feasible value along one axis,
/// the other two held at `spec`.  Throws NoSolutionError when the bracket holds
/// no feasible point.
double min_feasible(Axis axis, const ConstraintSpec& spec, const ReferenceBounds& rb,
                    const GainSettings& gains);

}  // namespace elc
