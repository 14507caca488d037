#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace elc {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Mat25 = Eigen::Matrix<double, 2, 5>;
using StateVec = Eigen::Matrix<double, 9, 1>;  // [q; dq; theta_hat]

struct SingularInertiaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveDefiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when the filtered error leaves the barrier domain m_bar*||r||^2 < kappa_m^2.
struct BarrierDomainError : std::runtime_error {
    explicit BarrierDomainError(double r_norm_, double kappa_)
        : std::runtime_error("barrier domain violated: ||r|| = " + std::to_string(r_norm_) +
                             " >= kappa = " + std::to_string(kappa_)),
          r_norm(r_norm_), kappa(kappa_) {}
    double r_norm;
    double kappa;
};

struct InfeasibleReferenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GainConditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalInconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoSolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyLogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration / schema problem; `path` points at the offending key.
struct ConfigError : std::runtime_error {
    ConfigError(std::string path_, const std::string& what_)
        : std::runtime_error(path_.empty() ? what_ : path_ + ": " + what_), path(std::move(path_)) {}
    std::string path;
};

}  // namespace elc
