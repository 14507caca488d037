#pragma once

#include <optional>
#include <string>

#include "elc/simulation.hpp"

namespace elc {

/// Published reference values printed side by side with computed ones
/// (`--paper-values`).
struct PublishedValues {
    std::optional<double> tau_min;
    std::optional<double> kappa;
    std::optional<double> alpha_max;
    bool any() const { return tau_min || kappa || alpha_max; }
};

struct SweepSettings {
    SweepCase sweep_case = SweepCase::QVsV;
    AxisRange axis1;
    AxisRange axis2;
};

/// Fully resolved configuration: simulation setup plus CLI-level extras.
struct AppConfig {
    SimConfig sim;
    GainSettings gains;  // derived from sim.controller (K1, alpha, theta_bar)
    PublishedValues published;
    std::optional<SweepSettings> sweep;
    std::string source_path;
};

/// Parse and validate a config file (or a manifest with a "config" object).
/// Unknown keys are rejected; invariant violations throw ConfigError with the
/// offending key path.
AppConfig parse_config(const std::string& path);

/// Parse from JSON text (same contract as parse_config).
AppConfig parse_config_text(const std::string& json_text, const std::string& origin = "<inline>");

/// Resolved snapshot with every field explicit; parsing it reproduces the run.
std::string config_snapshot(const AppConfig& cfg);

}  // namespace elc
