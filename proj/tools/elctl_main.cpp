#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "elc/config.hpp"
#include "elc/csv.hpp"
#include "elc/simulation.hpp"

namespace fs = std::filesystem;
using namespace elc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitViolation = 3;
constexpr int kExitNumeric = 4;

std::string resolve_out_dir(const std::string& flag_value) {
    if (const char* env = std::getenv("ELCTL_OUT"); env && *env) return env;
    return flag_value;
}

void print_assumptions(const AssumptionReport& rep) {
    std::cout << "assumption report:\n";
    for (const auto& it : rep.items) {
        std::cout << "  [" << (it.pass ? "pass" : (it.hard ? "FAIL" : "warn")) << "] " << it.name
                  << "  (measured " << format_double(it.measured) << ", limit "
                  << format_double(it.limit) << ")";
        if (!it.pass && !it.note.empty()) std::cout << "  -- " << it.note;
        std::cout << "\n";
    }
}

void print_feasibility(const FeasibilityReport& rep, const PublishedValues& pub,
                       bool paper_values) {
    std::cout << "feasibility report:\n"
              << "  E_Q = " << format_double(rep.E_Q) << ", E_V = " << format_double(rep.E_V)
              << "\n"
              << "  alpha = " << format_double(rep.alpha)
              << ", alpha_max = " << format_double(rep.alpha_max)
              << ", kappa = " << format_double(rep.kappa) << "\n"
              << "  omega1 = " << format_double(rep.omega1)
              << ", omega2 = " << format_double(rep.omega2)
              << ", omega3 = " << format_double(rep.omega3) << "\n"
              << "  Psi = " << format_double(rep.Psi) << ", xi = " << format_double(rep.xi) << "\n"
              << "  tau_min = " << format_double(rep.tau_min) << "\n"
              << "  feasible = " << (rep.feasible ? "true" : "false");
    if (!rep.feasible) std::cout << "  (" << rep.reason << ")";
    std::cout << "\n";
    if (paper_values && pub.any()) {
        std::cout << "published reference values (computed vs published):\n";
        if (pub.tau_min)
            std::cout << "  tau_min: " << format_double(rep.tau_min) << " vs "
                      << format_double(*pub.tau_min) << "\n";
        if (pub.kappa)
            std::cout << "  kappa: " << format_double(rep.kappa) << " vs "
                      << format_double(*pub.kappa) << "\n";
        if (pub.alpha_max)
            std::cout << "  alpha_max: " << format_double(rep.alpha_max) << " vs "
                      << format_double(*pub.alpha_max) << "\n";
    }
}

std::vector<std::string> trajectory_header() {
    return {"t",    "q1",   "q2",   "dq1",  "dq2",  "qd1",    "qd2",    "dqd1",  "dqd2",
            "e1",   "e2",   "de1",  "de2",  "r1",   "r2",     "th1",    "th2",   "th3",
            "th4",  "th5",  "u1",   "u2",   "tau1", "tau2",   "dtau1",  "dtau2", "d1",
            "d2",   "V1",   "V",    "norm_q", "norm_dq", "norm_e", "norm_de", "norm_r",
            "norm_u", "norm_tau", "norm_d", "norm_theta"};
}

std::vector<double> trajectory_row(const LogRow& r) {
    return {r.t,
            r.q[0], r.q[1], r.dq[0], r.dq[1],
            r.q_d[0], r.q_d[1], r.dq_d[0], r.dq_d[1],
            r.e[0], r.e[1], r.de[0], r.de[1], r.r[0], r.r[1],
            r.theta_hat[0], r.theta_hat[1], r.theta_hat[2], r.theta_hat[3], r.theta_hat[4],
            r.u[0], r.u[1], r.tau[0], r.tau[1], r.delta_tau[0], r.delta_tau[1],
            r.d[0], r.d[1], r.V1, r.V,
            r.q.norm(), r.dq.norm(), r.e.norm(), r.de.norm(), r.r.norm(),
            r.u.norm(), r.tau.norm(), r.d.norm(), r.theta_hat.norm()};
}

void write_trajectory(const SimLog& log, const fs::path& path) {
    CsvWriter csv(trajectory_header());
    for (const auto& r : log.rows) csv.row(trajectory_row(r));
    csv.write_file(path.string());
}

void write_metrics(const Metrics& m, const fs::path& path) {
    CsvWriter csv({"metric", "value"});
    const auto kv = [&](const std::string& k, double v) { csv.raw_row({k, format_double(v)}); };
    kv("max_q", m.max_q);
    kv("max_dq", m.max_dq);
    kv("max_tau", m.max_tau);
    kv("max_u", m.max_u);
    kv("max_e", m.max_e);
    kv("max_de", m.max_de);
    kv("max_r", m.max_r);
    kv("max_theta_hat", m.max_theta_hat);
    kv("max_d", m.max_d);
    kv("rms_e", m.rms_e);
    kv("rms_de", m.rms_de);
    csv.raw_row({"position_violation", m.position_violation ? "1" : "0"});
    csv.raw_row({"velocity_violation", m.velocity_violation ? "1" : "0"});
    csv.raw_row({"input_violation", m.input_violation ? "1" : "0"});
    csv.raw_row({"filtered_error_violation", m.filtered_error_violation ? "1" : "0"});
    csv.raw_row({"barrier_violation", m.barrier_violation ? "1" : "0"});
    kv("t_position", m.t_position);
    kv("t_velocity", m.t_velocity);
    kv("t_input", m.t_input);
    kv("t_filtered", m.t_filtered);
    kv("t_barrier", m.t_barrier);
    csv.write_file(path.string());
}

void write_manifest(const AppConfig& cfg, const std::string& command,
                    const std::vector<std::string>& artifacts, const fs::path& out_dir,
                    double duration_s, const std::string& extra_key = "",
                    const std::string& extra_value = "") {
    nlohmann::json j;
    j["command"] = command;
    j["config_path"] = cfg.source_path;
    j["config"] = nlohmann::json::parse(config_snapshot(cfg));
    j["output_dir"] = out_dir.string();
    j["artifacts"] = artifacts;
    j["duration_s"] = duration_s;
    if (!extra_key.empty()) j[extra_key] = extra_value;
    std::ofstream f(out_dir / "manifest.json", std::ios::binary);
    f << j.dump(2) << "\n";
}

int cmd_check(const AppConfig& cfg, bool paper_values) {
    const AssumptionReport rep = check_assumptions(cfg.sim);
    print_assumptions(rep);
    print_feasibility(rep.feasibility, cfg.published, paper_values);
    if (!rep.ok()) {
        for (const auto& it : rep.items)
            if (it.hard && !it.pass) {
                std::cout << "gate failed: " << it.name;
                if (!it.note.empty()) std::cout << " (" << it.note << ")";
                std::cout << "\n";
            }
        return kExitInfeasible;
    }
    std::cout << "all gates pass" << (rep.warnings() ? " (with warnings)" : "") << "\n";
    return kExitOk;
}

int cmd_simulate(AppConfig cfg, const std::string& controller, const fs::path& out_dir,
                 bool force, bool zoh) {
    if (zoh) cfg.sim.zoh = true;
    if (force) cfg.sim.gate = AssumptionGate::Warn;
    const ControllerKind kind =
        controller == "baseline" ? ControllerKind::Baseline : ControllerKind::Proposed;
    if (kind == ControllerKind::Proposed && cfg.sim.gate == AssumptionGate::Enforce) {
        const AssumptionReport rep = check_assumptions(cfg.sim);
        if (!rep.ok()) {
            print_assumptions(rep);
            std::cout << "refusing to run: assumption gate failed (use --force to override)\n";
            return kExitInfeasible;
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    RunResult res = run(cfg.sim, kind);
    const double dur = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fs::create_directories(out_dir);
    write_trajectory(res.log, out_dir / "trajectory.csv");
    write_metrics(res.metrics, out_dir / "metrics.csv");
    write_manifest(cfg, "simulate", {"trajectory.csv", "metrics.csv"}, out_dir, dur, "controller",
                   controller);
    std::cout << "simulated " << format_double(res.log.rows.empty() ? 0.0 : res.log.rows.back().t)
              << " s, " << res.log.rows.size() << " rows -> " << (out_dir / "trajectory.csv").string()
              << "\n";
    for (const auto& ev : res.log.events)
        std::cout << "event t=" << format_double(ev.t) << " " << ev.kind << ": " << ev.detail
                  << "\n";
    if (res.truncated) {
        std::cout << "barrier violation at t = " << format_double(res.metrics.t_barrier)
                  << "; log truncated\n";
        return kExitViolation;
    }
    return kExitOk;
}

int cmd_sweep(const AppConfig& cfg, const std::string& case_flag, const std::string& grid_flag,
              const fs::path& out_dir) {
    SweepSettings sw;
    if (cfg.sweep) sw = *cfg.sweep;
    if (!case_flag.empty()) {
        if (case_flag == "tau-q") sw.sweep_case = SweepCase::TauVsQ;
        else if (case_flag == "tau-v") sw.sweep_case = SweepCase::TauVsV;
        else if (case_flag == "q-v") sw.sweep_case = SweepCase::QVsV;
        else {
            std::cerr << "invalid --case (expected tau-q, tau-v or q-v)\n";
            return kExitConfigError;
        }
    }
    if (!grid_flag.empty()) {
        // a0:a1:n,b0:b1:n
        const auto parse_axis = [](const std::string& s, AxisRange& r) {
            const auto c1 = s.find(':');
            const auto c2 = s.find(':', c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos) return false;
            try {
                r.lo = std::stod(s.substr(0, c1));
                r.hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
                r.count = std::stoi(s.substr(c2 + 1));
            } catch (...) {
                return false;
            }
            return r.count >= 2 && r.hi > r.lo;
        };
        const auto comma = grid_flag.find(',');
        if (comma == std::string::npos || !parse_axis(grid_flag.substr(0, comma), sw.axis1) ||
            !parse_axis(grid_flag.substr(comma + 1), sw.axis2)) {
            std::cerr << "malformed --grid (expected a0:a1:n,b0:b1:n with n >= 2)\n";
            return kExitConfigError;
        }
    } else if (!cfg.sweep) {
        std::cerr << "sweep requires --grid (or a sweep section in the config)\n";
        return kExitConfigError;
    }
    if (sw.axis1.count < 2 || sw.axis2.count < 2) {
        std::cerr << "sweep grid not specified\n";
        return kExitConfigError;
    }
    const FeasibilityGrid grid = sweep(sw.sweep_case, cfg.sim.constraints, cfg.sim.ref_bounds,
                                       cfg.gains, sw.axis1, sw.axis2);
    fs::create_directories(out_dir);
    CsvWriter csv({grid.axis1_name, grid.axis2_name, "feasible", "boundary_value"});
    for (int i = 0; i < grid.axis1.count; ++i)
        for (int j = 0; j < grid.axis2.count; ++j)
            csv.row({grid.axis1.at(i), grid.axis2.at(j),
                     static_cast<double>(grid.feasible[grid.index(i, j)]),
                     grid.boundary[grid.index(i, j)]});
    csv.write_file((out_dir / "region.csv").string());
    AppConfig snap = cfg;
    snap.sweep = sw;
    write_manifest(snap, "sweep", {"region.csv"}, out_dir, 0.0);
    std::cout << "wrote " << (out_dir / "region.csv").string() << " ("
              << grid.axis1.count * grid.axis2.count << " points)\n";
    return kExitOk;
}

int cmd_compare(AppConfig cfg, const fs::path& out_dir, bool force) {
    if (force) cfg.sim.gate = AssumptionGate::Warn;
    if (cfg.sim.gate == AssumptionGate::Enforce) {
        const AssumptionReport rep = check_assumptions(cfg.sim);
        if (!rep.ok()) {
            print_assumptions(rep);
            std::cout << "refusing to run: assumption gate failed (use --force to override)\n";
            return kExitInfeasible;
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    RunResult prop = run(cfg.sim, ControllerKind::Proposed);
    RunResult base = run(cfg.sim, ControllerKind::Baseline);
    const double dur = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fs::create_directories(out_dir);

    std::vector<std::string> header = {"t"};
    for (const char* prefix : {"proposed_", "baseline_"})
        for (const char* col : {"e1", "e2", "de1", "de2", "u1", "u2", "tau1", "tau2", "norm_e",
                                "norm_de", "norm_r", "norm_u", "norm_tau"})
            header.push_back(std::string(prefix) + col);
    CsvWriter csv(header);
    const std::size_t n = std::min(prop.log.rows.size(), base.log.rows.size());
    for (std::size_t i = 0; i < n; ++i) {
        const LogRow& a = prop.log.rows[i];
        const LogRow& b = base.log.rows[i];
        std::vector<double> row = {a.t};
        for (const LogRow* r : {&a, &b}) {
            row.insert(row.end(),
                       {r->e[0], r->e[1], r->de[0], r->de[1], r->u[0], r->u[1], r->tau[0],
                        r->tau[1], r->e.norm(), r->de.norm(), r->r.norm(), r->u.norm(),
                        r->tau.norm()});
        }
        csv.row(row);
    }
    csv.write_file((out_dir / "compare.csv").string());

    CsvWriter sum({"controller", "constraint", "violated", "first_violation_t", "max_value",
                   "bound"});
    const auto block = [&](const std::string& name, const Metrics& m) {
        const auto line = [&](const std::string& c, bool v, double tv, double mx, double bd) {
            sum.raw_row({name, c, v ? "1" : "0", format_double(tv), format_double(mx),
                         format_double(bd)});
        };
        line("position", m.position_violation, m.t_position, m.max_q, cfg.sim.constraints.Q_bar);
        line("velocity", m.velocity_violation, m.t_velocity, m.max_dq, cfg.sim.constraints.V_bar);
        line("input", m.input_violation, m.t_input, m.max_tau, cfg.sim.constraints.tau_bar);
        line("filtered_error", m.filtered_error_violation, m.t_filtered, m.max_r,
             cfg.sim.controller.kappa);
        line("barrier", m.barrier_violation, m.t_barrier, m.max_r, cfg.sim.controller.kappa);
    };
    block("proposed", prop.metrics);
    block("baseline", base.metrics);
    sum.write_file((out_dir / "compare_summary.csv").string());
    write_manifest(cfg, "compare", {"compare.csv", "compare_summary.csv"}, out_dir, dur);

    std::cout << "comparison summary:\n"
              << "  proposed: violations " << (prop.metrics.any_violation() ? "present" : "none")
              << " (max_tau " << format_double(prop.metrics.max_tau) << ", max_r "
              << format_double(prop.metrics.max_r) << ")\n"
              << "  baseline: violations " << (base.metrics.any_violation() ? "present" : "none")
              << " (max_u " << format_double(base.metrics.max_u) << ", max_de "
              << format_double(base.metrics.max_de) << ")\n";
    if (prop.truncated) {
        std::cout << "proposed run barrier violation at t = "
                  << format_double(prop.metrics.t_barrier) << "\n";
        return kExitViolation;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained adaptive tracking control for a two-link manipulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag = "out";
    std::string controller = "proposed";
    std::string case_flag;
    std::string grid_flag;
    bool force = false;
    bool zoh = false;
    bool paper_values = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (JSON)")->required();
        sub->add_option("--out", out_flag, "output directory (env ELCTL_OUT overrides)");
    };

    CLI::App* check = app.add_subcommand("check", "verify assumptions and feasibility");
    add_common(check);
    check->add_flag("--paper-values", paper_values,
                    "print published reference values next to computed ones");

    CLI::App* simulate = app.add_subcommand("simulate", "run the closed loop and write CSV logs");
    add_common(simulate);
    simulate->add_option("--controller", controller, "proposed|baseline")
        ->check(CLI::IsMember({"proposed", "baseline"}));
    simulate->add_flag("--force", force, "run even if the assumption gate fails");
    simulate->add_flag("--zoh", zoh, "sampled control held across each step");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "feasibility-region grid scan");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--case", case_flag, "tau-q|tau-v|q-v");
    sweep_cmd->add_option("--grid", grid_flag, "a0:a1:n,b0:b1:n");

    CLI::App* compare = app.add_subcommand("compare", "proposed vs baseline on one timeline");
    add_common(compare);
    compare->add_flag("--force", force, "run even if the assumption gate fails");

    CLI11_PARSE(app, argc, argv);

    AppConfig cfg;
    try {
        cfg = parse_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    const fs::path out_dir = resolve_out_dir(out_flag);
    try {
        if (check->parsed()) return cmd_check(cfg, paper_values);
        if (simulate->parsed()) return cmd_simulate(cfg, controller, out_dir, force, zoh);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, case_flag, grid_flag, out_dir);
        if (compare->parsed()) return cmd_compare(cfg, out_dir, force);
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
