#include "elc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace elc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path, what);
}

void require_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
    }
}

double get_num(const json& obj, const std::string& path, const std::string& key, double dflt,
               bool* present = nullptr) {
    if (!obj.contains(key)) {
        if (present) *present = false;
        return dflt;
    }
    if (present) *present = true;
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key, int dflt) {
    if (!obj.contains(key)) return dflt;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string get_str(const json& obj, const std::string& path, const std::string& key,
                    const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    const auto& v = obj.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

Vec2 get_vec2(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        fail(path, "expected an array of 2 numbers");
    return Vec2(v[0].get<double>(), v[1].get<double>());
}

Vec5 get_vec5(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 5) fail(path, "expected an array of 5 numbers");
    Vec5 out;
    for (int i = 0; i < 5; ++i) {
        if (!v[i].is_number()) fail(path, "expected an array of 5 numbers");
        out[i] = v[i].get<double>();
    }
    return out;
}

Mat2 get_mat2(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) fail(path, "expected a 2x2 array");
    Mat2 out;
    for (int i = 0; i < 2; ++i) {
        if (!v[i].is_array() || v[i].size() != 2) fail(path, "expected a 2x2 array");
        for (int j = 0; j < 2; ++j) {
            if (!v[i][j].is_number()) fail(path, "expected a 2x2 array of numbers");
            out(i, j) = v[i][j].get<double>();
        }
    }
    return out;
}

// Gamma: scalar g (=> g*I5) or a full 5x5 array.
Mat5 get_gamma(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>() * Mat5::Identity();
    if (!v.is_array() || v.size() != 5) fail(path, "expected a scalar or a 5x5 array");
    Mat5 out;
    for (int i = 0; i < 5; ++i) {
        if (!v[i].is_array() || v[i].size() != 5) fail(path, "expected a 5x5 array");
        for (int j = 0; j < 5; ++j) {
            if (!v[i][j].is_number()) fail(path, "expected a 5x5 array of numbers");
            out(i, j) = v[i][j].get<double>();
        }
    }
    return out;
}

bool spd_check(const Mat2& K) {
    if (std::abs(K(0, 1) - K(1, 0)) > 1e-12) return false;
    return K(0, 0) > 0.0 && K(0, 0) * K(1, 1) - K(0, 1) * K(1, 0) > 0.0;
}

AxisRange get_axis(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected [lo, hi, count]");
    AxisRange r;
    r.lo = v[0].get<double>();
    r.hi = v[1].get<double>();
    r.count = v[2].get<int>();
    if (r.count < 2) fail(path, "grid count must be >= 2");
    if (!(r.hi > r.lo)) fail(path, "grid range must satisfy hi > lo");
    return r;
}

}  // namespace

AppConfig parse_config_text(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("JSON parse error: ") + e.what());
    }
    if (root.is_object() && root.contains("config")) root = root.at("config");  // manifest

    require_keys(root, "", {"model", "controller", "constraints", "reference_bounds", "reference",
                            "disturbance", "simulation", "baseline", "published_values", "sweep"});

    AppConfig app;
    SimConfig& sim = app.sim;
    app.source_path = origin;

    // model
    {
        const json m = root.value("model", json::object());
        require_keys(m, "model", {"p1", "p2", "p3", "fd1", "fd2", "friction_model"});
        sim.model.p1 = get_num(m, "model", "p1", 3.473);
        sim.model.p2 = get_num(m, "model", "p2", 0.196);
        sim.model.p3 = get_num(m, "model", "p3", 0.242);
        sim.model.fd1 = get_num(m, "model", "fd1", 5.3);
        sim.model.fd2 = get_num(m, "model", "fd2", 1.1);
        const std::string fm = get_str(m, "model", "friction_model", "viscous");
        if (fm == "viscous")
            sim.model.friction_model = FrictionModel::Viscous;
        else if (fm == "constant")
            sim.model.friction_model = FrictionModel::Constant;
        else
            fail("model.friction_model", "must be \"viscous\" or \"constant\"");
        if (!(sim.model.p1 > 0.0) || !(sim.model.p2 > 0.0))
            fail("model", "inertia parameters must be positive");
    }

    // constraints
    {
        const json c = root.value("constraints", json::object());
        require_keys(c, "constraints", {"Q_bar", "V_bar", "tau_bar", "d_bar"});
        sim.constraints.Q_bar = get_num(c, "constraints", "Q_bar", 2.5);
        sim.constraints.V_bar = get_num(c, "constraints", "V_bar", 1.0);
        sim.constraints.tau_bar = get_num(c, "constraints", "tau_bar", 30.0);
        sim.constraints.d_bar = get_num(c, "constraints", "d_bar", 5.0);
        for (double v : {sim.constraints.Q_bar, sim.constraints.V_bar, sim.constraints.tau_bar,
                         sim.constraints.d_bar})
            if (!(v > 0.0)) fail("constraints", "all constraint bounds must be positive");
    }

    // reference bounds
    {
        const json rb = root.value("reference_bounds", json::object());
        require_keys(rb, "reference_bounds", {"Qd_bar", "Vd_bar", "alpha3"});
        sim.ref_bounds.Qd_bar = get_num(rb, "reference_bounds", "Qd_bar", 2.0);
        sim.ref_bounds.Vd_bar = get_num(rb, "reference_bounds", "Vd_bar", 0.707);
        sim.ref_bounds.alpha3 = get_num(rb, "reference_bounds", "alpha3", 0.3);
        if (!(sim.ref_bounds.Qd_bar < sim.constraints.Q_bar))
            fail("reference_bounds.Qd_bar", "must satisfy Qd_bar < Q_bar");
        if (!(sim.ref_bounds.Vd_bar < sim.constraints.V_bar))
            fail("reference_bounds.Vd_bar", "must satisfy Vd_bar < V_bar");
    }

    // reference signal
    {
        const json r = root.value("reference", json::object());
        require_keys(r, "reference", {"amplitude", "omega", "phase"});
        if (r.contains("amplitude"))
            sim.reference.amplitude = get_vec2(r.at("amplitude"), "reference.amplitude");
        if (r.contains("omega")) sim.reference.omega = get_vec2(r.at("omega"), "reference.omega");
        if (r.contains("phase")) sim.reference.phase = get_vec2(r.at("phase"), "reference.phase");
    }

    // controller
    {
        const json c = root.value("controller", json::object());
        require_keys(c, "controller",
                     {"K1", "alpha", "Gamma", "theta_bar", "proj_eps", "proj_radius",
                      "den_floor_rel", "theta_hat0"});
        auto& cc = sim.controller;
        if (c.contains("K1")) cc.K1 = get_mat2(c.at("K1"), "controller.K1");
        else { cc.K1 << 1.5, 0.0, 0.0, 1.0; }
        cc.alpha = get_num(c, "controller", "alpha", 0.5);
        cc.Gamma = c.contains("Gamma") ? get_gamma(c.at("Gamma"), "controller.Gamma")
                                       : 10.0 * Mat5::Identity();
        cc.theta_bar = get_num(c, "controller", "theta_bar", 6.2);
        cc.proj_eps = get_num(c, "controller", "proj_eps", 0.05);
        cc.proj_radius = get_num(c, "controller", "proj_radius", 0.0);
        cc.den_floor_rel = get_num(c, "controller", "den_floor_rel", 1e-9);
        if (c.contains("theta_hat0"))
            sim.theta_hat0 = get_vec5(c.at("theta_hat0"), "controller.theta_hat0");
        cc.tau_bar = sim.constraints.tau_bar;

        if (!spd_check(cc.K1)) fail("controller.K1", "must be symmetric positive definite");
        if (!(cc.alpha > 0.0)) fail("controller.alpha", "must be positive");
        if (!(cc.theta_bar > 0.0)) fail("controller.theta_bar", "must be positive");
        if (!(cc.proj_eps > 0.0 && cc.proj_eps <= 0.1))
            fail("controller.proj_eps", "must lie in (0, 0.1]");
        if (!(cc.den_floor_rel > 0.0)) fail("controller.den_floor_rel", "must be positive");
        const Eigen::SelfAdjointEigenSolver<Mat5> es(0.5 * (cc.Gamma + cc.Gamma.transpose()));
        if (es.eigenvalues().minCoeff() <= 0.0)
            fail("controller.Gamma", "must be symmetric positive definite");

        const double E_Q = sim.constraints.Q_bar - sim.ref_bounds.Qd_bar;
        const double E_V = sim.constraints.V_bar - sim.ref_bounds.Vd_bar;
        if (!(cc.alpha < E_V / E_Q))
            fail("controller.alpha", "alpha >= E_V/E_Q (gain condition)");
        cc.kappa = E_V - cc.alpha * E_Q;
        cc.m_bar = inertia_bounds(sim.model).m_bar;
    }

    // disturbance
    {
        const json d = root.value("disturbance", json::object());
        require_keys(d, "disturbance", {"type", "amplitude"});
        const std::string type = get_str(d, "disturbance", "type", "none");
        if (type == "none")
            sim.disturbance = DisturbanceProfile::none();
        else if (type == "staged")
            sim.disturbance = DisturbanceProfile::staged();
        else if (type == "persistent")
            sim.disturbance =
                DisturbanceProfile::persistent(get_num(d, "disturbance", "amplitude", 5.0));
        else
            fail("disturbance.type", "must be \"none\", \"staged\" or \"persistent\"");
        if (sim.disturbance.max_amplitude() > sim.constraints.d_bar)
            fail("disturbance", "sup||d|| exceeds d_bar");
    }

    // simulation
    {
        const json s = root.value("simulation", json::object());
        require_keys(s, "simulation",
                     {"t_end", "dt", "decimation", "q0", "dq0", "assumption_gate", "zoh"});
        sim.t_end = get_num(s, "simulation", "t_end", 300.0);
        sim.dt = get_num(s, "simulation", "dt", 1e-3);
        sim.decimation = get_int(s, "simulation", "decimation", 10);
        if (!(sim.dt > 0.0)) fail("simulation.dt", "must be positive");
        if (!(sim.t_end >= sim.dt)) fail("simulation.t_end", "must be >= dt");
        if (sim.decimation < 1) fail("simulation.decimation", "must be >= 1");
        if (s.contains("q0")) sim.q0 = get_vec2(s.at("q0"), "simulation.q0");
        if (s.contains("dq0")) sim.dq0 = get_vec2(s.at("dq0"), "simulation.dq0");
        const std::string gate = get_str(s, "simulation", "assumption_gate", "enforce");
        if (gate == "enforce")
            sim.gate = AssumptionGate::Enforce;
        else if (gate == "warn")
            sim.gate = AssumptionGate::Warn;
        else
            fail("simulation.assumption_gate", "must be \"enforce\" or \"warn\"");
        if (s.contains("zoh")) {
            if (!s.at("zoh").is_boolean()) fail("simulation.zoh", "expected a boolean");
            sim.zoh = s.at("zoh").get<bool>();
        }
    }

    // baseline
    {
        const json b = root.value("baseline", json::object());
        require_keys(b, "baseline", {"Gamma_c"});
        sim.Gamma_c = b.contains("Gamma_c") ? get_gamma(b.at("Gamma_c"), "baseline.Gamma_c")
                                            : 20.0 * Mat5::Identity();
    }

    // published reference values
    {
        const json p = root.value("published_values", json::object());
        require_keys(p, "published_values", {"tau_min", "kappa", "alpha_max"});
        bool present = false;
        double v = get_num(p, "published_values", "tau_min", 0.0, &present);
        if (present) app.published.tau_min = v;
        v = get_num(p, "published_values", "kappa", 0.0, &present);
        if (present) app.published.kappa = v;
        v = get_num(p, "published_values", "alpha_max", 0.0, &present);
        if (present) app.published.alpha_max = v;
    }

    // sweep defaults
    if (root.contains("sweep")) {
        const json s = root.at("sweep");
        require_keys(s, "sweep", {"case", "axis1", "axis2"});
        SweepSettings sw;
        const std::string cs = get_str(s, "sweep", "case", "q-v");
        if (cs == "tau-q") sw.sweep_case = SweepCase::TauVsQ;
        else if (cs == "tau-v") sw.sweep_case = SweepCase::TauVsV;
        else if (cs == "q-v") sw.sweep_case = SweepCase::QVsV;
        else fail("sweep.case", "must be \"tau-q\", \"tau-v\" or \"q-v\"");
        if (!s.contains("axis1") || !s.contains("axis2"))
            fail("sweep", "axis1 and axis2 are required");
        sw.axis1 = get_axis(s.at("axis1"), "sweep.axis1");
        sw.axis2 = get_axis(s.at("axis2"), "sweep.axis2");
        app.sweep = sw;
    }

    app.gains = GainSettings{sim.controller.K1, sim.controller.alpha, sim.controller.theta_bar};
    return app;
}

AppConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    if (ss.str().empty()) fail(path, "empty config file");
    AppConfig cfg = parse_config_text(ss.str(), path);
    cfg.source_path = path;
    return cfg;
}

std::string config_snapshot(const AppConfig& cfg) {
    const SimConfig& sim = cfg.sim;
    json j;
    j["model"] = {{"p1", sim.model.p1},
                  {"p2", sim.model.p2},
                  {"p3", sim.model.p3},
                  {"fd1", sim.model.fd1},
                  {"fd2", sim.model.fd2},
                  {"friction_model",
                   sim.model.friction_model == FrictionModel::Viscous ? "viscous" : "constant"}};
    j["constraints"] = {{"Q_bar", sim.constraints.Q_bar},
                        {"V_bar", sim.constraints.V_bar},
                        {"tau_bar", sim.constraints.tau_bar},
                        {"d_bar", sim.constraints.d_bar}};
    j["reference_bounds"] = {{"Qd_bar", sim.ref_bounds.Qd_bar},
                             {"Vd_bar", sim.ref_bounds.Vd_bar},
                             {"alpha3", sim.ref_bounds.alpha3}};
    j["reference"] = {{"amplitude", {sim.reference.amplitude[0], sim.reference.amplitude[1]}},
                      {"omega", {sim.reference.omega[0], sim.reference.omega[1]}},
                      {"phase", {sim.reference.phase[0], sim.reference.phase[1]}}};
    json K1 = json::array({json::array({sim.controller.K1(0, 0), sim.controller.K1(0, 1)}),
                           json::array({sim.controller.K1(1, 0), sim.controller.K1(1, 1)})});
    json Gam = json::array();
    for (int i = 0; i < 5; ++i) {
        json row = json::array();
        for (int k = 0; k < 5; ++k) row.push_back(sim.controller.Gamma(i, k));
        Gam.push_back(row);
    }
    json th0 = json::array();
    for (int i = 0; i < 5; ++i) th0.push_back(sim.theta_hat0[i]);
    j["controller"] = {{"K1", K1},
                       {"alpha", sim.controller.alpha},
                       {"Gamma", Gam},
                       {"theta_bar", sim.controller.theta_bar},
                       {"proj_eps", sim.controller.proj_eps},
                       {"proj_radius", sim.controller.proj_radius},
                       {"den_floor_rel", sim.controller.den_floor_rel},
                       {"theta_hat0", th0}};
    json dist;
    if (sim.disturbance.segments.empty()) {
        dist = {{"type", "none"}};
    } else if (sim.disturbance.segments.size() == 1 &&
               std::isinf(sim.disturbance.segments[0].t_end)) {
        dist = {{"type", "persistent"}, {"amplitude", sim.disturbance.segments[0].amplitude}};
    } else {
        dist = {{"type", "staged"}};
    }
    j["disturbance"] = dist;
    json s = {{"t_end", sim.t_end},
              {"dt", sim.dt},
              {"decimation", sim.decimation},
              {"assumption_gate", sim.gate == AssumptionGate::Enforce ? "enforce" : "warn"},
              {"zoh", sim.zoh}};
    if (sim.q0) s["q0"] = {(*sim.q0)[0], (*sim.q0)[1]};
    if (sim.dq0) s["dq0"] = {(*sim.dq0)[0], (*sim.dq0)[1]};
    j["simulation"] = s;
    json Gc = json::array();
    for (int i = 0; i < 5; ++i) {
        json row = json::array();
        for (int k = 0; k < 5; ++k) row.push_back(sim.Gamma_c(i, k));
        Gc.push_back(row);
    }
    j["baseline"] = {{"Gamma_c", Gc}};
    json pub = json::object();
    if (cfg.published.tau_min) pub["tau_min"] = *cfg.published.tau_min;
    if (cfg.published.kappa) pub["kappa"] = *cfg.published.kappa;
    if (cfg.published.alpha_max) pub["alpha_max"] = *cfg.published.alpha_max;
    if (!pub.empty()) j["published_values"] = pub;
    if (cfg.sweep) {
        const char* cs = cfg.sweep->sweep_case == SweepCase::TauVsQ   ? "tau-q"
                         : cfg.sweep->sweep_case == SweepCase::TauVsV ? "tau-v"
                                                                      : "q-v";
        j["sweep"] = {{"case", cs},
                      {"axis1", {cfg.sweep->axis1.lo, cfg.sweep->axis1.hi, cfg.sweep->axis1.count}},
                      {"axis2", {cfg.sweep->axis2.lo, cfg.sweep->axis2.hi, cfg.sweep->axis2.count}}};
    }
    return j.dump(2);
}

}  // namespace elc
