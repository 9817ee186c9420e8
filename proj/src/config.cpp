#include "cylarm/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cylarm {

namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string at_index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

const json& object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path.empty() ? "config" : path, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) known = known || item.key() == key;
        if (!known) fail(join(path, item.key()), "unknown key");
    }
    return j;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(N)) {
        fail(path, "expected an array of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) v[i] = number(j[static_cast<std::size_t>(i)], at_index(path, static_cast<std::size_t>(i)));
    return v;
}

const json& array_value(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

std::string string_value(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) fail(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

template <class T, class Read>
void read_if(const json& obj, const char* key, const std::string& path, T& target, Read read) {
    if (obj.contains(key)) target = read(obj.at(key), join(path, key));
}

auto as_number = [](const json& j, const std::string& p) { return number(j, p); };
auto as_vec3 = [](const json& j, const std::string& p) { return Vec3(fixed_vector<3>(j, p)); };
auto as_vec9 = [](const json& j, const std::string& p) { return NetInput(fixed_vector<kNetInputs>(j, p)); };

void read_manipulator(const json& j, const std::string& path, ManipulatorParams& m) {
    object(j, path, {"m1", "m2", "m3", "l1", "l2", "l3", "I3", "g", "viscous_friction"});
    read_if(j, "m1", path, m.m1, as_number);
    read_if(j, "m2", path, m.m2, as_number);
    read_if(j, "m3", path, m.m3, as_number);
    read_if(j, "l1", path, m.l1, as_number);
    read_if(j, "l2", path, m.l2, as_number);
    read_if(j, "l3", path, m.l3, as_number);
    read_if(j, "I3", path, m.I3, as_number);
    read_if(j, "g", path, m.g, as_number);
    read_if(j, "viscous_friction", path, m.viscous_friction, as_vec3);
}

void read_smc(const json& j, const std::string& path, SmcGains& g) {
    object(j, path, {"lambda", "k", "epsilon", "reaching_sign"});
    read_if(j, "lambda", path, g.lambda, as_vec3);
    read_if(j, "k", path, g.k, as_vec3);
    read_if(j, "epsilon", path, g.epsilon, as_number);
    read_if(j, "reaching_sign", path, g.reaching_sign, integer);
}

void read_pd(const json& j, const std::string& path, PdGains& g) {
    object(j, path, {"kp", "kd"});
    read_if(j, "kp", path, g.kp, as_vec3);
    read_if(j, "kd", path, g.kd, as_vec3);
}

void read_net(const json& j, const std::string& path, NetSettings& n) {
    object(j, path, {"n_centers", "lower", "upper", "centers", "widths", "gamma", "w_max"});
    if (j.contains("n_centers")) n.n_centers = unsigned_integer(j.at("n_centers"), join(path, "n_centers"));
    read_if(j, "lower", path, n.bounds.lower, as_vec9);
    read_if(j, "upper", path, n.bounds.upper, as_vec9);
    if (j.contains("centers")) {
        const std::string p = join(path, "centers");
        n.centers.clear();
        const json& list = array_value(j.at("centers"), p);
        for (std::size_t i = 0; i < list.size(); ++i) n.centers.push_back(as_vec9(list[i], at_index(p, i)));
    }
    if (j.contains("widths")) {
        const std::string p = join(path, "widths");
        n.widths.clear();
        const json& list = array_value(j.at("widths"), p);
        for (std::size_t i = 0; i < list.size(); ++i) n.widths.push_back(number(list[i], at_index(p, i)));
    }
    read_if(j, "gamma", path, n.gamma, as_number);
    read_if(j, "w_max", path, n.w_max, as_number);
}

void read_reference(const json& j, const std::string& path, ReferenceSignal& ref) {
    object(j, path, {"type", "target", "amplitude", "frequency_hz", "phase", "offset", "times", "positions"});
    ReferenceSignal::Kind kind = ref.kind();
    if (j.contains("type")) {
        const std::string type = string_value(j.at("type"), join(path, "type"));
        if (type == "constant") kind = ReferenceSignal::Kind::constant;
        else if (type == "sinusoid") kind = ReferenceSignal::Kind::sinusoid;
        else if (type == "table") kind = ReferenceSignal::Kind::table;
        else fail(join(path, "type"), "expected constant|sinusoid|table, got '" + type + "'");
    }
    try {
        switch (kind) {
            case ReferenceSignal::Kind::constant: {
                Vec3 target = ref.target();
                read_if(j, "target", path, target, as_vec3);
                ref = ReferenceSignal::constant(target);
                break;
            }
            case ReferenceSignal::Kind::sinusoid: {
                Vec3 amplitude = ref.amplitude(), frequency = ref.frequency_hz(), phase = ref.phase(),
                     offset = ref.offset();
                read_if(j, "amplitude", path, amplitude, as_vec3);
                read_if(j, "frequency_hz", path, frequency, as_vec3);
                read_if(j, "phase", path, phase, as_vec3);
                read_if(j, "offset", path, offset, as_vec3);
                ref = ReferenceSignal::sinusoid(amplitude, frequency, phase, offset);
                break;
            }
            case ReferenceSignal::Kind::table: {
                std::vector<double> times = ref.times();
                std::vector<Vec3> positions = ref.positions();
                if (j.contains("times")) {
                    const std::string p = join(path, "times");
                    times.clear();
                    const json& list = array_value(j.at("times"), p);
                    for (std::size_t i = 0; i < list.size(); ++i) times.push_back(number(list[i], at_index(p, i)));
                }
                if (j.contains("positions")) {
                    const std::string p = join(path, "positions");
                    positions.clear();
                    const json& list = array_value(j.at("positions"), p);
                    for (std::size_t i = 0; i < list.size(); ++i) positions.push_back(as_vec3(list[i], at_index(p, i)));
                }
                ref = ReferenceSignal::table(std::move(times), std::move(positions));
                break;
            }
        }
    } catch (const std::invalid_argument& ex) {
        fail(path, ex.what());
    }
}

void read_disturbance(const json& j, const std::string& path, std::optional<DisturbanceProfile>& dist) {
    if (j.is_null()) {
        dist.reset();
        return;
    }
    object(j, path, {"joint", "onset", "magnitude", "shape", "duration"});
    DisturbanceProfile d = dist.value_or(DisturbanceProfile{});
    read_if(j, "joint", path, d.joint, integer);
    read_if(j, "onset", path, d.onset, as_number);
    read_if(j, "magnitude", path, d.magnitude, as_number);
    if (j.contains("shape")) {
        const std::string shape = string_value(j.at("shape"), join(path, "shape"));
        if (shape == "step") d.shape = DisturbanceProfile::Shape::step;
        else if (shape == "pulse") d.shape = DisturbanceProfile::Shape::pulse;
        else fail(join(path, "shape"), "expected step|pulse, got '" + shape + "'");
    }
    read_if(j, "duration", path, d.duration, as_number);
    dist = d;
}

void read_scenario(const json& j, const std::string& path, ScenarioSpec& s) {
    object(j, path, {"reference", "disturbance", "mass_factors", "initial", "horizon", "dt", "plant", "torque_limit"});
    if (j.contains("reference")) read_reference(j.at("reference"), join(path, "reference"), s.reference);
    if (j.contains("disturbance")) read_disturbance(j.at("disturbance"), join(path, "disturbance"), s.disturbance);
    read_if(j, "mass_factors", path, s.mass_factors, as_vec3);
    if (j.contains("initial")) {
        const std::string p = join(path, "initial");
        const json& init = object(j.at("initial"), p, {"q", "qdot"});
        read_if(init, "q", p, s.initial.q, as_vec3);
        read_if(init, "qdot", p, s.initial.qdot, as_vec3);
    }
    read_if(j, "horizon", path, s.horizon, as_number);
    read_if(j, "dt", path, s.dt, as_number);
    if (j.contains("plant")) {
        const std::string p = join(path, "plant");
        try {
            s.plant = plant_model_from_string(string_value(j.at("plant"), p));
        } catch (const std::invalid_argument& ex) {
            fail(p, ex.what());
        }
    }
    if (j.contains("torque_limit")) {
        const json& lim = j.at("torque_limit");
        if (lim.is_null()) s.torque_limit.reset();
        else s.torque_limit = as_vec3(lim, join(path, "torque_limit"));
    }
}

json vec_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

ordered smc_json(const SmcGains& g) {
    ordered out;
    out["lambda"] = vec_json(g.lambda);
    out["k"] = vec_json(g.k);
    out["epsilon"] = g.epsilon;
    out["reaching_sign"] = g.reaching_sign;
    return out;
}

ordered scenario_json(const ScenarioSpec& s) {
    ordered out;
    ordered ref;
    const ReferenceSignal& r = s.reference;
    switch (r.kind()) {
        case ReferenceSignal::Kind::constant:
            ref["type"] = "constant";
            ref["target"] = vec_json(r.target());
            break;
        case ReferenceSignal::Kind::sinusoid:
            ref["type"] = "sinusoid";
            ref["amplitude"] = vec_json(r.amplitude());
            ref["frequency_hz"] = vec_json(r.frequency_hz());
            ref["phase"] = vec_json(r.phase());
            ref["offset"] = vec_json(r.offset());
            break;
        case ReferenceSignal::Kind::table: {
            ref["type"] = "table";
            ref["times"] = r.times();
            json positions = json::array();
            for (const Vec3& p : r.positions()) positions.push_back(vec_json(p));
            ref["positions"] = positions;
            break;
        }
    }
    out["reference"] = ref;
    if (s.disturbance) {
        const DisturbanceProfile& d = *s.disturbance;
        ordered dist;
        dist["joint"] = d.joint;
        dist["onset"] = d.onset;
        dist["magnitude"] = d.magnitude;
        dist["shape"] = d.shape == DisturbanceProfile::Shape::step ? "step" : "pulse";
        dist["duration"] = d.duration;
        out["disturbance"] = dist;
    } else {
        out["disturbance"] = nullptr;
    }
    out["mass_factors"] = vec_json(s.mass_factors);
    out["initial"] = {{"q", vec_json(s.initial.q)}, {"qdot", vec_json(s.initial.qdot)}};
    out["horizon"] = s.horizon;
    out["dt"] = s.dt;
    out["plant"] = to_string(s.plant);
    out["torque_limit"] = s.torque_limit ? vec_json(*s.torque_limit) : json(nullptr);
    return out;
}

}  // namespace

WorkbenchConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("config: invalid JSON: ") + ex.what());
    }

    WorkbenchConfig cfg;
    object(root, "", {"manipulator", "gains", "net", "scenarios", "report", "output_dir", "seed"});
    if (root.contains("manipulator")) read_manipulator(root.at("manipulator"), "manipulator", cfg.manipulator);
    if (root.contains("gains")) {
        const json& gains = object(root.at("gains"), "gains", {"pd", "smc", "asmc-nn"});
        if (gains.contains("pd")) read_pd(gains.at("pd"), "gains.pd", cfg.pd);
        if (gains.contains("smc")) read_smc(gains.at("smc"), "gains.smc", cfg.smc);
        if (gains.contains("asmc-nn")) read_smc(gains.at("asmc-nn"), "gains.asmc-nn", cfg.asmc);
    }
    if (root.contains("net")) read_net(root.at("net"), "net", cfg.net);
    if (root.contains("scenarios")) {
        const json& scenarios = root.at("scenarios");
        if (!scenarios.is_object()) fail("scenarios", "expected an object");
        for (const auto& item : scenarios.items()) {
            const std::string path = "scenarios." + item.key();
            ScenarioSpec* target = nullptr;
            for (auto& s : cfg.scenarios) {
                if (s.name == item.key()) target = &s;
            }
            if (!target) {
                ScenarioSpec fresh;
                fresh.name = item.key();
                cfg.scenarios.push_back(fresh);
                target = &cfg.scenarios.back();
            }
            read_scenario(item.value(), path, *target);
        }
    }
    if (root.contains("report")) {
        const json& rep = object(root.at("report"), "report", {"window_start", "threshold"});
        read_if(rep, "window_start", "report", cfg.report.window_start, as_number);
        if (rep.contains("threshold")) {
            const json& th = rep.at("threshold");
            if (th.is_null()) cfg.report.threshold.reset();
            else cfg.report.threshold = as_vec3(th, "report.threshold");
        }
    }
    if (root.contains("output_dir")) cfg.output_dir = string_value(root.at("output_dir"), "output_dir");
    if (root.contains("seed")) cfg.seed = unsigned_integer(root.at("seed"), "seed");

    cfg.validate();
    return cfg;
}

WorkbenchConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void WorkbenchConfig::validate() const {
    auto wrap = [](const std::string& prefix, auto&& check) {
        try {
            check();
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(prefix + ex.what());
        }
    };
    wrap("", [&] { manipulator.validate(); });
    wrap("gains.pd.", [&] { pd.validate(); });
    wrap("gains.smc.", [&] { smc.validate(); });
    wrap("gains.asmc-nn.", [&] { asmc.validate(); });
    wrap("", [&] { net_config().validate(); });

    std::set<std::string> names;
    for (const auto& s : scenarios) {
        if (s.name.empty()) throw ConfigError("scenarios: empty scenario name");
        if (!names.insert(s.name).second) throw ConfigError("scenarios." + s.name + ": duplicate name");
        wrap("scenarios." + s.name + ".", [&] { s.validate(); });
    }
    if (!(std::isfinite(report.window_start) && report.window_start >= 0)) {
        throw ConfigError("report.window_start: must be >= 0");
    }
    if (report.threshold && !(report.threshold->array() > 0).all()) {
        throw ConfigError("report.threshold: must be > 0");
    }
    if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
}

const ScenarioSpec& WorkbenchConfig::scenario(const std::string& name) const {
    for (const auto& s : scenarios) {
        if (s.name == name) return s;
    }
    std::string valid;
    for (const auto& n : scenario_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown scenario '" + name + "' (valid: " + valid + ")");
}

std::vector<std::string> WorkbenchConfig::scenario_names() const {
    std::vector<std::string> names;
    for (const auto& s : scenarios) names.push_back(s.name);
    return names;
}

NetConfig WorkbenchConfig::net_config() const {
    NetConfig cfg;
    if (net.centers.empty()) {
        cfg = make_net_config(net.bounds, net.n_centers, net.gamma, net.w_max, seed);
        if (!net.widths.empty()) cfg.widths = net.widths;
        return cfg;
    }
    cfg.centers = net.centers;
    cfg.widths = net.widths.empty()
                     ? std::vector<double>(net.centers.size(), default_width(net.bounds, net.centers.size()))
                     : net.widths;
    cfg.gamma = net.gamma;
    cfg.w_max = net.w_max;
    cfg.seed = seed;
    return cfg;
}

ControllerSetup WorkbenchConfig::controller(ControllerKind kind) const {
    ControllerSetup setup;
    setup.kind = kind;
    setup.pd = pd;
    setup.smc = kind == ControllerKind::asmc_nn ? asmc : smc;
    if (kind == ControllerKind::asmc_nn) setup.net = net_config();
    return setup;
}

std::string config_to_json(const WorkbenchConfig& config) {
    ordered root;
    const ManipulatorParams& m = config.manipulator;
    root["manipulator"] = {{"m1", m.m1}, {"m2", m.m2}, {"m3", m.m3}, {"l1", m.l1}, {"l2", m.l2},
                           {"l3", m.l3}, {"I3", m.I3}, {"g", m.g},   {"viscous_friction", vec_json(m.viscous_friction)}};
    ordered gains;
    gains["pd"] = {{"kp", vec_json(config.pd.kp)}, {"kd", vec_json(config.pd.kd)}};
    gains["smc"] = smc_json(config.smc);
    gains["asmc-nn"] = smc_json(config.asmc);
    root["gains"] = gains;

    ordered net;
    net["n_centers"] = config.net.n_centers;
    net["lower"] = vec_json(config.net.bounds.lower);
    net["upper"] = vec_json(config.net.bounds.upper);
    if (!config.net.centers.empty()) {
        json centers = json::array();
        for (const auto& c : config.net.centers) centers.push_back(vec_json(c));
        net["centers"] = centers;
    }
    if (!config.net.widths.empty()) net["widths"] = config.net.widths;
    net["gamma"] = config.net.gamma;
    net["w_max"] = config.net.w_max;
    root["net"] = net;

    ordered scenarios;
    for (const auto& s : config.scenarios) scenarios[s.name] = scenario_json(s);
    root["scenarios"] = scenarios;

    root["report"] = {{"window_start", config.report.window_start},
                      {"threshold", config.report.threshold ? vec_json(*config.report.threshold) : json(nullptr)}};
    root["output_dir"] = config.output_dir;
    root["seed"] = config.seed;
    return root.dump(2) + "\n";
}

}  // namespace cylarm
