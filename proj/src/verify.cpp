#include "cylarm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cylarm/report.hpp"
#include "number_format.hpp"

namespace cylarm {

namespace {

// Round-trip samples whose inertia condition number exceeds this are not
// considered admissible.
constexpr double kAdmissibleCondition = 1e6;

std::string sci(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 3);
    return std::string(buf, res.ptr);
}

Eigen::MatrixXd random_weights(std::mt19937_64& rng, Eigen::Index rows, double norm) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd W(rows, 3);
    for (Eigen::Index i = 0; i < W.size(); ++i) W.data()[i] = n(rng);
    return W * (norm / W.norm());
}

Vec3 uniform3(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return Vec3(u(rng), u(rng), u(rng));
}

const ScenarioSpec* find_scenario(const WorkbenchConfig& config, const std::string& name) {
    for (const auto& s : config.scenarios) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

}  // namespace

double max_lyapunov_increase(const SimTrace& trace, double from) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
        if (trace.records[i].t < from - 1e-12) continue;
        worst = std::max(worst, trace.records[i + 1].V - trace.records[i].V);
    }
    return worst;
}

CheckResult check_dynamics_round_trip(const ManipulatorParams& params, int samples) {
    CheckResult r{"dynamics_round_trip", false, ""};
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> height(-1.0, 1.0);
    std::uniform_real_distribution<double> reach(0.05, 1.5);
    double worst = 0.0;
    int rejected = 0;
    for (PlantModel model : {PlantModel::paper, PlantModel::reference}) {
        int accepted = 0;
        while (accepted < samples) {
            JointState state;
            state.q = Vec3(angle(rng), height(rng), reach(rng));
            state.qdot = uniform3(rng, -2.0, 2.0);
            const Vec3 qddot = uniform3(rng, -5.0, 5.0);
            const Vec3 f_ext = uniform3(rng, -10.0, 10.0);
            const Mat3 A = model == PlantModel::paper ? inertia_matrix(params, state.q)
                                                      : reference_model_inertia(params, state.q);
            const double det = A.determinant();
            if (!(std::abs(det) > 0.0) || A.norm() * A.inverse().norm() > kAdmissibleCondition) {
                ++rejected;
                continue;
            }
            const Vec3 tau = inverse_dynamics(model, params, state, qddot, f_ext);
            const Vec3 back = forward_dynamics(model, params, state, tau, f_ext);
            worst = std::max(worst, (back - qddot).norm() / std::max(1.0, qddot.norm()));
            ++accepted;
        }
    }
    r.passed = worst <= 1e-8;
    r.detail = "max relative error " + sci(worst) + " over " + std::to_string(2 * samples) + " samples (" +
               std::to_string(rejected) + " ill-conditioned draws skipped)";
    return r;
}

CheckResult check_energy_conservation(const ManipulatorParams& params) {
    CheckResult r{"energy_conservation", false, ""};
    ManipulatorParams p = params;
    p.g = 0.0;
    p.viscous_friction.setZero();
    State6 x;
    x << 0.0, 0.0, 0.5, 1.0, 0.3, 0.2;
    const double dt = 1e-3;
    const auto energy = [&](const State6& s) { return reference_model_energy(p, {s.head<3>(), s.tail<3>()}); };
    const double e0 = energy(x);
    auto f = [&](double, const State6& s) {
        State6 dx;
        dx << s.tail<3>(), reference_model_dynamics(p, {s.head<3>(), s.tail<3>()}, Vec3::Zero(), Vec3::Zero());
        return dx;
    };
    double drift = 0.0;
    for (int i = 0; i < 10000; ++i) {
        x = rk4_step(f, x, i * dt, dt);
        drift = std::max(drift, std::abs(energy(x) - e0) / e0);
    }
    r.passed = drift < 1e-6;
    r.detail = "max relative drift " + sci(drift) + " over 10 s";
    return r;
}

CheckResult check_integrator_order() {
    CheckResult r{"integrator_order", false, ""};
    using V2 = Eigen::Vector2d;
    auto f = [](double, const V2& x) { return V2(x[1], -x[0]); };
    auto local_error = [&](double h) {
        const V2 x = rk4_step(f, V2(1.0, 0.0), 0.0, h);
        return (x - V2(std::cos(h), -std::sin(h))).norm();
    };
    const double ratio = local_error(0.1) / local_error(0.05);
    r.passed = ratio >= 28.0 && ratio <= 36.0;
    r.detail = "one-step error ratio " + sci(ratio) + " (expected near 32)";
    return r;
}

CheckResult check_weight_freeze(const NetConfig& net) {
    CheckResult r{"weight_freeze", false, ""};
    std::mt19937_64 rng(7);
    NetApproximator approx(net);
    approx.set_weights(random_weights(rng, static_cast<Eigen::Index>(net.feature_count()), 0.5 * net.w_max));
    const Eigen::MatrixXd before = approx.weights();
    for (int i = 0; i < 1000; ++i) {
        approx.adapt(uniform3(rng, -2, 2), uniform3(rng, -3, 3), Vec3::Zero(), 1e-3);
    }
    r.passed = approx.weights() == before;
    r.detail = r.passed ? "W bit-identical after 1000 updates with s = 0" : "W changed with s = 0";
    return r;
}

CheckResult check_weight_projection(const NetConfig& net, int steps) {
    CheckResult r{"weight_projection", false, ""};
    std::mt19937_64 rng(11);
    NetApproximator approx(net);
    double worst = 0.0;
    for (int i = 0; i < steps; ++i) {
        approx.adapt(uniform3(rng, -2, 2), uniform3(rng, -3, 3), uniform3(rng, -50, 50), 0.1);
        worst = std::max(worst, approx.weights().norm());
    }
    r.passed = worst <= net.w_max;
    r.detail = "max ||W||_F " + sci(worst) + " vs w_max " + sci(net.w_max) + " over " + std::to_string(steps) +
               " updates";
    return r;
}

CheckResult check_output_linearity(const NetConfig& net) {
    CheckResult r{"output_linearity", false, ""};
    std::mt19937_64 rng(13);
    const auto rows = static_cast<Eigen::Index>(net.feature_count());
    NetApproximator approx(net);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::MatrixXd W1 = random_weights(rng, rows, 0.3 * net.w_max);
        const Eigen::MatrixXd W2 = random_weights(rng, rows, 0.3 * net.w_max);
        const double alpha = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        const Eigen::VectorXd phi = approx.features(uniform3(rng, -2, 2), uniform3(rng, -3, 3), uniform3(rng, -1, 1));
        approx.set_weights(W1);
        const Vec3 y1 = approx.output(phi);
        approx.set_weights(W2);
        const Vec3 y2 = approx.output(phi);
        approx.set_weights(W1 + alpha * W2);
        const Vec3 y = approx.output(phi);
        const double scale = std::max(1.0, y1.norm() + std::abs(alpha) * y2.norm());
        worst = std::max(worst, (y - (y1 + alpha * y2)).norm() / scale);
    }
    r.passed = worst <= 1e-13;
    r.detail = "max relative deviation " + sci(worst);
    return r;
}

CheckResult check_lyapunov_decrease(const WorkbenchConfig& config) {
    CheckResult r{"lyapunov_decrease", false, ""};
    const ScenarioSpec* spec = find_scenario(config, "constant");
    if (!spec) {
        r.detail = "scenario 'constant' is not configured";
        return r;
    }
    const SimTrace trace = run_scenario(*spec, config.controller(ControllerKind::asmc_nn), config.manipulator);
    const std::string note = config.asmc.reaching_sign == -1
                                 ? " (reaching_sign = -1 is the literal sign convention, which drives s away from 0)"
                                 : "";
    if (!trace.completed()) {
        r.detail = std::string("run aborted: ") + to_string(trace.status) + ", " + trace.diagnostic + note;
        return r;
    }
    const double worst = max_lyapunov_increase(trace, 0.05);
    r.passed = worst <= 1e-6;
    r.detail = "max V increase for t >= 0.05 s: " + sci(worst) + note;
    return r;
}

CheckResult check_determinism(const WorkbenchConfig& config) {
    CheckResult r{"determinism", false, ""};
    const ScenarioSpec* spec = find_scenario(config, "constant");
    if (!spec) {
        r.detail = "scenario 'constant' is not configured";
        return r;
    }
    const ControllerSetup setup = config.controller(ControllerKind::asmc_nn);
    const SimTrace a = run_scenario(*spec, setup, config.manipulator);
    const SimTrace b = run_scenario(*spec, setup, config.manipulator);
    const bool csv_same = format_csv(a) == format_csv(b);
    const bool svg_same = render_svg({a}, FigureKind::response) == render_svg({b}, FigureKind::response) &&
                          render_svg({a}, FigureKind::error) == render_svg({b}, FigureKind::error);
    r.passed = csv_same && svg_same;
    r.detail = std::string("csv ") + (csv_same ? "identical" : "differs") + ", svg " +
               (svg_same ? "identical" : "differs");
    return r;
}

std::vector<CheckResult> run_verification(const WorkbenchConfig& config) {
    const NetConfig net = config.net_config();
    return {
        check_dynamics_round_trip(config.manipulator),
        check_energy_conservation(config.manipulator),
        check_integrator_order(),
        check_weight_freeze(net),
        check_weight_projection(net),
        check_output_linearity(net),
        check_lyapunov_decrease(config),
        check_determinism(config),
    };
}

}  // namespace cylarm
