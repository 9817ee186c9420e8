#include "cylarm/sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cylarm {

const char* to_string(SimStatus status) {
    switch (status) {
        case SimStatus::completed: return "completed";
        case SimStatus::singular_inertia: return "singular_inertia";
        case SimStatus::non_finite: return "non_finite";
    }
    return "?";
}

std::size_t ScenarioSpec::step_count() const {
    return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
}

void ScenarioSpec::validate() const {
    if (!(std::isfinite(horizon) && horizon > 0)) throw std::invalid_argument("horizon must be > 0");
    if (!(std::isfinite(dt) && dt > 0 && dt <= horizon)) {
        throw std::invalid_argument("dt must satisfy 0 < dt <= horizon");
    }
    if (!(mass_factors.allFinite() && (mass_factors.array() > 0).all())) {
        throw std::invalid_argument("mass_factors must be > 0");
    }
    if (!(initial.q.allFinite() && initial.qdot.allFinite())) {
        throw std::invalid_argument("initial must be finite");
    }
    if (torque_limit && !(torque_limit->allFinite() && (torque_limit->array() > 0).all())) {
        throw std::invalid_argument("torque_limit must be > 0");
    }
    if (disturbance) disturbance->validate();
}

ManipulatorParams perturb_params(const ManipulatorParams& params, const Vec3& mass_factors) {
    if (!(mass_factors.allFinite() && (mass_factors.array() > 0).all())) {
        throw std::invalid_argument("mass factors must be > 0");
    }
    ManipulatorParams out = params;
    out.m1 *= mass_factors[0];
    out.m2 *= mass_factors[1];
    out.m3 *= mass_factors[2];
    return out;
}

SimTrace run_scenario(const ScenarioSpec& spec, const ControllerSetup& controller,
                      const ManipulatorParams& nominal) {
    spec.validate();
    nominal.validate();
    controller.smc.validate();
    if (controller.kind == ControllerKind::pd) controller.pd.validate();

    const ManipulatorParams plant = perturb_params(nominal, spec.mass_factors);
    std::optional<NetApproximator> net;
    if (controller.kind == ControllerKind::asmc_nn) net.emplace(controller.net);

    SimTrace trace;
    trace.scenario = spec.name;
    trace.controller = to_string(controller.kind);
    trace.dt = spec.dt;
    const std::size_t steps = spec.step_count();
    trace.records.reserve(steps + 1);

    State6 x;
    x << spec.initial.q, spec.initial.qdot;

    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) * spec.dt;
        const JointState state{x.head<3>(), x.tail<3>()};
        const ReferencePoint ref = spec.reference.at(t);
        const TrackingError err = tracking_error(ref, state);
        const Vec3 f_ext = spec.disturbance ? spec.disturbance->at(t) : Vec3::Zero();

        ControlDecomposition u;
        Eigen::VectorXd phi;
        switch (controller.kind) {
            case ControllerKind::pd:
                u.s = sliding_surface(err, controller.smc);
                u.tau_sw = pd_control(err, controller.pd.kp, controller.pd.kd);
                u.tau_total = (u.tau_eq + u.tau_sw) + u.tau_nn;
                break;
            case ControllerKind::smc:
                u = smc_control(nominal, state, ref, controller.smc, spec.plant);
                break;
            case ControllerKind::asmc_nn:
                u = smc_control(nominal, state, ref, controller.smc, spec.plant);
                phi = net->features(state.q, state.qdot, u.s);
                u.tau_nn = net->output(phi);
                u.tau_total = (u.tau_eq + u.tau_sw) + u.tau_nn;
                break;
        }

        Vec3 tau = u.tau_total;
        if (spec.torque_limit) tau = tau.cwiseMax(-*spec.torque_limit).cwiseMin(*spec.torque_limit);

        TraceRecord rec;
        rec.t = t;
        rec.q = state.q;
        rec.q_d = ref.q;
        rec.e = err.e;
        rec.control = u;
        rec.tau = tau;
        rec.f_ext = f_ext;
        rec.V = net ? lyapunov_value(u.s, net->weights()) : 0.5 * u.s.squaredNorm();
        trace.records.push_back(rec);

        if (i == steps) break;

        auto derivative = [&](double, const State6& xs) {
            const JointState js{xs.head<3>(), xs.tail<3>()};
            State6 dx;
            dx << js.qdot, forward_dynamics(spec.plant, plant, js, tau, f_ext);
            return dx;
        };
        try {
            x = rk4_step(derivative, x, t, spec.dt);
        } catch (const SingularInertia& ex) {
            trace.status = SimStatus::singular_inertia;
            trace.diagnostic = std::string(ex.what()) + " during step starting at t=" + std::to_string(t);
            break;
        }
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kStateLimit) {
            trace.status = SimStatus::non_finite;
            trace.diagnostic = "state left +/-1e8 during step starting at t=" + std::to_string(t);
            break;
        }
        if (net) net->adapt(phi, u.s, spec.dt);
    }

    if (net) trace.final_weights = net->weights();
    return trace;
}

std::vector<ScenarioSpec> paper_scenarios() {
    using std::numbers::pi;
    const Vec3 targets(pi / 3.0, pi / 2.0, pi);

    ScenarioSpec constant;
    constant.name = "constant";
    constant.reference = ReferenceSignal::constant(targets);

    ScenarioSpec uncertain = constant;
    uncertain.name = "uncertain";
    uncertain.mass_factors = Vec3(1.2, 0.8, 1.2);

    ScenarioSpec sinusoidal;
    sinusoidal.name = "sinusoidal";
    sinusoidal.reference = ReferenceSignal::sinusoid(Vec3::Ones(), Vec3::Ones());
    // The printed inertia matrix is singular along this path.
    sinusoidal.plant = PlantModel::reference;

    ScenarioSpec disturbance = constant;
    disturbance.name = "disturbance";
    disturbance.disturbance = DisturbanceProfile{};

    return {constant, uncertain, sinusoidal, disturbance};
}

}  // namespace cylarm
