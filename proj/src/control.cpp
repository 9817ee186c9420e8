#include "cylarm/control.hpp"

#include <cmath>
#include <stdexcept>

namespace cylarm {

namespace {

bool all_positive(const Vec3& v) {
    return v.allFinite() && (v.array() > 0).all();
}

bool all_nonnegative(const Vec3& v) {
    return v.allFinite() && (v.array() >= 0).all();
}

ControlDecomposition sliding_decomposition(const ManipulatorParams& params, const JointState& state,
                                           const ReferencePoint& ref, const SmcGains& gains,
                                           PlantModel model) {
    ControlDecomposition out;
    out.s = sliding_surface(tracking_error(ref, state), gains);
    out.tau_eq = equivalent_control(params, state, ref, model);
    out.tau_sw = switching_control(out.s, gains);
    return out;
}

}  // namespace

void SmcGains::validate() const {
    if (!all_positive(lambda)) throw std::invalid_argument("lambda must be > 0 elementwise");
    if (!all_positive(k)) throw std::invalid_argument("k must be > 0 elementwise");
    if (!(std::isfinite(epsilon) && epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
    if (reaching_sign != 1 && reaching_sign != -1) {
        throw std::invalid_argument("reaching_sign must be +1 or -1");
    }
}

void PdGains::validate() const {
    if (!all_nonnegative(kp)) throw std::invalid_argument("kp must be >= 0 elementwise");
    if (!all_nonnegative(kd)) throw std::invalid_argument("kd must be >= 0 elementwise");
}

const char* to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::pd: return "pd";
        case ControllerKind::smc: return "smc";
        case ControllerKind::asmc_nn: return "asmc-nn";
    }
    return "?";
}

ControllerKind controller_from_string(const std::string& name) {
    if (name == "pd") return ControllerKind::pd;
    if (name == "smc") return ControllerKind::smc;
    if (name == "asmc-nn") return ControllerKind::asmc_nn;
    throw std::invalid_argument("unknown controller '" + name + "' (valid: pd, smc, asmc-nn)");
}

TrackingError tracking_error(const ReferencePoint& ref, const JointState& state) {
    return {ref.q - state.q, ref.qdot - state.qdot};
}

Vec3 sliding_surface(const TrackingError& err, const SmcGains& gains) {
    return err.edot + gains.lambda.cwiseProduct(err.e);
}

Vec3 smoothed_sign(const Vec3& s, double epsilon) {
    return s.array() / (epsilon + s.array().abs());
}

Vec3 equivalent_control(const ManipulatorParams& params, const JointState& state,
                        const ReferencePoint& ref, PlantModel model) {
    // Friction and f_ext are not part of the feedforward.
    ManipulatorParams frictionless = params;
    frictionless.viscous_friction.setZero();
    return inverse_dynamics(model, frictionless, state, ref.qddot, Vec3::Zero());
}

Vec3 switching_control(const Vec3& s, const SmcGains& gains) {
    return static_cast<double>(gains.reaching_sign) * gains.k.cwiseProduct(smoothed_sign(s, gains.epsilon));
}

ControlDecomposition smc_control(const ManipulatorParams& params, const JointState& state,
                                 const ReferencePoint& ref, const SmcGains& gains, PlantModel model) {
    ControlDecomposition out = sliding_decomposition(params, state, ref, gains, model);
    out.tau_nn = Vec3::Zero();
    out.tau_total = (out.tau_eq + out.tau_sw) + out.tau_nn;
    return out;
}

ControlDecomposition asmc_nn_control(const ManipulatorParams& params, const JointState& state,
                                     const ReferencePoint& ref, const SmcGains& gains,
                                     const NetApproximator& net, PlantModel model) {
    ControlDecomposition out = sliding_decomposition(params, state, ref, gains, model);
    out.tau_nn = net.output(state.q, state.qdot, out.s);
    out.tau_total = (out.tau_eq + out.tau_sw) + out.tau_nn;
    return out;
}

Vec3 pd_control(const TrackingError& err, const Vec3& kp, const Vec3& kd) {
    return kp.cwiseProduct(err.e) + kd.cwiseProduct(err.edot);
}

double lyapunov_value(const Vec3& s, const Eigen::MatrixXd& weights) {
    return 0.5 * s.squaredNorm() + 0.5 * weights.squaredNorm();
}

}  // namespace cylarm
