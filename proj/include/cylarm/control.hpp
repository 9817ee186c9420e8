#pragma once

#include <string>

#include <Eigen/Dense>

#include "cylarm/dynamics.hpp"
#include "cylarm/netapprox.hpp"

namespace cylarm {

/// Sliding-surface slope, switching gain and boundary-layer width.
///
/// reaching_sign multiplies the switching term. +1 drives s toward zero with
/// e = q_d - q; -1 reproduces the literal "-k Sign(s)" form, which diverges.
struct SmcGains {
    Vec3 lambda = Vec3(40.0, 30.0, 10.0);
    Vec3 k = Vec3(1.0e5, 5.0e4, 4.0e4);
    double epsilon = 2.5;
    int reaching_sign = +1;

    void validate() const;
};

struct PdGains {
    Vec3 kp = Vec3(3200.0, 6400.0, 800.0);
    Vec3 kd = Vec3(200.0, 1600.0, 800.0);

    void validate() const;
};

/// Desired position, velocity and acceleration at one instant.
struct ReferencePoint {
    Vec3 q = Vec3::Zero();
    Vec3 qdot = Vec3::Zero();
    Vec3 qddot = Vec3::Zero();
};

/// e = q_d - q, edot = qdot_d - qdot.
struct TrackingError {
    Vec3 e = Vec3::Zero();
    Vec3 edot = Vec3::Zero();
};

/// tau_total is always (tau_eq + tau_sw) + tau_nn, evaluated in that order.
struct ControlDecomposition {
    Vec3 tau_eq = Vec3::Zero();
    Vec3 tau_sw = Vec3::Zero();
    Vec3 tau_nn = Vec3::Zero();
    Vec3 tau_total = Vec3::Zero();
    Vec3 s = Vec3::Zero();
};

enum class ControllerKind { pd, smc, asmc_nn };

const char* to_string(ControllerKind kind);
/// Accepts "pd", "smc", "asmc-nn"; throws std::invalid_argument otherwise.
ControllerKind controller_from_string(const std::string& name);

TrackingError tracking_error(const ReferencePoint& ref, const JointState& state);

Vec3 sliding_surface(const TrackingError& err, const SmcGains& gains);

/// s_i / (epsilon + |s_i|).
Vec3 smoothed_sign(const Vec3& s, double epsilon);

/// A(q) qddot_d + velocity products at the measured qdot + D, using `model`.
Vec3 equivalent_control(const ManipulatorParams& params, const JointState& state,
                        const ReferencePoint& ref, PlantModel model = PlantModel::paper);

Vec3 switching_control(const Vec3& s, const SmcGains& gains);

ControlDecomposition smc_control(const ManipulatorParams& params, const JointState& state,
                                 const ReferencePoint& ref, const SmcGains& gains,
                                 PlantModel model = PlantModel::paper);

/// Same as smc_control plus tau_nn = net.output(q, qdot, s). Does not adapt.
ControlDecomposition asmc_nn_control(const ManipulatorParams& params, const JointState& state,
                                     const ReferencePoint& ref, const SmcGains& gains,
                                     const NetApproximator& net,
                                     PlantModel model = PlantModel::paper);

Vec3 pd_control(const TrackingError& err, const Vec3& kp, const Vec3& kd);

/// 1/2 s^T s + 1/2 trace(W^T W).
double lyapunov_value(const Vec3& s, const Eigen::MatrixXd& weights);

}  // namespace cylarm
