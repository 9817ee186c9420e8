#include "cylarm/dynamics.hpp"

#include <cmath>

namespace cylarm {

namespace {

void require(bool ok, const char* field, const char* rule) {
    if (!ok) {
        throw std::invalid_argument(std::string("manipulator.") + field + " must be " + rule);
    }
}

Vec3 friction_torque(const ManipulatorParams& params, const Vec3& qdot) {
    return params.viscous_friction.cwiseProduct(qdot);
}

}  // namespace

void ManipulatorParams::validate() const {
    require(std::isfinite(m1) && m1 > 0, "m1", "> 0");
    require(std::isfinite(m2) && m2 > 0, "m2", "> 0");
    require(std::isfinite(m3) && m3 > 0, "m3", "> 0");
    require(std::isfinite(l1) && std::isfinite(l2) && std::isfinite(l3), "l1..l3", "finite");
    require(std::isfinite(I3) && I3 > 0, "I3", "> 0");
    require(std::isfinite(g) && g > 0, "g", "> 0");
    require(viscous_friction.allFinite() && (viscous_friction.array() >= 0).all(),
            "viscous_friction", ">= 0 elementwise");
}

const char* to_string(PlantModel model) {
    return model == PlantModel::paper ? "paper" : "reference";
}

PlantModel plant_model_from_string(const std::string& name) {
    if (name == "paper") return PlantModel::paper;
    if (name == "reference") return PlantModel::reference;
    throw std::invalid_argument("unknown plant model '" + name + "' (expected paper|reference)");
}

Mat3 inertia_matrix(const ManipulatorParams& p, const Vec3& q) {
    const double s = std::sin(q[0]);
    const double c = std::cos(q[0]);
    const double q3 = q[2];
    Mat3 A = Mat3::Zero();
    A(0, 0) = (4.0 * p.m1 * s - 4.0 * p.m2 * c) * q3 + p.I3;
    A(0, 2) = (p.m1 + p.m2) * (s * c) * q3;
    A(1, 1) = p.m3;
    A(2, 0) = p.m1 * s * c;
    A(2, 2) = 2.0 * (p.m1 * s + p.m2 * c);
    return A;
}

namespace {

// Returns {B * squares, C * cross products}.
std::pair<Vec3, Vec3> velocity_products(const ManipulatorParams& p, const JointState& x) {
    const double s = std::sin(x.q[0]);
    const double c = std::cos(x.q[0]);
    const double q3 = x.q[2];
    const Vec3& v = x.qdot;

    const double B11 = (p.m1 * s - 4.0 * p.m2 * c) * q3;
    const double B13 = -p.m1 * c + p.m2 * s;
    const double B31 = 2.0 * q3 * (p.m1 * s - p.m2 * c);
    const double C12 = -(p.m1 + p.m2) * (s * c) * q3;
    const double C32 = -(p.m1 + p.m2) * (s * c);

    const Vec3 sq(v[0] * v[0], v[1] * v[1], v[2] * v[2]);
    const Vec3 cross(v[0] * v[1], v[0] * v[2], v[1] * v[2]);

    const Vec3 bsq(B11 * sq[0] + B13 * sq[2], 0.0, B31 * sq[0]);
    const Vec3 ccross(C12 * cross[1], 0.0, C32 * cross[1]);
    return {bsq, ccross};
}

}  // namespace

Vec3 velocity_coupling(const ManipulatorParams& params, const JointState& state) {
    const auto [bsq, ccross] = velocity_products(params, state);
    return bsq + ccross;
}

Vec3 gravity_vector(const ManipulatorParams& params) {
    return Vec3(0.0, params.g * (params.m2 + params.m3), 0.0);
}

DynamicsTerms dynamics_terms(const ManipulatorParams& params, const JointState& state) {
    const auto [bsq, ccross] = velocity_products(params, state);
    return {inertia_matrix(params, state.q), bsq, ccross, gravity_vector(params)};
}

Vec3 inverse_dynamics(const ManipulatorParams& params, const JointState& state,
                      const Vec3& qddot, const Vec3& f_ext) {
    return inertia_matrix(params, state.q) * qddot + velocity_coupling(params, state) +
           gravity_vector(params) + friction_torque(params, state.qdot) + f_ext;
}

Vec3 forward_dynamics(const ManipulatorParams& params, const JointState& state,
                      const Vec3& tau, const Vec3& f_ext) {
    const Mat3 A = inertia_matrix(params, state.q);
    const Vec3 rhs = tau - velocity_coupling(params, state) - gravity_vector(params) -
                     friction_torque(params, state.qdot) - f_ext;

    const Eigen::PartialPivLU<Mat3> lu(A);
    const double det = lu.determinant();
    if (!std::isfinite(det) || std::abs(det) < kSingularDetTolerance) {
        throw SingularInertia("inertia matrix singular: |det A| = " + std::to_string(std::abs(det)) +
                              " at theta1=" + std::to_string(state.q[0]) +
                              ", q3=" + std::to_string(state.q[2]));
    }
    const double rcond = lu.rcond();
    if (!(rcond * kMaxConditionEstimate > 1.0)) {
        throw SingularInertia("inertia matrix ill-conditioned: rcond = " + std::to_string(rcond));
    }
    return lu.solve(rhs);
}

Mat3 reference_model_inertia(const ManipulatorParams& p, const Vec3& q) {
    Mat3 M = Mat3::Zero();
    M(0, 0) = p.I3 + p.m3 * q[2] * q[2];
    M(1, 1) = p.m2 + p.m3;
    M(2, 2) = p.m3;
    return M;
}

namespace {

// Everything in the reference torque balance except the inertial term.
Vec3 reference_bias(const ManipulatorParams& p, const JointState& x) {
    const double q3 = x.q[2];
    const Vec3& v = x.qdot;
    return Vec3(2.0 * p.m3 * q3 * v[2] * v[0],
                (p.m2 + p.m3) * p.g,
                -p.m3 * q3 * v[0] * v[0]);
}

}  // namespace

Vec3 reference_model_inverse_dynamics(const ManipulatorParams& params, const JointState& state,
                                      const Vec3& qddot, const Vec3& f_ext) {
    return reference_model_inertia(params, state.q) * qddot + reference_bias(params, state) +
           friction_torque(params, state.qdot) + f_ext;
}

Vec3 reference_model_dynamics(const ManipulatorParams& params, const JointState& state,
                              const Vec3& tau, const Vec3& f_ext) {
    const Vec3 rhs = tau - reference_bias(params, state) - friction_torque(params, state.qdot) - f_ext;
    // Diagonal and positive definite for positive masses and I3.
    return rhs.cwiseQuotient(reference_model_inertia(params, state.q).diagonal());
}

double reference_model_energy(const ManipulatorParams& p, const JointState& x) {
    const Vec3& v = x.qdot;
    const double kinetic = 0.5 * v[0] * v[0] * (p.I3 + p.m3 * x.q[2] * x.q[2]) +
                           0.5 * (p.m2 + p.m3) * v[1] * v[1] + 0.5 * p.m3 * v[2] * v[2];
    const double potential = (p.m2 + p.m3) * p.g * x.q[1];
    return kinetic + potential;
}

Vec3 inverse_dynamics(PlantModel model, const ManipulatorParams& params, const JointState& state,
                      const Vec3& qddot, const Vec3& f_ext) {
    return model == PlantModel::paper ? inverse_dynamics(params, state, qddot, f_ext)
                                      : reference_model_inverse_dynamics(params, state, qddot, f_ext);
}

Vec3 forward_dynamics(PlantModel model, const ManipulatorParams& params, const JointState& state,
                      const Vec3& tau, const Vec3& f_ext) {
    return model == PlantModel::paper ? forward_dynamics(params, state, tau, f_ext)
                                      : reference_model_dynamics(params, state, tau, f_ext);
}

}  // namespace cylarm
