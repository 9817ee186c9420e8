#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cylarm {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Masses, lengths and inertia of the three-joint cylindrical arm.
///
/// Defaults are the tabulated values of the reference arm. The lengths are
/// carried for completeness; the printed dynamics never use them.
struct ManipulatorParams {
    double m1 = 36.367405;  // kg
    double m2 = 12.632222;  // kg
    double m3 = 23.735183;  // kg
    double l1 = 0.05;       // m
    double l2 = 0.79;       // m
    double l3 = 0.9;        // m
    double I3 = 1.0;        // kg*m^2
    double g = 9.8;         // m/s^2
    Vec3 viscous_friction = Vec3::Zero();

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;
};

/// Joint positions (theta1 in rad, q2 and q3 in m) and their rates.
struct JointState {
    Vec3 q = Vec3::Zero();
    Vec3 qdot = Vec3::Zero();
};

/// A(q), B*[th1'^2, q2'^2, q3'^2], C*[th1'q2', th1'q3', q2'q3'] and D.
struct DynamicsTerms {
    Mat3 A;
    Vec3 Bsq;
    Vec3 Ccross;
    Vec3 D;
};

/// Which equations of motion drive the plant (and the controller's model).
enum class PlantModel { paper, reference };

const char* to_string(PlantModel model);
PlantModel plant_model_from_string(const std::string& name);

/// The inertia matrix cannot be inverted: |det A| fell below tolerance or
/// its reciprocal condition estimate is too small.
class SingularInertia : public std::runtime_error {
public:
    explicit SingularInertia(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kSingularDetTolerance = 1e-9;
inline constexpr double kMaxConditionEstimate = 1e12;

// Printed matrix-form model. A is not symmetric (A13 != A31) and is
// indefinite for small theta1 with q3 > 0; it is evaluated as printed.
Mat3 inertia_matrix(const ManipulatorParams& params, const Vec3& q);
Vec3 velocity_coupling(const ManipulatorParams& params, const JointState& state);
Vec3 gravity_vector(const ManipulatorParams& params);
DynamicsTerms dynamics_terms(const ManipulatorParams& params, const JointState& state);

/// tau = A qddot + B/C velocity products + D + friction*qdot + f_ext.
Vec3 inverse_dynamics(const ManipulatorParams& params, const JointState& state,
                      const Vec3& qddot, const Vec3& f_ext);

/// Solves A qddot = tau - (velocity products) - D - friction*qdot - f_ext.
/// Throws SingularInertia.
Vec3 forward_dynamics(const ManipulatorParams& params, const JointState& state,
                      const Vec3& tau, const Vec3& f_ext);

// Textbook cylindrical arm: M = diag(I3 + m3 q3^2, m2 + m3, m3).
Mat3 reference_model_inertia(const ManipulatorParams& params, const Vec3& q);
Vec3 reference_model_inverse_dynamics(const ManipulatorParams& params, const JointState& state,
                                      const Vec3& qddot, const Vec3& f_ext);
Vec3 reference_model_dynamics(const ManipulatorParams& params, const JointState& state,
                              const Vec3& tau, const Vec3& f_ext);
/// Kinetic plus potential energy of the reference model, J.
double reference_model_energy(const ManipulatorParams& params, const JointState& state);

Vec3 inverse_dynamics(PlantModel model, const ManipulatorParams& params, const JointState& state,
                      const Vec3& qddot, const Vec3& f_ext);
Vec3 forward_dynamics(PlantModel model, const ManipulatorParams& params, const JointState& state,
                      const Vec3& tau, const Vec3& f_ext);

}  // namespace cylarm
