#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cylarm/control.hpp"
#include "cylarm/dynamics.hpp"
#include "cylarm/netapprox.hpp"

namespace cylarm {

/// Desired trajectory with analytic first and second derivatives.
///
/// - constant: q_d = target.
/// - sinusoid: q_d = offset + amplitude * sin(2 pi f t + phase), per joint.
/// - table: natural cubic spline through (times, positions); held at the
///   end points outside the table.
class ReferenceSignal {
public:
    enum class Kind { constant, sinusoid, table };

    static ReferenceSignal constant(const Vec3& target);
    static ReferenceSignal sinusoid(const Vec3& amplitude, const Vec3& frequency_hz,
                                    const Vec3& phase = Vec3::Zero(), const Vec3& offset = Vec3::Zero());
    static ReferenceSignal table(std::vector<double> times, std::vector<Vec3> positions);

    ReferenceSignal() = default;  // constant zero

    Kind kind() const { return kind_; }
    ReferencePoint at(double t) const;

    const Vec3& target() const { return target_; }
    const Vec3& amplitude() const { return amplitude_; }
    const Vec3& frequency_hz() const { return frequency_; }
    const Vec3& phase() const { return phase_; }
    const Vec3& offset() const { return offset_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<Vec3>& positions() const { return positions_; }

private:
    Kind kind_ = Kind::constant;
    Vec3 target_ = Vec3::Zero();
    Vec3 amplitude_ = Vec3::Zero();
    Vec3 frequency_ = Vec3::Zero();
    Vec3 phase_ = Vec3::Zero();
    Vec3 offset_ = Vec3::Zero();
    std::vector<double> times_;
    std::vector<Vec3> positions_;
    std::vector<Vec3> knot_accel_;  // spline second derivatives at the knots
};

/// External force on one joint, added to f_ext.
struct DisturbanceProfile {
    enum class Shape { step, pulse };

    int joint = 3;  // 1-based
    double onset = 0.5;
    double magnitude = 50.0;
    Shape shape = Shape::step;
    double duration = 0.0;  // pulse only

    Vec3 at(double t) const;
    void validate() const;
};

struct ScenarioSpec {
    std::string name;
    ReferenceSignal reference;
    std::optional<DisturbanceProfile> disturbance;
    // Plant masses are nominal masses times these; the controller keeps nominal.
    Vec3 mass_factors = Vec3::Ones();
    JointState initial;
    double horizon = 2.0;
    double dt = 1e-3;
    // Equations of motion for the plant; the controller's model-based terms
    // use the same family with nominal parameters.
    PlantModel plant = PlantModel::paper;
    std::optional<Vec3> torque_limit;

    std::size_t step_count() const;
    void validate() const;
};

struct ControllerSetup {
    ControllerKind kind = ControllerKind::asmc_nn;
    SmcGains smc;
    PdGains pd;
    NetConfig net;
};

/// One control sample. control.tau_total is pre-clamp; tau is what the
/// plant received.
struct TraceRecord {
    double t = 0.0;
    Vec3 q = Vec3::Zero();
    Vec3 q_d = Vec3::Zero();
    Vec3 e = Vec3::Zero();
    ControlDecomposition control;
    Vec3 tau = Vec3::Zero();
    Vec3 f_ext = Vec3::Zero();
    double V = 0.0;
};

enum class SimStatus { completed, singular_inertia, non_finite };

const char* to_string(SimStatus status);

struct SimTrace {
    std::string scenario;
    std::string controller;
    double dt = 0.0;
    std::vector<TraceRecord> records;
    SimStatus status = SimStatus::completed;
    std::string diagnostic;
    std::optional<Eigen::MatrixXd> final_weights;

    bool completed() const { return status == SimStatus::completed; }
};

inline constexpr double kStateLimit = 1e8;

using State6 = Eigen::Matrix<double, 6, 1>;

/// Classical fourth-order Runge-Kutta step of dx/dt = f(t, x).
template <class State, class Derivative>
State rk4_step(Derivative&& f, const State& x, double t, double dt) {
    const State k1 = f(t, x);
    const State k2 = f(t + 0.5 * dt, State(x + (0.5 * dt) * k1));
    const State k3 = f(t + 0.5 * dt, State(x + (0.5 * dt) * k2));
    const State k4 = f(t + dt, State(x + dt * k3));
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

ManipulatorParams perturb_params(const ManipulatorParams& params, const Vec3& mass_factors);

/// Fixed-step closed loop. The controller sees `nominal`, the plant sees the
/// perturbed parameters, torque is held over each step. SingularInertia and
/// runaway states end the run early with status and diagnostic set.
SimTrace run_scenario(const ScenarioSpec& spec, const ControllerSetup& controller,
                      const ManipulatorParams& nominal);

/// constant, uncertain, sinusoidal, disturbance.
std::vector<ScenarioSpec> paper_scenarios();

}  // namespace cylarm
