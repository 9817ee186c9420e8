#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "cylarm/dynamics.hpp"

namespace cylarm {

inline constexpr int kNetInputs = 9;
using NetInput = Eigen::Matrix<double, kNetInputs, 1>;

/// Fixed Gaussian feature layer plus adaptation settings.
///
/// Input x = [q; qdot; s]. `centers` and `widths` are normally produced by
/// make_net_config() from a bounding box; both may also be supplied directly.
struct NetConfig {
    std::vector<NetInput> centers;
    std::vector<double> widths;
    double gamma = 0.03;   // learning rate
    double w_max = 100.0;  // Frobenius bound on W
    std::uint64_t seed = 0;

    std::size_t feature_count() const { return centers.size(); }
    void validate() const;
};

/// Box the centers are spread over when no explicit list is configured.
struct NetBounds {
    NetInput lower;
    NetInput upper;

    static NetBounds defaults();
};

/// Points seed+1 .. seed+count of the 9-D Halton sequence (bases 2..23),
/// mapped into `bounds`.
std::vector<NetInput> halton_centers(const NetBounds& bounds, std::size_t count, std::uint64_t seed);

/// Half the bounding-box diagonal divided by count^(1/9).
double default_width(const NetBounds& bounds, std::size_t count);

NetConfig make_net_config(const NetBounds& bounds, std::size_t count = 64, double gamma = 0.03,
                          double w_max = 100.0, std::uint64_t seed = 0);

/// Linear-in-weight approximator tau_nn = W^T phi(q, qdot, s).
///
/// W is feature_count x 3. Every adapt() keeps ||W||_F <= w_max by radial
/// scaling. An instance has a single owner while a simulation runs.
class NetApproximator {
public:
    explicit NetApproximator(NetConfig config);

    const NetConfig& config() const { return config_; }
    const Eigen::MatrixXd& weights() const { return W_; }

    /// Replaces W; throws std::invalid_argument on shape mismatch,
    /// non-finite entries or ||W||_F > w_max.
    void set_weights(const Eigen::MatrixXd& W);

    Eigen::VectorXd features(const Vec3& q, const Vec3& qdot, const Vec3& s) const;
    Vec3 output(const Vec3& q, const Vec3& qdot, const Vec3& s) const;
    Vec3 output(const Eigen::VectorXd& phi) const;

    /// Explicit Euler step of dW/dt = gamma * phi s^T, then projection.
    void adapt(const Vec3& q, const Vec3& qdot, const Vec3& s, double dt);
    void adapt(const Eigen::VectorXd& phi, const Vec3& s, double dt);

    void reset();

    /// feature_count rows x 3 columns, shortest round-trip decimals.
    void write_weights_csv(const std::filesystem::path& path) const;
    void load_weights_csv(const std::filesystem::path& path);

private:
    NetConfig config_;
    Eigen::MatrixXd W_;
};

}  // namespace cylarm
