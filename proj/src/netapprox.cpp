#include "cylarm/netapprox.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "number_format.hpp"

namespace cylarm {

namespace {

constexpr std::array<unsigned, kNetInputs> kHaltonBases = {2, 3, 5, 7, 11, 13, 17, 19, 23};

double radical_inverse(std::uint64_t index, unsigned base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

}  // namespace

void NetConfig::validate() const {
    if (centers.empty()) throw std::invalid_argument("net: at least one center is required");
    if (widths.size() != centers.size()) {
        throw std::invalid_argument("net.widths: expected " + std::to_string(centers.size()) +
                                    " entries, got " + std::to_string(widths.size()));
    }
    for (std::size_t j = 0; j < centers.size(); ++j) {
        if (!centers[j].allFinite()) {
            throw std::invalid_argument("net.centers[" + std::to_string(j) + "] must be finite");
        }
        if (!(std::isfinite(widths[j]) && widths[j] > 0)) {
            throw std::invalid_argument("net.widths[" + std::to_string(j) + "] must be > 0");
        }
    }
    if (!(std::isfinite(gamma) && gamma > 0)) throw std::invalid_argument("net.gamma must be > 0");
    if (!(std::isfinite(w_max) && w_max > 0)) throw std::invalid_argument("net.w_max must be > 0");
}

NetBounds NetBounds::defaults() {
    NetBounds b;
    b.upper << 2.0, 2.0, 2.0, 3.0, 3.0, 3.0, 0.2, 0.2, 0.2;
    b.lower = -b.upper;
    return b;
}

std::vector<NetInput> halton_centers(const NetBounds& bounds, std::size_t count, std::uint64_t seed) {
    std::vector<NetInput> centers(count);
    const NetInput span = bounds.upper - bounds.lower;
    for (std::size_t i = 0; i < count; ++i) {
        for (int d = 0; d < kNetInputs; ++d) {
            const double u = radical_inverse(seed + i + 1, kHaltonBases[d]);
            centers[i][d] = bounds.lower[d] + span[d] * u;
        }
    }
    return centers;
}

double default_width(const NetBounds& bounds, std::size_t count) {
    const double half_diagonal = 0.5 * (bounds.upper - bounds.lower).norm();
    return half_diagonal / std::pow(static_cast<double>(count), 1.0 / kNetInputs);
}

NetConfig make_net_config(const NetBounds& bounds, std::size_t count, double gamma, double w_max,
                          std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("net.n_centers must be >= 1");
    if (!((bounds.upper - bounds.lower).array() > 0).all()) {
        throw std::invalid_argument("net.upper must exceed net.lower in every dimension");
    }
    NetConfig cfg;
    cfg.centers = halton_centers(bounds, count, seed);
    cfg.widths.assign(count, default_width(bounds, count));
    cfg.gamma = gamma;
    cfg.w_max = w_max;
    cfg.seed = seed;
    return cfg;
}

NetApproximator::NetApproximator(NetConfig config) : config_(std::move(config)) {
    config_.validate();
    W_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(config_.feature_count()), 3);
}

void NetApproximator::set_weights(const Eigen::MatrixXd& W) {
    if (W.rows() != W_.rows() || W.cols() != 3) {
        throw std::invalid_argument("weights: expected " + std::to_string(W_.rows()) + "x3, got " +
                                    std::to_string(W.rows()) + "x" + std::to_string(W.cols()));
    }
    if (!W.allFinite()) throw std::invalid_argument("weights: non-finite entry");
    if (W.norm() > config_.w_max) {
        throw std::invalid_argument("weights: Frobenius norm exceeds w_max");
    }
    W_ = W;
}

Eigen::VectorXd NetApproximator::features(const Vec3& q, const Vec3& qdot, const Vec3& s) const {
    NetInput x;
    x << q, qdot, s;
    const auto n = static_cast<Eigen::Index>(config_.feature_count());
    Eigen::VectorXd phi(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double sigma = config_.widths[static_cast<std::size_t>(j)];
        const double d2 = (x - config_.centers[static_cast<std::size_t>(j)]).squaredNorm();
        phi[j] = std::exp(-d2 / (2.0 * sigma * sigma));
    }
    return phi;
}

Vec3 NetApproximator::output(const Eigen::VectorXd& phi) const {
    return W_.transpose() * phi;
}

Vec3 NetApproximator::output(const Vec3& q, const Vec3& qdot, const Vec3& s) const {
    return output(features(q, qdot, s));
}

void NetApproximator::adapt(const Vec3& q, const Vec3& qdot, const Vec3& s, double dt) {
    adapt(features(q, qdot, s), s, dt);
}

void NetApproximator::adapt(const Eigen::VectorXd& phi, const Vec3& s, double dt) {
    if (!(dt > 0)) throw std::invalid_argument("adapt: dt must be > 0");
    const double rate = dt * config_.gamma;
    bool changed = false;
    // Columns with s_j == 0 are skipped so W stays bit-identical there.
    for (int j = 0; j < 3; ++j) {
        if (s[j] == 0.0) continue;
        W_.col(j) += rate * (phi * s[j]);
        changed = true;
    }
    if (!changed) return;
    double norm = W_.norm();
    // Rounding can leave the rescaled norm an ulp above the bound; shrink until it holds.
    while (norm > config_.w_max) {
        W_ *= std::nextafter(config_.w_max / norm, 0.0);
        norm = W_.norm();
    }
}

void NetApproximator::reset() {
    W_.setZero();
}

void NetApproximator::write_weights_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    std::string line;
    for (Eigen::Index i = 0; i < W_.rows(); ++i) {
        line.clear();
        for (int j = 0; j < 3; ++j) {
            if (j) line += ',';
            append_shortest(line, W_(i, j));
        }
        line += '\n';
        out << line;
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void NetApproximator::load_weights_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Eigen::MatrixXd W(W_.rows(), 3);
    std::string line;
    Eigen::Index row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= W.rows()) throw std::invalid_argument("weights: too many rows in " + path.string());
        const auto cells = split_csv_line(line);
        if (cells.size() != 3) {
            throw std::invalid_argument("weights: row " + std::to_string(row + 1) + " needs 3 columns");
        }
        for (int j = 0; j < 3; ++j) W(row, j) = parse_double(cells[static_cast<std::size_t>(j)]);
        ++row;
    }
    if (row != W.rows()) {
        throw std::invalid_argument("weights: expected " + std::to_string(W.rows()) + " rows, got " +
                                    std::to_string(row));
    }
    set_weights(W);
}

}  // namespace cylarm
