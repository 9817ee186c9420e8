#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cylarm/sim.hpp"

namespace cylarm {

ReferenceSignal ReferenceSignal::constant(const Vec3& target) {
    if (!target.allFinite()) throw std::invalid_argument("reference.target must be finite");
    ReferenceSignal r;
    r.kind_ = Kind::constant;
    r.target_ = target;
    return r;
}

ReferenceSignal ReferenceSignal::sinusoid(const Vec3& amplitude, const Vec3& frequency_hz,
                                          const Vec3& phase, const Vec3& offset) {
    if (!(amplitude.allFinite() && frequency_hz.allFinite() && phase.allFinite() && offset.allFinite())) {
        throw std::invalid_argument("reference sinusoid parameters must be finite");
    }
    ReferenceSignal r;
    r.kind_ = Kind::sinusoid;
    r.amplitude_ = amplitude;
    r.frequency_ = frequency_hz;
    r.phase_ = phase;
    r.offset_ = offset;
    return r;
}

ReferenceSignal ReferenceSignal::table(std::vector<double> times, std::vector<Vec3> positions) {
    const std::size_t n = times.size();
    if (n < 2) throw std::invalid_argument("reference.times needs at least 2 knots");
    if (positions.size() != n) throw std::invalid_argument("reference.positions must match reference.times");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(times[i]) || !positions[i].allFinite()) {
            throw std::invalid_argument("reference table entries must be finite");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw std::invalid_argument("reference.times must be strictly increasing");
        }
    }

    // Natural spline: tridiagonal solve for knot second derivatives, zero at both ends.
    std::vector<Vec3> accel(n, Vec3::Zero());
    if (n > 2) {
        const std::size_t m = n - 2;
        std::vector<double> diag(m), upper(m);
        std::vector<Vec3> rhs(m);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = times[i] - times[i - 1];
            const double h1 = times[i + 1] - times[i];
            diag[i - 1] = 2.0 * (h0 + h1);
            upper[i - 1] = h1;
            rhs[i - 1] = 6.0 * ((positions[i + 1] - positions[i]) / h1 - (positions[i] - positions[i - 1]) / h0);
        }
        // Thomas algorithm; the sub-diagonal entry of row i is h0 = times[i+1]-times[i].
        for (std::size_t i = 1; i < m; ++i) {
            const double lower = times[i + 1] - times[i];
            const double w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        accel[m] = rhs[m - 1] / diag[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) {
            accel[i + 1] = (rhs[i] - upper[i] * accel[i + 2]) / diag[i];
        }
    }

    ReferenceSignal r;
    r.kind_ = Kind::table;
    r.times_ = std::move(times);
    r.positions_ = std::move(positions);
    r.knot_accel_ = std::move(accel);
    return r;
}

ReferencePoint ReferenceSignal::at(double t) const {
    ReferencePoint p;
    switch (kind_) {
        case Kind::constant:
            p.q = target_;
            break;
        case Kind::sinusoid: {
            for (int j = 0; j < 3; ++j) {
                const double w = 2.0 * std::numbers::pi * frequency_[j];
                const double arg = w * t + phase_[j];
                const double sn = std::sin(arg);
                p.q[j] = offset_[j] + amplitude_[j] * sn;
                p.qdot[j] = amplitude_[j] * w * std::cos(arg);
                p.qddot[j] = -amplitude_[j] * w * w * sn;
            }
            break;
        }
        case Kind::table: {
            if (t <= times_.front()) {
                p.q = positions_.front();
                break;
            }
            if (t >= times_.back()) {
                p.q = positions_.back();
                break;
            }
            std::size_t i = 0;
            while (times_[i + 1] < t) ++i;
            const double h = times_[i + 1] - times_[i];
            const double a = (times_[i + 1] - t) / h;
            const double b = (t - times_[i]) / h;
            const Vec3& y0 = positions_[i];
            const Vec3& y1 = positions_[i + 1];
            const Vec3& m0 = knot_accel_[i];
            const Vec3& m1 = knot_accel_[i + 1];
            p.q = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * (h * h / 6.0);
            p.qdot = (y1 - y0) / h + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * (h / 6.0);
            p.qddot = a * m0 + b * m1;
            break;
        }
    }
    return p;
}

Vec3 DisturbanceProfile::at(double t) const {
    Vec3 f = Vec3::Zero();
    bool active = t >= onset;
    if (shape == Shape::pulse) active = active && t < onset + duration;
    if (active) f[joint - 1] = magnitude;
    return f;
}

void DisturbanceProfile::validate() const {
    if (joint < 1 || joint > 3) throw std::invalid_argument("disturbance.joint must be 1, 2 or 3");
    if (!(std::isfinite(onset) && onset >= 0)) throw std::invalid_argument("disturbance.onset must be >= 0");
    if (!std::isfinite(magnitude)) throw std::invalid_argument("disturbance.magnitude must be finite");
    if (shape == Shape::pulse && !(std::isfinite(duration) && duration > 0)) {
        throw std::invalid_argument("disturbance.duration must be > 0 for a pulse");
    }
}

}  // namespace cylarm
