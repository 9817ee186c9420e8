#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "cylarm/report.hpp"

namespace cylarm {

namespace {

constexpr double kTimeSlack = 1e-12;

bool constant_reference(const SimTrace& trace) {
    const Vec3& first = trace.records.front().q_d;
    return std::all_of(trace.records.begin(), trace.records.end(),
                       [&](const TraceRecord& r) { return r.q_d == first; });
}

nlohmann::json time_or_label(const std::optional<double>& value, const char* missing) {
    if (value) return *value;
    return missing;
}

}  // namespace

double trapezoid(const std::vector<double>& y, double dt) {
    if (y.size() < 2) return 0.0;
    double sum = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) sum += y[i];
    return sum * dt;
}

std::optional<double> settling_time(const std::vector<double>& abs_error, double dt, double threshold,
                                    std::size_t first) {
    std::optional<std::size_t> last_violation;
    for (std::size_t i = first; i < abs_error.size(); ++i) {
        if (abs_error[i] >= threshold) last_violation = i;
    }
    if (!last_violation) return 0.0;
    if (*last_violation + 1 == abs_error.size()) return std::nullopt;
    return static_cast<double>(*last_violation) * dt + dt;
}

MetricsSummary compute_metrics(const SimTrace& trace, const MetricsOptions& options) {
    if (trace.records.empty()) throw EmptyTrace();
    const auto& recs = trace.records;
    const std::size_t n = recs.size();
    const double dt = trace.dt;

    MetricsSummary out;
    out.step_reference = constant_reference(trace);
    out.window_start = options.window_start;
    out.disturbance_onset = options.disturbance_onset;

    const Vec3 target = recs.front().q_d;
    const Vec3 initial = recs.front().q;
    if (options.threshold) {
        out.threshold = *options.threshold;
    } else {
        for (int j = 0; j < 3; ++j) {
            const double span = std::abs(target[j] - initial[j]);
            out.threshold[j] = (out.step_reference && span > 0.0) ? 0.01 * span : 0.01;
        }
    }
    if (!(out.threshold.allFinite() && (out.threshold.array() > 0).all())) {
        throw std::invalid_argument("metrics threshold must be > 0");
    }

    std::size_t onset_index = n;
    if (options.disturbance_onset) {
        for (std::size_t i = 0; i < n; ++i) {
            if (recs[i].t >= *options.disturbance_onset - kTimeSlack) {
                onset_index = i;
                break;
            }
        }
    }

    for (int j = 0; j < 3; ++j) {
        JointMetrics& m = out.joints[j];
        std::vector<double> abs_e(n), e2(n), tau2(n);
        double window_sq = 0.0;
        std::size_t window_count = 0;
        double worst_past_target = 0.0;
        const double direction = target[j] >= initial[j] ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = recs[i].e[j];
            abs_e[i] = std::abs(e);
            e2[i] = e * e;
            tau2[i] = recs[i].tau[j] * recs[i].tau[j];
            if (recs[i].t >= options.window_start - kTimeSlack) {
                window_sq += e2[i];
                ++window_count;
                m.max_abs_error = std::max(m.max_abs_error, abs_e[i]);
            }
            worst_past_target = std::max(worst_past_target, -direction * e);
        }
        m.rms_error = window_count ? std::sqrt(window_sq / static_cast<double>(window_count)) : 0.0;
        m.ise = trapezoid(e2, dt);
        m.control_effort = trapezoid(tau2, dt);
        m.settling_time = settling_time(abs_e, dt, out.threshold[j]);

        const double span = std::abs(target[j] - initial[j]);
        if (out.step_reference && span > 0.0) m.overshoot_percent = worst_past_target / span * 100.0;

        if (options.disturbance_onset) {
            if (onset_index == n) {
                m.recovery_time = 0.0;
            } else {
                const auto settle = settling_time(abs_e, dt, out.threshold[j], onset_index);
                if (settle) {
                    const double since = *settle == 0.0 ? 0.0 : *settle - *options.disturbance_onset;
                    m.recovery_time = std::max(0.0, since);
                }
            }
        }
    }
    return out;
}

std::string metrics_json(const MetricsSummary& summary, const std::string& scenario,
                         const std::string& controller) {
    nlohmann::ordered_json doc;
    doc["scenario"] = scenario;
    doc["controller"] = controller;
    doc["step_reference"] = summary.step_reference;
    doc["window_start"] = summary.window_start;
    if (summary.disturbance_onset) doc["disturbance_onset"] = *summary.disturbance_onset;
    auto joints = nlohmann::ordered_json::array();
    for (int j = 0; j < 3; ++j) {
        const JointMetrics& m = summary.joints[j];
        nlohmann::ordered_json row;
        row["joint"] = j + 1;
        row["threshold"] = summary.threshold[j];
        row["rms_error"] = m.rms_error;
        row["max_abs_error"] = m.max_abs_error;
        row["settling_time"] = time_or_label(m.settling_time, "not settled");
        row["overshoot_percent"] = m.overshoot_percent;
        row["ise"] = m.ise;
        row["control_effort"] = m.control_effort;
        if (summary.disturbance_onset) row["recovery_time"] = time_or_label(m.recovery_time, "not recovered");
        joints.push_back(row);
    }
    doc["joints"] = joints;
    return doc.dump(2) + "\n";
}

}  // namespace cylarm
