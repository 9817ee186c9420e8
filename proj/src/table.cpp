#include <algorithm>

#include "cylarm/report.hpp"
#include "number_format.hpp"

namespace cylarm {

namespace {

struct Row {
    std::string controller;
    std::string joint;
    std::string metric;
    std::string value;
};

std::string time_cell(const std::optional<double>& t, const char* missing) {
    return t ? shortest(*t) : std::string(missing);
}

}  // namespace

ComparisonTable comparison_table(const std::map<std::string, MetricsSummary>& summaries) {
    if (summaries.size() < 2) throw std::invalid_argument("comparison needs at least 2 controllers");

    std::vector<Row> rows;
    for (const auto& [name, summary] : summaries) {
        for (int j = 0; j < 3; ++j) {
            const JointMetrics& m = summary.joints[j];
            const std::string joint = std::to_string(j + 1);
            rows.push_back({name, joint, "rms_error", shortest(m.rms_error)});
            rows.push_back({name, joint, "max_abs_error", shortest(m.max_abs_error)});
            rows.push_back({name, joint, "settling_time", time_cell(m.settling_time, "not settled")});
            rows.push_back({name, joint, "overshoot_percent", shortest(m.overshoot_percent)});
            rows.push_back({name, joint, "ise", shortest(m.ise)});
            rows.push_back({name, joint, "control_effort", shortest(m.control_effort)});
            if (summary.disturbance_onset) {
                rows.push_back({name, joint, "recovery_time", time_cell(m.recovery_time, "not recovered")});
            }
        }
    }

    ComparisonTable table;
    table.csv = "controller,joint,metric,value\n";
    std::array<std::size_t, 4> width{10, 5, 6, 5};
    for (const Row& r : rows) {
        table.csv += r.controller + ',' + r.joint + ',' + r.metric + ',' + r.value + '\n';
        width[0] = std::max(width[0], r.controller.size());
        width[1] = std::max(width[1], r.joint.size());
        width[2] = std::max(width[2], r.metric.size());
        width[3] = std::max(width[3], r.value.size());
    }

    auto line = [&](const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
        std::string out = a + std::string(width[0] - a.size() + 2, ' ');
        out += b + std::string(width[1] - b.size() + 2, ' ');
        out += c + std::string(width[2] - c.size() + 2, ' ');
        out += std::string(width[3] - d.size(), ' ') + d;
        return out + '\n';
    };
    table.text = line("controller", "joint", "metric", "value");
    table.text += std::string(width[0] + width[1] + width[2] + width[3] + 6, '-') + '\n';
    for (const Row& r : rows) table.text += line(r.controller, r.joint, r.metric, r.value);
    return table;
}

}  // namespace cylarm
