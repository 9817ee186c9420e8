#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylarm/sim.hpp"

namespace cylarm {

class EmptyTrace : public std::invalid_argument {
public:
    EmptyTrace() : std::invalid_argument("trace has no records") {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct JointMetrics {
    double rms_error = 0.0;
    double max_abs_error = 0.0;
    std::optional<double> settling_time;  // empty: not settled
    double overshoot_percent = 0.0;
    double ise = 0.0;
    double control_effort = 0.0;
    std::optional<double> recovery_time;  // seconds after onset; empty: not recovered
};

struct MetricsSummary {
    std::array<JointMetrics, 3> joints;
    Vec3 threshold = Vec3::Zero();
    bool step_reference = false;
    double window_start = 0.0;
    std::optional<double> disturbance_onset;
};

struct MetricsOptions {
    // Per-joint settling band. Default: 1% of |target - initial| for a step
    // reference, 0.01 otherwise.
    std::optional<Vec3> threshold;
    std::optional<double> disturbance_onset;
    // rms_error and max_abs_error only use samples with t >= window_start.
    double window_start = 0.0;
};

/// Trapezoid rule on a uniform grid.
double trapezoid(const std::vector<double>& y, double dt);

/// Last sample time with |e| >= threshold plus dt; 0 if there is none,
/// empty if the final sample still violates the band.
std::optional<double> settling_time(const std::vector<double>& abs_error, double dt, double threshold,
                                    std::size_t first = 0);

/// Throws EmptyTrace or std::invalid_argument for a non-positive threshold.
MetricsSummary compute_metrics(const SimTrace& trace, const MetricsOptions& options = {});

/// JSON object with one entry per joint; "not settled" where a time is missing.
std::string metrics_json(const MetricsSummary& summary, const std::string& scenario,
                         const std::string& controller);

/// Header plus one row per record, 29 columns.
std::string format_csv(const SimTrace& trace);
void write_csv(const SimTrace& trace, const std::filesystem::path& path);
SimTrace parse_csv(const std::string& text);
SimTrace read_csv(const std::filesystem::path& path);

const std::vector<std::string>& csv_columns();

enum class FigureKind { response, error };

/// Three stacked subplots (one per joint), one curve per trace. The error
/// figure draws +/- threshold bands when given.
std::string render_svg(const std::vector<SimTrace>& traces, FigureKind kind,
                       const std::optional<Vec3>& threshold = std::nullopt);

/// Writes <stem>_response.svg and <stem>_error.svg; returns their paths.
std::vector<std::filesystem::path> render_figures(const std::vector<SimTrace>& traces,
                                                  const std::filesystem::path& out_dir,
                                                  const std::string& stem,
                                                  const std::optional<Vec3>& threshold = std::nullopt);

struct ComparisonTable {
    std::string text;
    std::string csv;  // controller,joint,metric,value
};

/// Rows ordered by controller name, joint, then metric. Needs >= 2 entries.
ComparisonTable comparison_table(const std::map<std::string, MetricsSummary>& summaries);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cylarm
