#include "cylarm/commands.hpp"

#include <cstdlib>
#include <future>
#include <map>
#include <set>

#include "cylarm/report.hpp"
#include "cylarm/verify.hpp"

namespace cylarm {

namespace {

WorkbenchConfig load(const std::optional<std::filesystem::path>& path) {
    if (!path) return WorkbenchConfig{};
    return load_config(*path);
}

MetricsOptions metrics_options(const WorkbenchConfig& config, const ScenarioSpec& spec) {
    MetricsOptions opts;
    opts.threshold = config.report.threshold;
    opts.window_start = config.report.window_start;
    if (spec.disturbance) opts.disturbance_onset = spec.disturbance->onset;
    return opts;
}

std::filesystem::path prepare_dir(const std::optional<std::filesystem::path>& cli, const WorkbenchConfig& config) {
    const auto dir = resolve_output_dir(cli, config);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

void print_metrics(std::ostream& out, const std::string& controller, const MetricsSummary& m) {
    for (int j = 0; j < 3; ++j) {
        const JointMetrics& jm = m.joints[j];
        out << "  " << controller << " joint " << j + 1 << ": rms " << jm.rms_error << ", max " << jm.max_abs_error
            << ", settling ";
        if (jm.settling_time) out << *jm.settling_time << " s";
        else out << "not settled";
        out << ", overshoot " << jm.overshoot_percent << " %";
        if (m.disturbance_onset) {
            out << ", recovery ";
            if (jm.recovery_time) out << *jm.recovery_time << " s";
            else out << "not recovered";
        }
        out << '\n';
    }
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& ex) {
        err << "config error: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& ex) {
        err << "config error: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const IoError& ex) {
        err << "io error: " << ex.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& ex) {
        err << "io error: " << ex.what() << '\n';
        return kExitIo;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitIo;
    }
}

}  // namespace

std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& cli,
                                         const WorkbenchConfig& config) {
    if (cli) return *cli;
    if (const char* env = std::getenv("WORKBENCH_OUT"); env && *env) return env;
    return config.output_dir;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const WorkbenchConfig config = load(options.config);
        const ControllerKind kind = controller_from_string(options.controller);
        const ScenarioSpec& spec = config.scenario(options.scenario);
        const auto dir = prepare_dir(options.out_dir, config);

        const SimTrace trace = run_scenario(spec, config.controller(kind), config.manipulator);
        const std::string stem = spec.name + "_" + to_string(kind);
        write_csv(trace, dir / (stem + ".csv"));
        if (!trace.completed()) {
            err << "simulation aborted (" << to_string(trace.status) << "): " << trace.diagnostic << '\n';
            return static_cast<int>(kExitAborted);
        }

        const MetricsSummary metrics = compute_metrics(trace, metrics_options(config, spec));
        write_text_file(dir / (stem + "_metrics.json"), metrics_json(metrics, spec.name, to_string(kind)));
        render_figures({trace}, dir, stem, metrics.threshold);

        out << spec.name << " / " << to_string(kind) << ": " << trace.records.size() << " samples -> "
            << dir.string() << '\n';
        print_metrics(out, to_string(kind), metrics);
        return static_cast<int>(kExitOk);
    });
}

int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const WorkbenchConfig config = load(options.config);
        std::vector<ControllerKind> kinds;
        std::set<std::string> seen;
        for (const auto& name : options.controllers) {
            const ControllerKind kind = controller_from_string(name);
            if (seen.insert(to_string(kind)).second) kinds.push_back(kind);
        }
        if (kinds.size() < 2) throw ConfigError("controllers: compare needs at least 2 distinct controllers");
        const ScenarioSpec& spec = config.scenario(options.scenario);
        const auto dir = prepare_dir(options.out_dir, config);

        std::vector<std::future<SimTrace>> jobs;
        for (ControllerKind kind : kinds) {
            jobs.push_back(std::async(std::launch::async, [&config, &spec, kind] {
                return run_scenario(spec, config.controller(kind), config.manipulator);
            }));
        }
        std::vector<SimTrace> traces;
        for (auto& job : jobs) traces.push_back(job.get());

        bool aborted = false;
        for (const SimTrace& trace : traces) {
            write_csv(trace, dir / (spec.name + "_" + trace.controller + ".csv"));
            if (!trace.completed()) {
                err << trace.controller << " aborted (" << to_string(trace.status) << "): " << trace.diagnostic
                    << '\n';
                aborted = true;
            }
        }
        if (aborted) return static_cast<int>(kExitAborted);

        std::map<std::string, MetricsSummary> summaries;
        const MetricsOptions opts = metrics_options(config, spec);
        for (const SimTrace& trace : traces) summaries[trace.controller] = compute_metrics(trace, opts);

        const ComparisonTable table = comparison_table(summaries);
        const std::string stem = spec.name + "_compare";
        write_text_file(dir / (stem + ".csv"), table.csv);
        write_text_file(dir / (stem + ".txt"), table.text);
        render_figures(traces, dir, stem, summaries.begin()->second.threshold);

        out << table.text;
        return static_cast<int>(kExitOk);
    });
}

int cmd_verify(const std::optional<std::filesystem::path>& config_path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const WorkbenchConfig config = load(config_path);
        bool all = true;
        for (const CheckResult& r : run_verification(config)) {
            out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
            all = all && r.passed;
        }
        return static_cast<int>(all ? kExitOk : kExitVerifyFailed);
    });
}

int cmd_print_defaults(std::ostream& out) {
    out << config_to_json(WorkbenchConfig{});
    return kExitOk;
}

}  // namespace cylarm
