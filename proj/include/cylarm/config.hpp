#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylarm/control.hpp"
#include "cylarm/dynamics.hpp"
#include "cylarm/netapprox.hpp"
#include "cylarm/sim.hpp"

namespace cylarm {

/// Malformed or invalid configuration. The message starts with the key path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NetSettings {
    std::size_t n_centers = 64;
    NetBounds bounds = NetBounds::defaults();
    std::vector<NetInput> centers;  // overrides Halton placement when non-empty
    std::vector<double> widths;     // one per center, or empty for the default width
    double gamma = 0.03;
    double w_max = 100.0;
};

struct ReportSettings {
    double window_start = 0.5;
    std::optional<Vec3> threshold;
};

struct WorkbenchConfig {
    ManipulatorParams manipulator;
    PdGains pd;
    SmcGains smc;
    SmcGains asmc;
    NetSettings net;
    std::vector<ScenarioSpec> scenarios = paper_scenarios();
    ReportSettings report;
    std::string output_dir = "out";
    std::uint64_t seed = 0;

    /// Throws ConfigError.
    void validate() const;

    /// Throws ConfigError listing the known names.
    const ScenarioSpec& scenario(const std::string& name) const;
    std::vector<std::string> scenario_names() const;

    NetConfig net_config() const;
    ControllerSetup controller(ControllerKind kind) const;
};

WorkbenchConfig parse_config(const std::string& json_text);
WorkbenchConfig load_config(const std::filesystem::path& path);

/// Complete configuration as JSON; parse_config() of it gives the defaults back.
std::string config_to_json(const WorkbenchConfig& config);

}  // namespace cylarm
