#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cylarm/config.hpp"

namespace cylarm {

/// Process exit codes of the workbench CLI.
enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitConfig = 2,
    kExitAborted = 3,
    kExitVerifyFailed = 4,
};

struct SimulateOptions {
    std::string scenario;
    std::string controller;
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> out_dir;
};

struct CompareOptions {
    std::string scenario;
    std::vector<std::string> controllers;
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> out_dir;
};

/// --out, then $WORKBENCH_OUT, then the config's output_dir.
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& cli,
                                         const WorkbenchConfig& config);

/// Writes <scenario>_<controller>.csv, _metrics.json, _response.svg, _error.svg.
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

/// Writes one trace CSV per controller, <scenario>_compare_{response,error}.svg,
/// <scenario>_compare.csv and <scenario>_compare.txt.
int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err);

int cmd_verify(const std::optional<std::filesystem::path>& config, std::ostream& out, std::ostream& err);

int cmd_print_defaults(std::ostream& out);

}  // namespace cylarm
