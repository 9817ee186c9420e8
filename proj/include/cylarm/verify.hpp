#pragma once

#include <string>
#include <vector>

#include "cylarm/config.hpp"

namespace cylarm {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

CheckResult check_dynamics_round_trip(const ManipulatorParams& params, int samples = 1000);
CheckResult check_energy_conservation(const ManipulatorParams& params);
CheckResult check_integrator_order();
CheckResult check_weight_freeze(const NetConfig& net);
CheckResult check_weight_projection(const NetConfig& net, int steps = 100000);
CheckResult check_output_linearity(const NetConfig& net);
/// Runs the "constant" scenario with asmc-nn. An aborted run fails.
CheckResult check_lyapunov_decrease(const WorkbenchConfig& config);
CheckResult check_determinism(const WorkbenchConfig& config);

std::vector<CheckResult> run_verification(const WorkbenchConfig& config);

/// Largest V[i+1] - V[i] over samples with t_i >= from.
double max_lyapunov_increase(const SimTrace& trace, double from);

}  // namespace cylarm
