#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "logpot/io.hpp"
#include "logpot/verify.hpp"

namespace logpot {

using ExperimentJob = std::function<ExperimentReport()>;

/// Names accepted by plan_experiment.
const std::vector<std::string>& experiment_names();

/// Star-shaped polygon r = 2 + 0.45 cos 3 theta (contains B_1.5, inside B_2.5).
Shape sandwich_blob();

/// Validates the whole config (unknown fields, types, geometry) and returns
/// the experiment ready to run. Omitted fields take the documented defaults.
ExperimentJob plan_experiment(const std::string& name, const io::json& config, std::uint64_t seed = 0,
                              int threads = 1);

} // namespace logpot
