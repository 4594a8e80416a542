#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gvar/experiments/config.hpp"
#include "gvar/experiments/report.hpp"

namespace gvar::experiments {

/// Value of E max(g1^2, g2^2) = 1 + 2/pi for independent standard normals, from
/// two-dimensional quadrature of 1 + E|g2^2 - g1^2| / 2 (see the test oracles).
inline constexpr double kMaxOfTwoSquaresMoment = 1.6366197723675814;

/// Suite names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// All norms of the configured measure or density.
SuiteReport run_norms(const ExperimentConfig& config);

/// One verification suite: thm-2-3, thm-3-3, cor-2-5, cor-2-6, example-3-4,
/// finest-partition or randomisation.
SuiteReport run_suite(const std::string& name, const ExperimentConfig& config);

/// Stochastic integral statistics for the configured density; optionally dumps the
/// path ensemble in the flat binary format.
SuiteReport run_integrate(const ExperimentConfig& config, const std::optional<std::string>& dump_path = {});

/// Chart of the divergence curve recorded by the example-3-4 suite; empty for other suites.
std::string render_svg(const SuiteReport& report);

} // namespace gvar::experiments
