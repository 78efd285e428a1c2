#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "allockit/cli/config.hpp"
#include "allockit/data/series.hpp"

namespace allockit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitConvergence = 4;

struct CommandResult {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> files;  ///< in write order
    std::vector<std::string> warnings;
};

/// Prices → nominal returns → real returns when a CPI file is configured.
data::ReturnPanel load_returns(const RunConfig& config);

/// stats.{json|csv} and correlation.{json|csv}.
CommandResult cmd_stats(const RunConfig& config);

/// gmv_weights.{json|csv}, efficient_weights.{json|csv} and frontier.csv.
CommandResult cmd_meanvar(const RunConfig& config);

/// Per objective: cvar_summary_<objective>.csv and cvar_detail_<objective>.csv, plus
/// cvar_<objective>.json in json mode. A strategy that fails is reported and skipped.
CommandResult cmd_cvar(const RunConfig& config);

/// fit.json, probabilities.csv, regime_weights.{json|csv} when requested and
/// risk_premium.json when the SDF inputs are available. Exit code 4 when EM stopped
/// at the iteration limit; the files are written regardless.
CommandResult cmd_regime(const RunConfig& config);

/// prices.csv, cpi.csv and allockit.ini for the calibrated synthetic dataset.
CommandResult cmd_fixture(const RunConfig& config);

}  // namespace allockit::cli
