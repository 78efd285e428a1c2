#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "allockit/cvar/backtest.hpp"
#include "allockit/regime/allocation.hpp"

namespace allockit::cli {

enum class ReportFormat { json, csv };

std::string_view to_string(ReportFormat format);
ReportFormat parse_report_format(std::string_view name);

struct RunConfig {
    // [input]
    std::filesystem::path prices;
    std::filesystem::path cpi;  ///< empty: nominal returns
    std::vector<std::string> universe;

    // [general]
    std::string designated_asset = "BTC";
    std::uint64_t seed = 7;
    unsigned workers = 1;
    std::filesystem::path out_dir = "out";
    ReportFormat format = ReportFormat::csv;

    // [cvar]
    double alpha = 0.95;
    std::size_t window = 36;
    std::vector<cvar::StrategyKind> strategies{cvar::StrategyKind::unconstrained, cvar::StrategyKind::long_only,
                                               cvar::StrategyKind::box, cvar::StrategyKind::equal_weight};
    double box_lower = -1.0;
    double box_upper = 1.0;
    std::vector<cvar::Objective> objectives{cvar::Objective::min_cvar, cvar::Objective::max_ratio,
                                            cvar::Objective::mean_target};

    // [meanvar]
    std::vector<double> mu_grid;  ///< empty: `grid_points` from the GMV mean to the largest asset mean
    std::size_t grid_points = 21;
    bool ridge = false;
    double ridge_epsilon = 1e-8;

    // [regime]
    std::size_t states = 2;
    std::size_t order = 0;
    std::size_t starts = 8;
    double tolerance = 1e-8;
    std::size_t max_iterations = 1000;
    std::optional<regime::AllocationMethod> regime_weights = regime::AllocationMethod::meanvar;
    regime::MeanVarTarget regime_target = regime::MeanVarTarget::gmv;
    double regime_target_mean = 0.0;
    double risk_tolerance = 1.0;
    std::size_t cvar_scenarios = 2000;

    // [sdf]
    bool sdf_enabled = true;
    double beta = 0.96;
    double gamma = 2.0;
    std::string growth_asset;  ///< empty: first asset other than the designated and risk-free ones
    std::string riskfree_asset = "TBILL";

    // [fixture]
    std::size_t fixture_returns = 141;

    /// Range checks that need no data: alpha ∈ (0.5, 1), window ≥ 12, box lower < upper, …
    void validate() const;
};

/// Reads an INI file. Relative input paths resolve against the file's directory; unknown
/// sections or keys are a ConfigError naming them.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

/// Deterministic per-component seed derived from the run seed.
enum class SeedStream : std::uint32_t { regime = 1, allocation = 2 };
std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream);

}  // namespace allockit::cli
