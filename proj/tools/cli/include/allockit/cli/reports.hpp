#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "allockit/cvar/backtest.hpp"
#include "allockit/data/stats.hpp"
#include "allockit/io/csv.hpp"
#include "allockit/regime/em.hpp"
#include "allockit/weights.hpp"

namespace allockit::cli {

using Json = nlohmann::ordered_json;

/// Two-space indented text with a trailing newline. NaN is written as null.
std::string dump_json(const Json& j);
Json read_json(const std::filesystem::path& path);

// Descriptive statistics. Undefined skewness/kurtosis: empty CSV field, JSON null.
io::CsvTable stats_to_csv(const std::vector<data::StatsRecord>& stats);
std::vector<data::StatsRecord> stats_from_csv(const io::CsvTable& table);
Json stats_to_json(const std::vector<data::StatsRecord>& stats);
std::vector<data::StatsRecord> stats_from_json(const Json& j);

struct LabelledMatrix {
    std::vector<std::string> ids;
    numerics::Matrix values;
};

io::CsvTable matrix_to_csv(const LabelledMatrix& m);
LabelledMatrix matrix_from_csv(const io::CsvTable& table);
Json matrix_to_json(const LabelledMatrix& m);
LabelledMatrix matrix_from_json(const Json& j);

/// A labelled allocation, e.g. "gmv", "mu=0.01" or "state_1".
struct Portfolio {
    std::string label;
    double target_mean = 0.0;
    double variance = 0.0;
    WeightVector weights;
};

/// Columns: label, target_mean, variance, then one weight column per asset.
io::CsvTable portfolios_to_csv(const std::vector<Portfolio>& portfolios);
std::vector<Portfolio> portfolios_from_csv(const io::CsvTable& table);
Json portfolios_to_json(const std::vector<Portfolio>& portfolios);
std::vector<Portfolio> portfolios_from_json(const Json& j);

struct FitSummary {
    std::vector<std::string> asset_ids;
    regime::MsModel model;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

Json fit_to_json(const regime::FitReport& fit, const std::vector<std::string>& asset_ids);
FitSummary fit_from_json(const Json& j);

Json backtest_to_json(const cvar::BacktestResult& result, const std::vector<std::string>& errors);
std::vector<cvar::BacktestSummaryRow> backtest_summary_from_json(const Json& j);

}  // namespace allockit::cli
