#pragma once

#include <optional>
#include <string>
#include <vector>

#include "allockit/cvar/optimizer.hpp"
#include "allockit/data/series.hpp"
#include "allockit/io/csv.hpp"

namespace allockit::cvar {

/// min_cvar: pure CVaR minimization (the unconstrained strategy targets the in-sample
/// equal-weight mean). max_ratio: maximize mean return per unit of CVaR. mean_target: minimize
/// CVaR subject to w·E = μ for every strategy, with μ the in-sample equal-weight mean of the universe.
enum class Objective { min_cvar, max_ratio, mean_target };

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view name);

struct BacktestConfig {
    double alpha = 0.95;
    std::size_t window = 36;
    std::vector<StrategyConstraint> strategies{StrategyConstraint::unconstrained(), StrategyConstraint::long_only(),
                                               StrategyConstraint::box(), StrategyConstraint::equal_weight()};
    std::string designated_asset = "BTC";
    Objective objective = Objective::min_cvar;
    unsigned workers = 1;
};

/// One optimization at one rebalance date.
struct BacktestDetail {
    data::YearMonth date;  ///< last in-sample month
    StrategyKind strategy = StrategyKind::long_only;
    bool with_designated = true;
    WeightVector weights;
    double realized_return = 0.0;
    double cvar = 0.0;
    double in_sample_return = 0.0;
    bool fallback = false;
};

/// Averages over the rebalance dates for one strategy and universe.
struct BacktestSummaryRow {
    StrategyKind strategy = StrategyKind::long_only;
    bool with_designated = true;
    std::optional<double> avg_designated_weight;  ///< empty for the universe without the asset
    double avg_return = 0.0;                      ///< realized next-period return
    double avg_cvar = 0.0;
    double risk_return_ratio = 0.0;  ///< avg_return / avg_cvar; NaN unless avg_cvar > 0
    double avg_in_sample_return = 0.0;
    std::size_t rebalances = 0;
};

struct BacktestResult {
    Objective objective = Objective::min_cvar;
    double alpha = 0.0;
    std::size_t window = 0;
    std::string designated_asset;
    std::vector<std::string> asset_ids;  ///< the full universe, in panel order
    std::vector<BacktestSummaryRow> summary;
    std::vector<BacktestDetail> details;  ///< ordered by strategy, universe, then date

    const BacktestSummaryRow& row(StrategyKind strategy, bool with_designated) const;
};

/// Rebalances at every row t = window−1 … T−2 on rows t−window+1..t and realizes the
/// return of row t+1, for every strategy on the full panel and on the panel without the
/// designated asset. Needs T ≥ window + 1.
BacktestResult rolling_backtest(const data::ReturnPanel& panel, const BacktestConfig& config);

/// Columns: strategy, universe, avg_designated_weight, avg_return, avg_cvar, risk_return_ratio.
io::CsvTable summary_to_csv(const BacktestResult& result);
std::vector<BacktestSummaryRow> summary_from_csv(const io::CsvTable& table);

/// Columns: date, strategy, universe, one weight per asset, realized_return, cvar, in_sample_return.
/// Assets outside a row's universe are written as nan.
io::CsvTable details_to_csv(const BacktestResult& result);
std::vector<BacktestDetail> details_from_csv(const io::CsvTable& table);

}  // namespace allockit::cvar
