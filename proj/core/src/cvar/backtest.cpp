#include "allockit/cvar/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "allockit/error.hpp"

namespace allockit::cvar {

using numerics::Matrix;
using numerics::Vector;

std::string_view to_string(Objective objective) {
    switch (objective) {
        case Objective::min_cvar: return "min_cvar";
        case Objective::max_ratio: return "max_ratio";
        case Objective::mean_target: return "mean_target";
    }
    return "unknown";
}

Objective parse_objective(std::string_view name) {
    if (name == "min_cvar") return Objective::min_cvar;
    if (name == "max_ratio") return Objective::max_ratio;
    if (name == "mean_target") return Objective::mean_target;
    throw ConfigError("unknown objective '" + std::string(name) + "'");
}

const BacktestSummaryRow& BacktestResult::row(StrategyKind strategy, bool with_designated) const {
    for (const auto& r : summary)
        if (r.strategy == strategy && r.with_designated == with_designated) return r;
    throw ConfigError("strategy not part of the backtest");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Task {
    std::size_t strategy;
    bool with_designated;
    std::size_t t;  ///< last in-sample row
};

BacktestDetail run_one(const data::ReturnPanel& universe, const BacktestConfig& config,
                       const StrategyConstraint& strategy, std::size_t t) {
    const std::size_t first = t + 1 - config.window;
    const data::ReturnPanel window = universe.slice(first, config.window);
    const ScenarioMatrix sc = ScenarioMatrix::from_panel(window);

    std::optional<double> ew_mean;
    if (strategy.kind == StrategyKind::unconstrained || config.objective == Objective::mean_target) {
        const Vector m = sc.mean_returns();
        double s = 0.0;
        for (double x : m) s += x / static_cast<double>(m.size());
        ew_mean = s;
    }
    const CvarReport rep = config.objective == Objective::max_ratio
                               ? maximize_return_per_cvar(sc, config.alpha, strategy, ew_mean)
                               : minimize_cvar(sc, config.alpha, ew_mean, strategy);

    BacktestDetail d;
    d.date = universe.dates[t];
    d.strategy = strategy.kind;
    d.weights = rep.weights;
    d.realized_return = numerics::dot(rep.weights.weights, universe.row(t + 1));
    d.cvar = rep.cvar;
    d.in_sample_return = rep.mean_return;
    d.fallback = rep.fallback;
    return d;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    for (unsigned w = 0; w < n; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    pool.clear();
    if (error) std::rethrow_exception(error);
}

std::string universe_label(bool with_designated) { return with_designated ? "with" : "without"; }

bool parse_universe(const std::string& s) {
    if (s == "with") return true;
    if (s == "without") return false;
    throw DataError("universe must be 'with' or 'without', got '" + s + "'");
}

double number(const std::string& text) {
    const auto v = io::parse_double(text);
    if (!v) throw DataError("unparseable number '" + text + "'");
    return *v;
}

}  // namespace

BacktestResult rolling_backtest(const data::ReturnPanel& panel, const BacktestConfig& config) {
    validate_alpha(config.alpha);
    panel.validate();
    if (config.strategies.empty()) throw ConfigError("no strategies configured");
    for (const auto& s : config.strategies) s.validate();
    if (config.window < 2) throw ConfigError("window must cover at least two months");
    const std::size_t T = panel.num_periods();
    if (T < config.window + 1)
        throw ConfigError("window of " + std::to_string(config.window) + " months is too long for " +
                          std::to_string(T) + " return periods");
    if (!panel.index_of(config.designated_asset))
        throw ConfigError("designated asset '" + config.designated_asset + "' is not in the panel");
    if (panel.num_assets() < 2) throw ConfigError("the designated asset needs at least one companion asset");

    const data::ReturnPanel without = panel.without(config.designated_asset);
    const std::size_t rebalances = T - config.window;

    std::vector<Task> tasks;
    for (std::size_t s = 0; s < config.strategies.size(); ++s)
        for (bool with : {true, false})
            for (std::size_t k = 0; k < rebalances; ++k) tasks.push_back({s, with, config.window - 1 + k});

    std::vector<BacktestDetail> details(tasks.size());
    parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
        const Task& task = tasks[i];
        details[i] = run_one(task.with_designated ? panel : without, config, config.strategies[task.strategy], task.t);
        details[i].with_designated = task.with_designated;
    });

    BacktestResult result;
    result.objective = config.objective;
    result.alpha = config.alpha;
    result.window = config.window;
    result.designated_asset = config.designated_asset;
    result.asset_ids = panel.asset_ids;
    for (std::size_t g = 0; g < tasks.size(); g += rebalances) {
        BacktestSummaryRow row;
        row.strategy = details[g].strategy;
        row.with_designated = details[g].with_designated;
        row.rebalances = rebalances;
        double weight = 0.0;
        for (std::size_t k = g; k < g + rebalances; ++k) {
            const auto& d = details[k];
            weight += d.weights.weight_of(config.designated_asset);
            row.avg_return += d.realized_return;
            row.avg_cvar += d.cvar;
            row.avg_in_sample_return += d.in_sample_return;
        }
        const auto n = static_cast<double>(rebalances);
        if (row.with_designated) row.avg_designated_weight = weight / n;
        row.avg_return /= n;
        row.avg_cvar /= n;
        row.avg_in_sample_return /= n;
        row.risk_return_ratio = row.avg_cvar > 0.0 ? row.avg_return / row.avg_cvar : kNaN;
        result.summary.push_back(row);
    }
    result.details = std::move(details);
    return result;
}

io::CsvTable summary_to_csv(const BacktestResult& result) {
    io::CsvTable t;
    t.header = {"strategy", "universe", "avg_designated_weight", "avg_return", "avg_cvar", "risk_return_ratio"};
    for (const auto& r : result.summary)
        t.rows.push_back({std::string(to_string(r.strategy)), universe_label(r.with_designated),
                          io::format_double(r.avg_designated_weight.value_or(kNaN)), io::format_double(r.avg_return),
                          io::format_double(r.avg_cvar), io::format_double(r.risk_return_ratio)});
    return t;
}

std::vector<BacktestSummaryRow> summary_from_csv(const io::CsvTable& table) {
    const std::vector<std::string> expected{"strategy", "universe", "avg_designated_weight",
                                            "avg_return", "avg_cvar", "risk_return_ratio"};
    if (table.header != expected) throw DataError("unexpected backtest summary header");
    std::vector<BacktestSummaryRow> out;
    for (const auto& row : table.rows) {
        if (row.size() != expected.size()) throw DataError("ragged backtest summary row");
        BacktestSummaryRow r;
        r.strategy = parse_strategy_kind(row[0]);
        r.with_designated = parse_universe(row[1]);
        const double w = number(row[2]);
        if (!std::isnan(w)) r.avg_designated_weight = w;
        r.avg_return = number(row[3]);
        r.avg_cvar = number(row[4]);
        r.risk_return_ratio = number(row[5]);
        out.push_back(r);
    }
    return out;
}

io::CsvTable details_to_csv(const BacktestResult& result) {
    io::CsvTable t;
    t.header = {"date", "strategy", "universe"};
    for (const auto& id : result.asset_ids) t.header.push_back(id);
    t.header.insert(t.header.end(), {"realized_return", "cvar", "in_sample_return"});
    for (const auto& d : result.details) {
        std::vector<std::string> row{d.date.to_string(), std::string(to_string(d.strategy)),
                                     universe_label(d.with_designated)};
        for (const auto& id : result.asset_ids) {
            const bool present = std::find(d.weights.asset_ids.begin(), d.weights.asset_ids.end(), id) !=
                                 d.weights.asset_ids.end();
            row.push_back(io::format_double(present ? d.weights.weight_of(id) : kNaN));
        }
        row.push_back(io::format_double(d.realized_return));
        row.push_back(io::format_double(d.cvar));
        row.push_back(io::format_double(d.in_sample_return));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<BacktestDetail> details_from_csv(const io::CsvTable& table) {
    const std::size_t cols = table.header.size();
    if (cols < 7 || table.header[0] != "date" || table.header[1] != "strategy" || table.header[2] != "universe" ||
        table.header[cols - 3] != "realized_return" || table.header[cols - 2] != "cvar" ||
        table.header[cols - 1] != "in_sample_return")
        throw DataError("unexpected backtest detail header");
    std::vector<BacktestDetail> out;
    for (const auto& row : table.rows) {
        if (row.size() != cols) throw DataError("ragged backtest detail row");
        BacktestDetail d;
        d.date = data::YearMonth::parse(row[0]);
        d.strategy = parse_strategy_kind(row[1]);
        d.with_designated = parse_universe(row[2]);
        for (std::size_t c = 3; c < cols - 3; ++c) {
            const double w = number(row[c]);
            if (std::isnan(w)) continue;
            d.weights.asset_ids.push_back(table.header[c]);
            d.weights.weights.push_back(w);
        }
        d.realized_return = number(row[cols - 3]);
        d.cvar = number(row[cols - 2]);
        d.in_sample_return = number(row[cols - 1]);
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace allockit::cvar
