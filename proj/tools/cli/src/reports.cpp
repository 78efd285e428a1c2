#include "allockit/cli/reports.hpp"

#include <cmath>
#include <limits>

#include "allockit/error.hpp"

namespace allockit::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double field(const std::string& text, const char* what) {
    const auto v = io::parse_double(text);
    if (!v) throw DataError(std::string("unparseable ") + what + " '" + text + "'");
    return *v;
}

std::optional<double> optional_field(const std::string& text, const char* what) {
    if (text.empty()) return std::nullopt;
    return field(text, what);
}

std::size_t count_field(const std::string& text) {
    const double v = field(text, "count");
    if (!(v >= 0.0) || v != std::floor(v)) throw DataError("count must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

double number(const Json& j) { return j.is_null() ? kNaN : j.get<double>(); }

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> optional_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

Json rows_to_json(const numerics::Matrix& m) {
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (double v : m.row(r)) row.push_back(v);
        out.push_back(std::move(row));
    }
    return out;
}

numerics::Matrix rows_from_json(const Json& j) {
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
    numerics::Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j.at(r).size() != cols) throw DataError("ragged matrix in JSON report");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = number(j.at(r).at(c));
    }
    return m;
}

numerics::Vector vector_from_json(const Json& j) {
    numerics::Vector v;
    for (const auto& x : j) v.push_back(number(x));
    return v;
}

template <typename Fn>
auto guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Json::exception& e) {
        throw DataError(std::string("malformed JSON report: ") + e.what());
    }
}

}  // namespace

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json read_json(const std::filesystem::path& path) {
    const std::string text = io::read_text(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

io::CsvTable stats_to_csv(const std::vector<data::StatsRecord>& stats) {
    io::CsvTable t;
    t.header = {"asset", "mean", "median", "std_dev", "kurtosis", "skewness", "range", "min", "max", "count"};
    auto opt = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string{}; };
    for (const auto& s : stats)
        t.rows.push_back({s.asset_id, io::format_double(s.mean), io::format_double(s.median),
                          io::format_double(s.std_dev), opt(s.kurtosis), opt(s.skewness), io::format_double(s.range),
                          io::format_double(s.min), io::format_double(s.max), std::to_string(s.count)});
    return t;
}

std::vector<data::StatsRecord> stats_from_csv(const io::CsvTable& table) {
    if (table.header != stats_to_csv({}).header) throw DataError("unexpected stats table header");
    std::vector<data::StatsRecord> out;
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw DataError("ragged stats row");
        data::StatsRecord s;
        s.asset_id = row[0];
        s.mean = field(row[1], "mean");
        s.median = field(row[2], "median");
        s.std_dev = field(row[3], "std_dev");
        s.kurtosis = optional_field(row[4], "kurtosis");
        s.skewness = optional_field(row[5], "skewness");
        s.range = field(row[6], "range");
        s.min = field(row[7], "min");
        s.max = field(row[8], "max");
        s.count = count_field(row[9]);
        out.push_back(std::move(s));
    }
    return out;
}

Json stats_to_json(const std::vector<data::StatsRecord>& stats) {
    Json assets = Json::array();
    for (const auto& s : stats)
        assets.push_back({{"asset", s.asset_id},
                          {"mean", s.mean},
                          {"median", s.median},
                          {"std_dev", s.std_dev},
                          {"kurtosis", optional_number(s.kurtosis)},
                          {"skewness", optional_number(s.skewness)},
                          {"range", s.range},
                          {"min", s.min},
                          {"max", s.max},
                          {"count", s.count}});
    return Json{{"assets", assets}};
}

std::vector<data::StatsRecord> stats_from_json(const Json& j) {
    return guarded([&] {
        std::vector<data::StatsRecord> out;
        for (const auto& a : j.at("assets")) {
            data::StatsRecord s;
            s.asset_id = a.at("asset").get<std::string>();
            s.mean = number(a.at("mean"));
            s.median = number(a.at("median"));
            s.std_dev = number(a.at("std_dev"));
            s.kurtosis = optional_from(a.at("kurtosis"));
            s.skewness = optional_from(a.at("skewness"));
            s.range = number(a.at("range"));
            s.min = number(a.at("min"));
            s.max = number(a.at("max"));
            s.count = a.at("count").get<std::size_t>();
            out.push_back(std::move(s));
        }
        return out;
    });
}

io::CsvTable matrix_to_csv(const LabelledMatrix& m) {
    io::CsvTable t;
    t.header = {"asset"};
    t.header.insert(t.header.end(), m.ids.begin(), m.ids.end());
    for (std::size_t r = 0; r < m.values.rows(); ++r) {
        std::vector<std::string> row{m.ids[r]};
        for (double v : m.values.row(r)) row.push_back(io::format_double(v));
        t.rows.push_back(std::move(row));
    }
    return t;
}

LabelledMatrix matrix_from_csv(const io::CsvTable& table) {
    if (table.header.empty() || table.header[0] != "asset") throw DataError("matrix table must start with 'asset'");
    LabelledMatrix m;
    m.ids.assign(table.header.begin() + 1, table.header.end());
    if (table.rows.size() != m.ids.size()) throw DataError("matrix table is not square");
    m.values = numerics::Matrix(m.ids.size(), m.ids.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size() || row[0] != m.ids[r]) throw DataError("matrix row labels do not match");
        for (std::size_t c = 1; c < row.size(); ++c) m.values(r, c - 1) = field(row[c], "matrix entry");
    }
    return m;
}

Json matrix_to_json(const LabelledMatrix& m) { return Json{{"assets", m.ids}, {"matrix", rows_to_json(m.values)}}; }

LabelledMatrix matrix_from_json(const Json& j) {
    return guarded([&] {
        LabelledMatrix m;
        m.ids = j.at("assets").get<std::vector<std::string>>();
        m.values = rows_from_json(j.at("matrix"));
        if (m.values.rows() != m.ids.size() || m.values.cols() != m.ids.size())
            throw DataError("matrix size does not match its labels");
        return m;
    });
}

io::CsvTable portfolios_to_csv(const std::vector<Portfolio>& portfolios) {
    io::CsvTable t;
    t.header = {"label", "target_mean", "variance"};
    if (!portfolios.empty())
        t.header.insert(t.header.end(), portfolios.front().weights.asset_ids.begin(),
                        portfolios.front().weights.asset_ids.end());
    for (const auto& p : portfolios) {
        if (p.weights.asset_ids.size() + 3 != t.header.size()) throw ConfigError("portfolios span different universes");
        std::vector<std::string> row{p.label, io::format_double(p.target_mean), io::format_double(p.variance)};
        for (double w : p.weights.weights) row.push_back(io::format_double(w));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<Portfolio> portfolios_from_csv(const io::CsvTable& table) {
    if (table.header.size() < 4 || table.header[0] != "label" || table.header[1] != "target_mean" ||
        table.header[2] != "variance")
        throw DataError("weights table must start with label,target_mean,variance and list at least one asset");
    const std::vector<std::string> ids(table.header.begin() + 3, table.header.end());
    std::vector<Portfolio> out;
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw DataError("ragged weights row");
        Portfolio p;
        p.label = row[0];
        p.target_mean = field(row[1], "target_mean");
        p.variance = field(row[2], "variance");
        p.weights.asset_ids = ids;
        for (std::size_t i = 3; i < row.size(); ++i) p.weights.weights.push_back(field(row[i], "weight"));
        out.push_back(std::move(p));
    }
    return out;
}

Json portfolios_to_json(const std::vector<Portfolio>& portfolios) {
    Json list = Json::array();
    for (const auto& p : portfolios)
        list.push_back({{"label", p.label},
                        {"target_mean", p.target_mean},
                        {"variance", p.variance},
                        {"asset_ids", p.weights.asset_ids},
                        {"weights", p.weights.weights}});
    return Json{{"portfolios", list}};
}

std::vector<Portfolio> portfolios_from_json(const Json& j) {
    return guarded([&] {
        std::vector<Portfolio> out;
        for (const auto& x : j.at("portfolios")) {
            Portfolio p;
            p.label = x.at("label").get<std::string>();
            p.target_mean = number(x.at("target_mean"));
            p.variance = number(x.at("variance"));
            p.weights.asset_ids = x.at("asset_ids").get<std::vector<std::string>>();
            p.weights.weights = vector_from_json(x.at("weights"));
            if (p.weights.asset_ids.size() != p.weights.weights.size())
                throw DataError("portfolio '" + p.label + "' has mismatched ids and weights");
            out.push_back(std::move(p));
        }
        return out;
    });
}

Json fit_to_json(const regime::FitReport& fit, const std::vector<std::string>& asset_ids) {
    const auto& m = fit.model;
    Json states = Json::array();
    for (std::size_t s = 0; s < m.k(); ++s) {
        const auto& st = m.states[s];
        std::string label = "state_" + std::to_string(s + 1);
        if (m.k() == 2) label = s == 0 ? "bear" : "bull";
        Json ar = Json::array();
        for (const auto& a : st.ar) ar.push_back(rows_to_json(a));
        Json vol = Json::array();
        for (std::size_t c = 0; c < st.covariance.size(); ++c) vol.push_back(std::sqrt(st.covariance(c, c)));
        states.push_back({{"state", s + 1},
                          {"label", label},
                          {"intercepts", st.intercept},
                          {"ar_coefficients", ar},
                          {"covariance", rows_to_json(st.covariance.matrix())},
                          {"volatility", vol}});
    }
    return Json{{"asset_ids", asset_ids},
                {"k", m.k()},
                {"p", m.p},
                {"states", states},
                {"transition_matrix", rows_to_json(m.transition)},
                {"initial_distribution", m.initial},
                {"log_likelihood", fit.log_likelihood},
                {"iterations", fit.iterations},
                {"converged", fit.converged},
                {"variance_floor_applied", fit.variance_floor_applied},
                {"best_start", fit.best_start},
                {"observations", fit.observations},
                {"parameters", fit.parameters},
                {"information_criteria", {{"aic", fit.aic}, {"bic", fit.bic}}},
                {"warnings", fit.warnings}};
}

FitSummary fit_from_json(const Json& j) {
    return guarded([&] {
        FitSummary f;
        f.asset_ids = j.at("asset_ids").get<std::vector<std::string>>();
        f.model.p = j.at("p").get<std::size_t>();
        for (const auto& s : j.at("states")) {
            regime::StateParams st;
            st.intercept = vector_from_json(s.at("intercepts"));
            for (const auto& a : s.at("ar_coefficients")) st.ar.push_back(rows_from_json(a));
            st.covariance = numerics::SymMatrix::from_matrix(rows_from_json(s.at("covariance")));
            f.model.states.push_back(std::move(st));
        }
        f.model.transition = rows_from_json(j.at("transition_matrix"));
        f.model.initial = vector_from_json(j.at("initial_distribution"));
        f.model.validate();
        f.log_likelihood = number(j.at("log_likelihood"));
        f.aic = number(j.at("information_criteria").at("aic"));
        f.bic = number(j.at("information_criteria").at("bic"));
        f.iterations = j.at("iterations").get<std::size_t>();
        f.converged = j.at("converged").get<bool>();
        return f;
    });
}

Json backtest_to_json(const cvar::BacktestResult& result, const std::vector<std::string>& errors) {
    Json rows = Json::array();
    for (const auto& r : result.summary)
        rows.push_back({{"strategy", cvar::to_string(r.strategy)},
                        {"universe", r.with_designated ? "with" : "without"},
                        {"avg_designated_weight", optional_number(r.avg_designated_weight)},
                        {"avg_return", r.avg_return},
                        {"avg_cvar", r.avg_cvar},
                        {"risk_return_ratio", r.risk_return_ratio},
                        {"avg_in_sample_return", r.avg_in_sample_return},
                        {"rebalances", r.rebalances}});
    return Json{{"objective", cvar::to_string(result.objective)},
                {"alpha", result.alpha},
                {"window", result.window},
                {"designated_asset", result.designated_asset},
                {"asset_ids", result.asset_ids},
                {"summary", rows},
                {"errors", errors}};
}

std::vector<cvar::BacktestSummaryRow> backtest_summary_from_json(const Json& j) {
    return guarded([&] {
        std::vector<cvar::BacktestSummaryRow> out;
        for (const auto& x : j.at("summary")) {
            cvar::BacktestSummaryRow r;
            r.strategy = cvar::parse_strategy_kind(x.at("strategy").get<std::string>());
            const auto universe = x.at("universe").get<std::string>();
            if (universe != "with" && universe != "without") throw DataError("unknown universe '" + universe + "'");
            r.with_designated = universe == "with";
            r.avg_designated_weight = optional_from(x.at("avg_designated_weight"));
            r.avg_return = number(x.at("avg_return"));
            r.avg_cvar = number(x.at("avg_cvar"));
            r.risk_return_ratio = number(x.at("risk_return_ratio"));
            r.avg_in_sample_return = number(x.at("avg_in_sample_return"));
            r.rebalances = x.at("rebalances").get<std::size_t>();
            out.push_back(r);
        }
        return out;
    });
}

}  // namespace allockit::cli
