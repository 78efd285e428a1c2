#include "allockit/cli/config.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "allockit/error.hpp"
#include "allockit/io/csv.hpp"

namespace allockit::cli {

namespace pt = boost::property_tree;

std::string_view to_string(ReportFormat format) { return format == ReportFormat::json ? "json" : "csv"; }

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    throw ConfigError("format must be json or csv, got '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        boost::algorithm::trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    const auto v = io::parse_double(text);
    if (!v) throw ConfigError(key + ": expected a number, got '" + text + "'");
    return *v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::filesystem::path to_path(const std::string& text, const std::filesystem::path& base) {
    std::filesystem::path p(text);
    return p.is_relative() && !base.empty() ? base / p : p;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

std::map<std::string, Setter> setters(const std::filesystem::path& base) {
    std::map<std::string, Setter> s;
    s["input.prices"] = [base](RunConfig& c, auto&, auto& v) { c.prices = to_path(v, base); };
    s["input.cpi"] = [base](RunConfig& c, auto&, auto& v) { c.cpi = v.empty() ? std::filesystem::path{} : to_path(v, base); };
    s["input.universe"] = [](RunConfig& c, auto&, auto& v) { c.universe = split_list(v); };

    s["general.designated_asset"] = [](RunConfig& c, auto&, auto& v) { c.designated_asset = v; };
    s["general.seed"] = [](RunConfig& c, auto& k, auto& v) { c.seed = to_unsigned(k, v); };
    s["general.workers"] = [](RunConfig& c, auto& k, auto& v) { c.workers = static_cast<unsigned>(to_unsigned(k, v)); };
    s["general.out"] = [base](RunConfig& c, auto&, auto& v) { c.out_dir = to_path(v, base); };
    s["general.format"] = [](RunConfig& c, auto&, auto& v) { c.format = parse_report_format(v); };

    s["cvar.alpha"] = [](RunConfig& c, auto& k, auto& v) { c.alpha = to_double(k, v); };
    s["cvar.window"] = [](RunConfig& c, auto& k, auto& v) { c.window = to_unsigned(k, v); };
    s["cvar.strategies"] = [](RunConfig& c, auto&, auto& v) {
        c.strategies.clear();
        for (const auto& name : split_list(v)) c.strategies.push_back(cvar::parse_strategy_kind(name));
    };
    s["cvar.box_lower"] = [](RunConfig& c, auto& k, auto& v) { c.box_lower = to_double(k, v); };
    s["cvar.box_upper"] = [](RunConfig& c, auto& k, auto& v) { c.box_upper = to_double(k, v); };
    s["cvar.objectives"] = [](RunConfig& c, auto&, auto& v) {
        c.objectives.clear();
        for (const auto& name : split_list(v)) c.objectives.push_back(cvar::parse_objective(name));
    };

    s["meanvar.grid"] = [](RunConfig& c, auto& k, auto& v) {
        c.mu_grid.clear();
        for (const auto& x : split_list(v)) c.mu_grid.push_back(to_double(k, x));
    };
    s["meanvar.grid_points"] = [](RunConfig& c, auto& k, auto& v) { c.grid_points = to_unsigned(k, v); };
    s["meanvar.ridge"] = [](RunConfig& c, auto& k, auto& v) { c.ridge = to_bool(k, v); };
    s["meanvar.ridge_epsilon"] = [](RunConfig& c, auto& k, auto& v) { c.ridge_epsilon = to_double(k, v); };

    s["regime.k"] = [](RunConfig& c, auto& k, auto& v) { c.states = to_unsigned(k, v); };
    s["regime.p"] = [](RunConfig& c, auto& k, auto& v) { c.order = to_unsigned(k, v); };
    s["regime.starts"] = [](RunConfig& c, auto& k, auto& v) { c.starts = to_unsigned(k, v); };
    s["regime.tolerance"] = [](RunConfig& c, auto& k, auto& v) { c.tolerance = to_double(k, v); };
    s["regime.max_iterations"] = [](RunConfig& c, auto& k, auto& v) { c.max_iterations = to_unsigned(k, v); };
    s["regime.weights"] = [](RunConfig& c, auto&, auto& v) {
        if (v == "none")
            c.regime_weights.reset();
        else
            c.regime_weights = regime::parse_allocation_method(v);
    };
    s["regime.target"] = [](RunConfig& c, auto&, auto& v) { c.regime_target = regime::parse_meanvar_target(v); };
    s["regime.target_mean"] = [](RunConfig& c, auto& k, auto& v) { c.regime_target_mean = to_double(k, v); };
    s["regime.risk_tolerance"] = [](RunConfig& c, auto& k, auto& v) { c.risk_tolerance = to_double(k, v); };
    s["regime.cvar_scenarios"] = [](RunConfig& c, auto& k, auto& v) { c.cvar_scenarios = to_unsigned(k, v); };

    s["sdf.enabled"] = [](RunConfig& c, auto& k, auto& v) { c.sdf_enabled = to_bool(k, v); };
    s["sdf.beta"] = [](RunConfig& c, auto& k, auto& v) { c.beta = to_double(k, v); };
    s["sdf.gamma"] = [](RunConfig& c, auto& k, auto& v) { c.gamma = to_double(k, v); };
    s["sdf.growth_asset"] = [](RunConfig& c, auto&, auto& v) { c.growth_asset = v; };
    s["sdf.riskfree_asset"] = [](RunConfig& c, auto&, auto& v) { c.riskfree_asset = v; };

    s["fixture.returns"] = [](RunConfig& c, auto& k, auto& v) { c.fixture_returns = to_unsigned(k, v); };
    return s;
}

}  // namespace

void RunConfig::validate() const {
    if (!(alpha > 0.5 && alpha < 1.0)) throw ConfigError("cvar.alpha must lie in (0.5, 1)");
    if (window < 12) throw ConfigError("cvar.window must be at least 12 months");
    if (!(box_lower < box_upper)) throw ConfigError("cvar.box_lower must be below cvar.box_upper");
    if (strategies.empty()) throw ConfigError("cvar.strategies is empty");
    if (objectives.empty()) throw ConfigError("cvar.objectives is empty");
    if (workers == 0) throw ConfigError("general.workers must be at least 1");
    if (designated_asset.empty()) throw ConfigError("general.designated_asset is empty");
    if (mu_grid.empty() && grid_points == 0) throw ConfigError("meanvar.grid_points must be at least 1");
    if (!(ridge_epsilon > 0.0)) throw ConfigError("meanvar.ridge_epsilon must be positive");
    if (states == 0) throw ConfigError("regime.k must be at least 1");
    if (starts == 0) throw ConfigError("regime.starts must be at least 1");
    if (!(tolerance > 0.0)) throw ConfigError("regime.tolerance must be positive");
    if (max_iterations == 0) throw ConfigError("regime.max_iterations must be at least 1");
    if (cvar_scenarios < 2) throw ConfigError("regime.cvar_scenarios must be at least 2");
    if (!(beta > 0.0)) throw ConfigError("sdf.beta must be positive");
    if (fixture_returns < 3) throw ConfigError("fixture.returns must be at least 3");
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }
    const auto table = setters(base_dir);
    RunConfig config;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("config key '" + section + "' must sit inside a section");
        for (const auto& [key, node] : body) {
            const std::string full = section + "." + key;
            const auto it = table.find(full);
            if (it == table.end()) throw ConfigError("unknown config key '" + full + "'");
            it->second(config, full, boost::algorithm::trim_copy(node.data()));
        }
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
    return parse_config(io::read_text(path), path.parent_path());
}

std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace allockit::cli
