#include "allockit/cli/app.hpp"

#include <functional>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "allockit/cli/commands.hpp"
#include "allockit/error.hpp"

namespace allockit::cli {

namespace {

using Command = std::function<CommandResult(const RunConfig&)>;

struct Overrides {
    std::string config;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
};

RunConfig resolve(const Overrides& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.out.empty()) c.out_dir = o.out;
    if (!o.format.empty()) c.format = parse_report_format(o.format);
    if (o.seed) c.seed = *o.seed;
    return c;
}

int execute(const Command& command, const Overrides& o, std::ostream& out, std::ostream& err) {
    try {
        const CommandResult r = command(resolve(o));
        for (const auto& w : r.warnings) err << "warning: " << w << '\n';
        for (const auto& f : r.files) out << "wrote " << f.string() << '\n';
        if (r.exit_code == kExitConvergence) err << "error: EM did not converge; best model written and flagged\n";
        return r.exit_code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Portfolio allocation analyses: statistics, mean-variance, CVaR backtests and regime switching"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config, "INI configuration file");
    app.add_option("--out", o.out, "Output directory (overrides [general] out)");
    app.add_option("--format", o.format, "Report format: json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", o.seed, "Run seed (overrides [general] seed)");

    Command chosen;
    const auto bind = [&](const char* name, const char* help, Command fn) {
        app.add_subcommand(name, help)->callback([&chosen, fn] { chosen = fn; });
    };
    bind("stats", "Descriptive statistics and correlation matrix", cmd_stats);
    bind("meanvar", "Global minimum-variance and efficient-frontier weights", cmd_meanvar);
    bind("cvar", "Rolling CVaR backtest with and without the designated asset", cmd_cvar);
    bind("regime", "Markov-switching fit, state probabilities and per-state weights", cmd_regime);
    bind("fixture", "Write the calibrated synthetic dataset", cmd_fixture);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return execute(chosen, o, out, err);
}

}  // namespace allockit::cli
