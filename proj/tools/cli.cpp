#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cbf/config.hpp"
#include "cbf/csv.hpp"
#include "cbf/lower_bounds.hpp"
#include "cbf/simulation.hpp"
#include "cbf/sweep.hpp"

namespace cbf::cli {

namespace {

/// Failure of the `validate` subcommand.
struct ValidationFailed {
    std::string message;
};

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("--out", "cannot open output file '" + path + "'");
    return out;
}

std::vector<double> parse_time_grid(const std::string& text, double t0)
{
    // start:step:stop
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw ConfigError("--t-grid", "--t-grid expects start:step:stop, got '" + text + "'");
    GridRange range;
    try {
        range.min = parse_double(text.substr(0, first));
        range.step = parse_double(text.substr(first + 1, second - first - 1));
        range.max = parse_double(text.substr(second + 1));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--t-grid", std::string("--t-grid: ") + e.what());
    }
    if (range.min < t0)
        throw ConfigError("--t-grid", "--t-grid starts before t0");
    try {
        return range.values();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--t-grid", std::string("--t-grid: ") + e.what());
    }
}

int cmd_simulate(const std::string& config_path, const std::string& out_path, std::ostream& out)
{
    const SimConfig config = load_sim_config(config_path);
    const SimLog log = run_simulation(config);
    auto file = open_output(out_path);
    write_step_csv(file, log);
    out << summary_line(log.summary, log.steps.size()) << '\n';
    return kSuccess;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path, int jobs,
              std::ostream& out, std::ostream& err)
{
    const SweepSpec spec = load_sweep_spec(config_path);
    if (auto warning = sweep_feasibility_warning(spec))
        err << *warning << '\n';
    const auto rows = jobs == 1 ? run_sweep_serial(spec) : run_sweep_parallel(spec, jobs);
    auto file = open_output(out_path);
    write_sweep_csv(file, rows);
    out << "runs=" << rows.size() << '\n';
    return kSuccess;
}

int cmd_lower_bound(const std::vector<double>& lambdas, const std::vector<double>& h_init,
                    double t0, const std::string& grid, const std::string& out_path,
                    std::ostream& out)
{
    std::optional<LambdaVector> rates;
    try {
        rates.emplace(lambdas);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--lambdas", std::string("--lambdas: ") + e.what());
    }
    if (h_init.size() != lambdas.size())
        throw ConfigError("--h-init", "--h-init needs one value per lambda");
    const auto times = parse_time_grid(grid, t0);

    const auto bound = solve_bound_coefficients(*rates, {h_init, t0});
    auto file = open_output(out_path);
    write_lower_bound_csv(file, bound, times);

    out << "c = [";
    for (std::size_t i = 0; i < bound.coefficients.size(); ++i)
        out << (i ? ", " : "") << format_double(bound.coefficients[i]);
    out << "]\n";
    return kSuccess;
}

int cmd_validate(const std::string& config_path, const std::string& log_path,
                 const std::string& anchor_name, std::ostream& out)
{
    const SimConfig config = load_sim_config(config_path);
    std::ifstream in(log_path);
    if (!in)
        throw ConfigError("--log", "cannot open log file '" + log_path + "'");
    SimLog log;
    try {
        log = read_step_csv(in);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--log", std::string("--log: ") + e.what());
    }

    if (const auto* h = std::get_if<HocbfApproach>(&config.approach)) {
        const AnchorMode anchor =
            anchor_name == "activation" ? AnchorMode::activation : AnchorMode::start;
        const auto report = verify_dominance_hocbf(log, h->lambdas(), anchor);
        if (report.never_active)
            throw ValidationFailed{"never active: the barrier constraint is never in the active set"};
        out << "anchor_step=" << report.anchor_step
            << " anchor_time=" << format_double(report.anchor_time) << " c=[";
        for (std::size_t i = 0; i < report.coefficients.size(); ++i)
            out << (i ? ", " : "") << format_double(report.coefficients[i]);
        out << "] min_margin=" << format_double(report.min_margin)
            << " tolerance=" << format_double(report.tolerance)
            << " worst_step=" << report.worst_step << '\n';
        if (!report.pass)
            throw ValidationFailed{"dominance violated at step " +
                                   std::to_string(report.worst_step)};
    } else {
        const auto& t = std::get<TtcbfApproach>(config.approach);
        const auto report = verify_decay_ttcbf(log, t.lambda1);
        out << "per_step=" << (report.per_step_pass ? "pass" : "fail")
            << " cumulative=" << (report.cumulative_pass ? "pass" : "fail")
            << " worst_step_margin=" << format_double(report.worst_step_margin) << '\n';
        if (report.first_violation)
            throw ValidationFailed{"per-step decay violated at step " +
                                   std::to_string(*report.first_violation)};
        if (report.first_cumulative_violation)
            throw ValidationFailed{"cumulative decay bound violated at step " +
                                   std::to_string(*report.first_cumulative_violation)};
    }
    out << "validation passed\n";
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"High-order control barrier function experiments"};
    app.require_subcommand(1);

    std::string config_path, out_path, log_path, anchor = "start", t_grid = "0:0.01:2";
    int jobs = 0;
    std::vector<double> lambdas, h_init;
    double t0 = 0.0;

    auto* simulate = app.add_subcommand("simulate", "Run one closed-loop simulation");
    simulate->add_option("--config", config_path, "Config file")->required();
    simulate->add_option("--out", out_path, "Per-step CSV output")->required();

    auto* sweep = app.add_subcommand("sweep", "Sweep class-K parameters over a grid");
    sweep->add_option("--config", config_path, "Sweep spec file")->required();
    sweep->add_option("--out", out_path, "Sweep CSV output")->required();
    sweep->add_option("--jobs", jobs, "Worker threads (0 = OpenMP default, 1 = serial)");

    auto* lower = app.add_subcommand("lower-bound", "Exponential-sum lower bound of an HOCBF");
    lower->add_option("--lambdas", lambdas, "Comma-separated decay rates")
        ->required()
        ->delimiter(',');
    lower->add_option("--h-init", h_init, "Comma-separated h, h', ..., h^(r-1) at t0")
        ->required()
        ->delimiter(',')
        ->allow_extra_args(false);
    lower->add_option("--t0", t0, "Anchor time");
    lower->add_option("--t-grid", t_grid, "Sample times start:step:stop");
    lower->add_option("--out", out_path, "CSV output")->required();

    auto* validate = app.add_subcommand("validate", "Check a per-step log against its bound");
    validate->add_option("--config", config_path, "Config the log was produced with")->required();
    validate->add_option("--log", log_path, "Per-step CSV from simulate")->required();
    validate->add_option("--anchor", anchor, "Bound anchor for hocbf logs")
        ->check(CLI::IsMember({"start", "activation"}));

    std::vector<std::string> argv_storage{"cbf-experiments"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (*simulate)
            return cmd_simulate(config_path, out_path, out);
        if (*sweep)
            return cmd_sweep(config_path, out_path, jobs, out, err);
        if (*lower)
            return cmd_lower_bound(lambdas, h_init, t0, t_grid, out_path, out);
        if (*validate)
            return cmd_validate(config_path, log_path, anchor, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DegenerateRatesError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const ValidationFailed& e) {
        err << "validation failed: " << e.message << '\n';
        return kValidationFailure;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    return kConfigError;
}

}  // namespace cbf::cli
