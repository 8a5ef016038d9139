#include "hrp/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hrp/allocators.hpp"
#include "hrp/analytics.hpp"
#include "hrp/error.hpp"
#include "hrp/io.hpp"
#include "hrp/marketdata.hpp"

namespace hrp::cli {

namespace fs = std::filesystem;

std::string_view strategy_id(Strategy s) {
    switch (s) {
        case Strategy::Hrp: return "hrp";
        case Strategy::MaxSharpe: return "max_sharpe";
        case Strategy::EqualWeight: return "equal_weight";
    }
    return "hrp";
}

std::string_view strategy_display_name(Strategy s) {
    switch (s) {
        case Strategy::Hrp: return kHrpName;
        case Strategy::MaxSharpe: return kMaxSharpeName;
        case Strategy::EqualWeight: return kEqualWeightName;
    }
    return kHrpName;
}

namespace {

Strategy parse_strategy(std::string_view id) {
    if (id == "hrp") return Strategy::Hrp;
    if (id == "max_sharpe") return Strategy::MaxSharpe;
    if (id == "equal_weight") return Strategy::EqualWeight;
    throw ConfigError("unknown strategy '" + std::string(id) + "' (hrp|max_sharpe|equal_weight)");
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

fs::path ensure_output_dir(const RunConfig& config) {
    fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + config.output_dir + "'");
    return dir;
}

ReturnMatrix load_returns(const RunConfig& config) {
    if (!fs::exists(config.input_path)) throw IoError("input file '" + config.input_path + "' does not exist");
    const PriceTable raw = load_prices_file(config.input_path);
    AlignmentPolicy policy;
    if (config.start) policy.start = Date::parse(*config.start);
    if (config.end) policy.end = Date::parse(*config.end);
    policy.max_missing_frac = config.max_missing_frac;
    return log_returns(align(raw, policy));
}

struct Allocation {
    std::vector<std::pair<Strategy, WeightVector>> weights;
    HrpResult hrp;
    bool fallback = false;
    double ridge = 0.0;
};

Allocation allocate(const ReturnMatrix& returns, const RunConfig& config) {
    Allocation out;
    out.hrp = run_hrp(returns, HrpConfig{config.linkage});
    for (Strategy s : config.strategies) {
        switch (s) {
            case Strategy::Hrp:
                out.weights.emplace_back(s, out.hrp.weights);
                break;
            case Strategy::EqualWeight:
                out.weights.emplace_back(s, equal_weight(returns.assets));
                break;
            case Strategy::MaxSharpe: {
                const ExpectedReturns mu = mean_returns(returns, config.periods_per_year);
                const Eigen::MatrixXd cov = static_cast<double>(config.periods_per_year) * out.hrp.risk.covariance;
                out.ridge = factorize_spd(cov).ridge;
                if (config.long_only) {
                    auto res = max_sharpe_long_only(mu, cov, config.rf);
                    out.fallback = res.degenerate_fallback;
                    out.weights.emplace_back(s, std::move(res.weights));
                } else {
                    out.weights.emplace_back(s, tangency_weights(mu, cov, config.rf));
                }
                break;
            }
        }
    }
    return out;
}

}  // namespace

void validate(const RunConfig& config) {
    if (config.strategies.empty()) throw ConfigError("at least one strategy is required");
    if (!std::isfinite(config.rf)) throw ConfigError("--rf must be finite");
    if (config.periods_per_year < 1) throw ConfigError("--periods-per-year must be >= 1");
    if (!(config.max_missing_frac >= 0.0 && config.max_missing_frac <= 1.0)) {
        throw ConfigError("--max-missing-frac must lie in [0, 1]");
    }
}

int cmd_weights(const RunConfig& config, std::ostream& out) {
    validate(config);
    const ReturnMatrix returns = load_returns(config);
    const Allocation alloc = allocate(returns, config);
    const fs::path dir = ensure_output_dir(config);
    for (const auto& [strategy, w] : alloc.weights) {
        std::ostringstream csv;
        io::write_weights_csv(csv, w);
        write_file(dir / ("weights_" + std::string(strategy_id(strategy)) + ".csv"), csv.str());

        out << strategy_display_name(strategy);
        if (strategy == Strategy::MaxSharpe) out << (config.long_only ? " (long-only)" : " (unconstrained)");
        out << '\n';
        for (const auto& [ticker, weight] : w.sorted_descending()) {
            out << "  " << ticker << ' ' << io::format_fixed(weight, 6) << '\n';
        }
        out << "  sum " << io::format_fixed(w.sum(), 6) << '\n';
    }
    return kExitOk;
}

int cmd_report(const RunConfig& config, std::ostream& out) {
    validate(config);
    const ReturnMatrix returns = load_returns(config);
    const Allocation alloc = allocate(returns, config);
    const fs::path dir = ensure_output_dir(config);

    std::vector<NamedStrategy> named;
    for (const auto& [strategy, w] : alloc.weights) named.push_back({std::string(strategy_display_name(strategy)), w});
    const auto rows = build_report(returns, named, ReportOptions{config.rf, config.periods_per_year});

    io::ReportMetadata meta;
    meta.rf = config.rf;
    meta.periods_per_year = config.periods_per_year;
    meta.linkage = std::string(to_string(config.linkage));
    meta.max_sharpe_variant = config.long_only ? "long_only" : "unconstrained";
    meta.max_sharpe_fallback = alloc.fallback;
    meta.covariance_ridge = alloc.ridge;
    meta.start_date = returns.anchor.to_string();
    meta.end_date = returns.dates.back().to_string();
    meta.num_assets = returns.assets.size();
    meta.num_periods = static_cast<std::size_t>(returns.periods());

    write_file(dir / "report.json", io::report_json(rows, meta).dump(2) + "\n");
    std::ostringstream report_csv, wealth_csv, dist_csv, qd_csv;
    io::write_report_csv(report_csv, rows);
    write_file(dir / "report.csv", report_csv.str());
    io::write_wealth_csv(wealth_csv, rows);
    write_file(dir / "wealth.csv", wealth_csv.str());

    const auto& risk = alloc.hrp.risk;
    const auto& order = alloc.hrp.tree.leaf_order;
    write_file(dir / "dendrogram.json", io::dendrogram_json(alloc.hrp.tree, risk.assets).dump(2) + "\n");
    if (config.svg) write_file(dir / "dendrogram.svg", io::dendrogram_svg(alloc.hrp.tree, risk.assets));
    io::write_matrix_csv(dist_csv, risk.assets, risk.distance);
    write_file(dir / "distance_matrix.csv", dist_csv.str());
    std::vector<std::string> ordered_labels;
    for (std::size_t i : order) ordered_labels.push_back(risk.assets[i]);
    io::write_matrix_csv(qd_csv, ordered_labels, quasi_diagonalize(risk.covariance, order));
    write_file(dir / "quasi_diag_cov.csv", qd_csv.str());

    out << report_csv.str();
    return kExitOk;
}

int cmd_simulate(const RunConfig& config, const SimulationConfig& sim, const std::string& output_path,
                 std::ostream& out) {
    const PriceTable table = simulate_prices(sim);
    std::ostringstream csv;
    io::write_prices_csv(csv, table);
    fs::path path = output_path.empty() ? fs::path(config.output_dir) / "prices.csv" : fs::path(output_path);
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    write_file(path, csv.str());
    out << "wrote " << table.rows() << " rows x " << table.cols() << " assets to " << path.string() << '\n';
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical Risk Parity portfolio engine"};
    app.set_config("--config", "", "TOML config file; keys mirror the flag names");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    std::string strategies = "hrp,max_sharpe,equal_weight";
    std::string linkage = "single";
    std::string start, end;
    app.add_option("--input", config.input_path, "Price CSV (date,<ticker>,...)");
    app.add_option("--start", start, "First date (YYYY-MM-DD, inclusive)");
    app.add_option("--end", end, "Last date (YYYY-MM-DD, inclusive)");
    app.add_option("--strategies", strategies, "Comma list of hrp,max_sharpe,equal_weight");
    app.add_option("--linkage", linkage, "single|complete|average|ward");
    app.add_option("--rf", config.rf, "Annual risk-free rate");
    app.add_option("--long-only", config.long_only, "Long-only Max Sharpe (true/false)");
    app.add_option("--periods-per-year", config.periods_per_year, "Trading periods per year");
    app.add_option("--max-missing-frac", config.max_missing_frac, "Drop assets with more missing cells than this");
    app.add_option("--output-dir", config.output_dir, "Directory for exported files");

    auto* weights = app.add_subcommand("weights", "Write weights_<strategy>.csv for each strategy");
    auto* report = app.add_subcommand("report", "Write the metric report, wealth curves and figure data");
    report->add_flag("--svg", config.svg, "Also render dendrogram.svg");
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic block-correlated price panel");

    SimulationConfig sim;
    std::string sim_output;
    std::uint64_t seed = sim.seed;
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--assets", sim.num_assets, "Number of assets");
    simulate->add_option("--blocks", sim.num_blocks, "Number of correlation blocks");
    simulate->add_option("--within-rho", sim.within_rho, "Correlation inside a block");
    simulate->add_option("--between-rho", sim.between_rho, "Correlation across blocks");
    simulate->add_option("--days", sim.num_days, "Number of daily returns");
    simulate->add_option("--vol-low", sim.vol_low, "Annual volatility of the first block");
    simulate->add_option("--vol-high", sim.vol_high, "Annual volatility of the last block");
    simulate->add_option("--drift", sim.annual_drift, "Annual drift");
    simulate->add_option("--output", sim_output, "Output CSV path (default <output-dir>/prices.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (!start.empty()) config.start = start;
        if (!end.empty()) config.end = end;
        config.linkage = parse_linkage(linkage);
        config.strategies.clear();
        std::stringstream list(strategies);
        for (std::string item; std::getline(list, item, ',');) {
            if (!item.empty()) config.strategies.push_back(parse_strategy(item));
        }

        if (simulate->parsed()) {
            config.seed = seed;
            sim.seed = seed;
            sim.periods_per_year = config.periods_per_year;
            if (config.start) sim.start = Date::parse(*config.start);
            return cmd_simulate(config, sim, sim_output, out);
        }
        if (config.input_path.empty()) throw ConfigError("--input is required");
        if (weights->parsed()) return cmd_weights(config, out);
        if (report->parsed()) return cmd_report(config, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "error: invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitUsage;
}

}  // namespace hrp::cli
