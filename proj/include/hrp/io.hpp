#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hrp/analytics.hpp"
#include "hrp/hrp.hpp"
#include "hrp/marketdata.hpp"
#include "hrp/weights.hpp"

namespace hrp::io {

// Number formatting never consults the C locale.

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
std::string format_fixed(double value, int decimals);
/// Strict decimal parse of the whole field; nullopt on any trailing junk.
std::optional<double> parse_double(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);
/// Reads one line, stripping a trailing '\r'. Returns false at end of input.
bool read_line(std::istream& in, std::string& line);

// Weights: `ticker,weight`, sorted by descending weight.
void write_weights_csv(std::ostream& out, const WeightVector& w);
WeightVector read_weights_csv(std::istream& in);

/// Square matrix with ticker labels on both axes.
struct LabeledMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd values;
};

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels, const Eigen::MatrixXd& m);
LabeledMatrix read_matrix_csv(std::istream& in);

// Dendrogram: {"merges": [[left, right, distance, size], ...], "leaf_order": [...], "labels": [...]}
nlohmann::ordered_json dendrogram_json(const LinkageTree& tree, const std::vector<std::string>& labels);
LinkageTree dendrogram_from_json(const nlohmann::ordered_json& j);
std::string dendrogram_svg(const LinkageTree& tree, const std::vector<std::string>& labels);

struct ReportMetadata {
    double rf = 0.0;
    int periods_per_year = 252;
    std::string linkage = "single";
    std::string max_sharpe_variant = "long_only";
    bool max_sharpe_fallback = false;
    double covariance_ridge = 0.0;
    std::string start_date;
    std::string end_date;
    std::size_t num_assets = 0;
    std::size_t num_periods = 0;
};

inline constexpr std::string_view kReportCsvHeader =
    "Portfolio,Annual Return,Volatility,Sharpe,Sortino,Calmar,Max Drawdown,Tracking Error";

nlohmann::ordered_json report_json(const std::vector<StrategyPerformance>& rows, const ReportMetadata& meta);

/// Table layout with three decimals. Absent tracking error prints as `--`,
/// undefined metrics as `NA`.
void write_report_csv(std::ostream& out, const std::vector<StrategyPerformance>& rows);

struct ReportCsvRow {
    std::string portfolio;
    std::vector<std::optional<double>> values;  // seven columns, nullopt for `--` / `NA`
};
std::vector<ReportCsvRow> read_report_csv(std::istream& in);

/// `date,<strategy1>,<strategy2>,...`; the first row is the anchor at 1.0.
void write_wealth_csv(std::ostream& out, const std::vector<StrategyPerformance>& rows);

/// Ingestion-format price CSV; missing cells are written empty.
void write_prices_csv(std::ostream& out, const PriceTable& table);

}  // namespace hrp::io
