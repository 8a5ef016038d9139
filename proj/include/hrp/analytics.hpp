#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hrp/allocators.hpp"
#include "hrp/marketdata.hpp"
#include "hrp/weights.hpp"

namespace hrp {

struct WealthSeries {
    std::vector<Date> dates;
    std::vector<double> wealth;  // wealth[0] == 1.0
};

/// r_p[t] = sum_i w_i * returns[t][i]. Weights are matched to return
/// columns by ticker; a mismatch raises AlignmentError.
std::vector<double> portfolio_returns(const ReturnMatrix& returns, const WeightVector& w);

/// exp of the cumulative sum, anchored at 1.0 before the first return.
/// The result has one more element than `r`.
std::vector<double> wealth_curve(std::span<const double> r);

double annualized_return(std::span<const double> r, int periods_per_year = kDefaultPeriodsPerYear);
double annualized_volatility(std::span<const double> r, int periods_per_year = kDefaultPeriodsPerYear);
double sharpe_ratio(std::span<const double> r, double rf, int periods_per_year = kDefaultPeriodsPerYear);
double downside_deviation(std::span<const double> r, double rf, int periods_per_year = kDefaultPeriodsPerYear);
double sortino_ratio(std::span<const double> r, double rf, int periods_per_year = kDefaultPeriodsPerYear);
double max_drawdown(std::span<const double> wealth);
double calmar_ratio(std::span<const double> r, int periods_per_year = kDefaultPeriodsPerYear);
double tracking_error(std::span<const double> r, std::span<const double> benchmark,
                      int periods_per_year = kDefaultPeriodsPerYear);

/// Metric value, or the reason it is undefined.
struct Metric {
    std::optional<double> value;
    std::string reason;

    static Metric of(double v) { return {v, {}}; }
    static Metric undefined(std::string why) { return {std::nullopt, std::move(why)}; }
    [[nodiscard]] bool defined() const { return value.has_value(); }
};

struct PerformanceReport {
    std::string portfolio_name;
    Metric annual_return;
    Metric volatility;
    Metric sharpe;
    Metric sortino;
    Metric calmar;
    Metric max_drawdown;
    /// Absent (std::nullopt) for the benchmark row itself.
    std::optional<Metric> tracking_error;
};

inline constexpr const char* kEqualWeightName = "1/N";
inline constexpr const char* kHrpName = "HRP";
inline constexpr const char* kMaxSharpeName = "Max Sharpe";

struct NamedStrategy {
    std::string name;
    WeightVector weights;
};

struct ReportOptions {
    double rf = 0.0;
    int periods_per_year = kDefaultPeriodsPerYear;
};

struct StrategyPerformance {
    PerformanceReport report;
    WealthSeries wealth;
    std::vector<double> daily_returns;
};

/// Metrics and wealth curves for every strategy. Rows are ordered HRP,
/// Max Sharpe, 1/N, then any other names in input order. Tracking error is
/// measured against the 1/N portfolio over the same assets.
std::vector<StrategyPerformance> build_report(const ReturnMatrix& returns,
                                              const std::vector<NamedStrategy>& strategies,
                                              const ReportOptions& options = {});

}  // namespace hrp
