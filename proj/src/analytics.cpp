#include "hrp/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hrp/error.hpp"

namespace hrp {

namespace {

double mean(std::span<const double> r) {
    if (r.empty()) throw DomainError("empty return series");
    double sum = 0.0;
    for (double v : r) sum += v;
    return sum / static_cast<double>(r.size());
}

// Sample standard deviation (divisor n - 1); exactly 0 for a constant series.
double stdev(std::span<const double> r) {
    if (r.size() < 2) throw DomainError("standard deviation needs at least two observations");
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    if (*lo == *hi) return 0.0;
    // Corrected two-pass: the first-moment residual cancels rounding error
    // in the mean.
    const double m = mean(r);
    double first = 0.0, second = 0.0;
    for (double v : r) {
        first += v - m;
        second += (v - m) * (v - m);
    }
    const double n = static_cast<double>(r.size());
    return std::sqrt(std::max(second - first * first / n, 0.0) / (n - 1.0));
}

void check_periods(int periods_per_year) {
    if (periods_per_year < 1) throw DomainError("periods_per_year must be positive");
}

template <typename F>
Metric guarded(F&& f) {
    try {
        return Metric::of(f());
    } catch (const UndefinedMetricError& e) {
        return Metric::undefined(e.what());
    }
}

int display_rank(const std::string& name) {
    if (name == kHrpName) return 0;
    if (name == kMaxSharpeName) return 1;
    if (name == kEqualWeightName) return 3;
    return 2;
}

}  // namespace

std::vector<double> portfolio_returns(const ReturnMatrix& returns, const WeightVector& w) {
    if (w.assets.size() != w.weights.size()) throw DomainError("weight vector tickers and values differ in length");
    std::map<std::string, double> by_ticker;
    for (std::size_t i = 0; i < w.assets.size(); ++i) by_ticker[w.assets[i]] = w.weights[i];

    const std::set<std::string> ret_set(returns.assets.begin(), returns.assets.end());
    std::vector<std::string> diff;
    for (const auto& a : returns.assets) {
        if (!by_ticker.count(a)) diff.push_back(a);
    }
    for (const auto& [a, _] : by_ticker) {
        if (!ret_set.count(a)) diff.push_back(a);
    }
    if (!diff.empty() || by_ticker.size() != w.assets.size()) {
        std::string msg = "weight tickers do not match return tickers; symmetric difference:";
        for (const auto& a : diff) msg += " " + a;
        throw AlignmentError(msg);
    }

    std::vector<double> aligned(returns.assets.size());
    for (std::size_t i = 0; i < aligned.size(); ++i) aligned[i] = by_ticker.at(returns.assets[i]);

    std::vector<double> out(static_cast<std::size_t>(returns.periods()), 0.0);
    for (Eigen::Index t = 0; t < returns.periods(); ++t) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < returns.num_assets(); ++i) acc += aligned[i] * returns.values(t, i);
        out[t] = acc;
    }
    return out;
}

std::vector<double> wealth_curve(std::span<const double> r) {
    std::vector<double> wealth;
    wealth.reserve(r.size() + 1);
    wealth.push_back(1.0);
    double cum = 0.0;
    for (double v : r) {
        cum += v;
        wealth.push_back(std::exp(cum));
    }
    return wealth;
}

double annualized_return(std::span<const double> r, int periods_per_year) {
    check_periods(periods_per_year);
    return std::expm1(static_cast<double>(periods_per_year) * mean(r));
}

double annualized_volatility(std::span<const double> r, int periods_per_year) {
    check_periods(periods_per_year);
    return stdev(r) * std::sqrt(static_cast<double>(periods_per_year));
}

double sharpe_ratio(std::span<const double> r, double rf, int periods_per_year) {
    const double vol = annualized_volatility(r, periods_per_year);
    if (vol == 0.0) throw UndefinedMetricError("zero volatility");
    return (annualized_return(r, periods_per_year) - rf) / vol;
}

double downside_deviation(std::span<const double> r, double rf, int periods_per_year) {
    check_periods(periods_per_year);
    if (r.empty()) throw DomainError("empty return series");
    const double rf_period = rf / static_cast<double>(periods_per_year);
    double acc = 0.0;
    for (double v : r) {
        const double shortfall = std::min(v - rf_period, 0.0);
        acc += shortfall * shortfall;
    }
    return std::sqrt(acc / static_cast<double>(r.size())) * std::sqrt(static_cast<double>(periods_per_year));
}

double sortino_ratio(std::span<const double> r, double rf, int periods_per_year) {
    const double dd = downside_deviation(r, rf, periods_per_year);
    if (dd == 0.0) throw UndefinedMetricError("zero downside deviation");
    return (annualized_return(r, periods_per_year) - rf) / dd;
}

double max_drawdown(std::span<const double> wealth) {
    if (wealth.empty()) throw DomainError("empty wealth series");
    double peak = wealth.front();
    double worst = 0.0;
    for (double w : wealth) {
        peak = std::max(peak, w);
        worst = std::min(worst, w / peak - 1.0);
    }
    return worst;
}

double calmar_ratio(std::span<const double> r, int periods_per_year) {
    const auto wealth = wealth_curve(r);
    const double mdd = max_drawdown(wealth);
    if (mdd == 0.0) throw UndefinedMetricError("zero maximum drawdown");
    return annualized_return(r, periods_per_year) / std::abs(mdd);
}

double tracking_error(std::span<const double> r, std::span<const double> benchmark, int periods_per_year) {
    check_periods(periods_per_year);
    if (r.size() != benchmark.size()) throw DomainError("portfolio and benchmark series differ in length");
    std::vector<double> active(r.size());
    for (std::size_t t = 0; t < r.size(); ++t) active[t] = r[t] - benchmark[t];
    return stdev(active) * std::sqrt(static_cast<double>(periods_per_year));
}

std::vector<StrategyPerformance> build_report(const ReturnMatrix& returns,
                                              const std::vector<NamedStrategy>& strategies,
                                              const ReportOptions& options) {
    if (strategies.empty()) throw DomainError("report needs at least one strategy");
    check_periods(options.periods_per_year);
    const int ppy = options.periods_per_year;

    std::vector<std::size_t> order(strategies.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return display_rank(strategies[a].name) < display_rank(strategies[b].name);
    });

    std::vector<double> benchmark;
    for (const auto& s : strategies) {
        if (s.name == kEqualWeightName) benchmark = portfolio_returns(returns, s.weights);
    }
    if (benchmark.empty()) benchmark = portfolio_returns(returns, equal_weight(returns.assets));

    std::vector<Date> wealth_dates;
    wealth_dates.reserve(returns.dates.size() + 1);
    wealth_dates.push_back(returns.anchor);
    wealth_dates.insert(wealth_dates.end(), returns.dates.begin(), returns.dates.end());

    std::vector<StrategyPerformance> out;
    out.reserve(strategies.size());
    for (std::size_t idx : order) {
        const auto& s = strategies[idx];
        StrategyPerformance perf;
        perf.daily_returns = portfolio_returns(returns, s.weights);
        const std::span<const double> r = perf.daily_returns;
        perf.wealth.dates = wealth_dates;
        perf.wealth.wealth = wealth_curve(r);

        PerformanceReport& rep = perf.report;
        rep.portfolio_name = s.name;
        rep.annual_return = guarded([&] { return annualized_return(r, ppy); });
        rep.volatility = guarded([&] { return annualized_volatility(r, ppy); });
        rep.sharpe = guarded([&] { return sharpe_ratio(r, options.rf, ppy); });
        rep.sortino = guarded([&] { return sortino_ratio(r, options.rf, ppy); });
        rep.calmar = guarded([&] { return calmar_ratio(r, ppy); });
        rep.max_drawdown = guarded([&] { return max_drawdown(perf.wealth.wealth); });
        if (s.name != kEqualWeightName) {
            rep.tracking_error = guarded([&] { return tracking_error(r, benchmark, ppy); });
        }
        out.push_back(std::move(perf));
    }
    return out;
}

}  // namespace hrp
