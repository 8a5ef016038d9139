#include "hrp/simulate.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "hrp/error.hpp"

namespace hrp {

namespace {

void check(const SimulationConfig& c) {
    if (c.num_assets < 2) throw ConfigError("simulation needs at least two assets (HRP requires N >= 2)");
    if (c.num_blocks < 1 || c.num_blocks > c.num_assets) throw ConfigError("block count must lie in [1, num_assets]");
    if (!(std::abs(c.within_rho) <= 1.0) || !(std::abs(c.between_rho) <= 1.0)) {
        throw ConfigError("correlations must lie in [-1, 1]");
    }
    if (c.num_days < 1) throw ConfigError("num_days must be positive");
    if (c.periods_per_year < 1) throw ConfigError("periods_per_year must be positive");
    if (!(c.initial_price > 0.0)) throw ConfigError("initial price must be positive");
    if (!std::isfinite(c.annual_drift)) throw ConfigError("drift must be finite");
    if (!c.asset_vols.empty() && static_cast<int>(c.asset_vols.size()) != c.num_assets) {
        throw ConfigError("asset_vols must have one entry per asset");
    }
}

/// Standard normals by Box-Muller over raw 53-bit uniforms.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;          // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::string ticker(int i, int n) {
    const int width = n >= 100 ? 3 : 2;
    std::string digits = std::to_string(i + 1);
    return "S" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(digits.size()))), '0') +
           digits;
}

}  // namespace

std::vector<int> block_assignment(const SimulationConfig& config) {
    check(config);
    std::vector<int> blocks(static_cast<std::size_t>(config.num_assets));
    for (int i = 0; i < config.num_assets; ++i) blocks[i] = i % config.num_blocks;
    return blocks;
}

std::vector<double> asset_volatilities(const SimulationConfig& config) {
    check(config);
    if (!config.asset_vols.empty()) {
        for (double v : config.asset_vols) {
            if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("asset volatilities must be positive");
        }
        return config.asset_vols;
    }
    if (!(config.vol_low > 0.0) || !(config.vol_high > 0.0)) throw ConfigError("volatilities must be positive");
    std::vector<double> vols;
    for (int b : block_assignment(config)) {
        const double frac = config.num_blocks > 1 ? static_cast<double>(b) / (config.num_blocks - 1) : 0.0;
        vols.push_back(config.vol_low + (config.vol_high - config.vol_low) * frac);
    }
    return vols;
}

Eigen::MatrixXd block_correlation(const SimulationConfig& config) {
    const auto blocks = block_assignment(config);
    const Eigen::Index n = config.num_assets;
    Eigen::MatrixXd corr(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            corr(i, j) = i == j ? 1.0 : (blocks[i] == blocks[j] ? config.within_rho : config.between_rho);
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success) {
        throw ConfigError("within/between correlations imply a matrix that is not positive definite");
    }
    return corr;
}

PriceTable simulate_prices(const SimulationConfig& config) {
    const Eigen::MatrixXd corr = block_correlation(config);
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(corr).matrixL();
    const auto vols = asset_volatilities(config);
    const Eigen::Index n = config.num_assets;
    const double dt = 1.0 / config.periods_per_year;

    PriceTable table;
    for (int i = 0; i < config.num_assets; ++i) table.assets.push_back(ticker(i, config.num_assets));

    std::chrono::sys_days day = config.start.days();
    const auto next_weekday = [](std::chrono::sys_days d) {
        while (std::chrono::weekday{d} == std::chrono::Saturday || std::chrono::weekday{d} == std::chrono::Sunday) {
            d += std::chrono::days{1};
        }
        return d;
    };
    day = next_weekday(day);

    table.prices.resize(config.num_days + 1, n);
    NormalStream normals(config.seed);
    Eigen::VectorXd z(n);
    std::vector<double> log_price(static_cast<std::size_t>(n), std::log(config.initial_price));
    for (int t = 0; t <= config.num_days; ++t) {
        table.dates.emplace_back(std::chrono::year_month_day{day});
        day = next_weekday(day + std::chrono::days{1});
        if (t > 0) {
            for (Eigen::Index i = 0; i < n; ++i) z(i) = normals.next();
            for (Eigen::Index i = 0; i < n; ++i) {
                double shock = 0.0;
                for (Eigen::Index k = 0; k <= i; ++k) shock += chol(i, k) * z(k);
                const double sigma = vols[i];
                log_price[i] += (config.annual_drift - 0.5 * sigma * sigma) * dt + sigma * std::sqrt(dt) * shock;
            }
        }
        for (Eigen::Index i = 0; i < n; ++i) table.prices(t, i) = std::exp(log_price[i]);
    }
    return table;
}

}  // namespace hrp
