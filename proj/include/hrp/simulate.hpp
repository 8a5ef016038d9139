#pragma once

#include <cstdint>
#include <vector>

#include "hrp/date.hpp"
#include "hrp/marketdata.hpp"

namespace hrp {

/// Correlated geometric Brownian motion with a block correlation structure.
/// Asset i belongs to block i % num_blocks.
struct SimulationConfig {
    int num_assets = 10;
    int num_blocks = 2;
    double within_rho = 0.8;
    double between_rho = 0.1;
    int num_days = 1500;
    /// Annualized volatility per block, low to high. Block b gets
    /// vol_low + (vol_high - vol_low) * b / (num_blocks - 1).
    double vol_low = 0.15;
    double vol_high = 0.35;
    /// Overrides the block schedule when non-empty; one entry per asset.
    std::vector<double> asset_vols;
    double annual_drift = 0.05;
    double initial_price = 100.0;
    int periods_per_year = 252;
    Date start = Date::parse("2019-07-01");
    std::uint64_t seed = 42;
};

/// Block index for each asset.
std::vector<int> block_assignment(const SimulationConfig& config);

/// Annualized volatility for each asset.
std::vector<double> asset_volatilities(const SimulationConfig& config);

/// Implied correlation matrix; throws ConfigError if it is not positive definite.
Eigen::MatrixXd block_correlation(const SimulationConfig& config);

/// num_days + 1 price rows on consecutive weekdays starting at `start`.
/// Bit-reproducible for a fixed seed: normals come from Box-Muller over
/// raw mt19937_64 output, not from std::normal_distribution.
PriceTable simulate_prices(const SimulationConfig& config);

}  // namespace hrp
