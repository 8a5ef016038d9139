#include <doctest.h>

#include <sstream>

#include "../support/oracles.hpp"
#include "hrp/error.hpp"
#include "hrp/hrp.hpp"
#include "hrp/io.hpp"
#include "hrp/simulate.hpp"

using namespace hrp;

TEST_CASE("simulate_prices shape and calendar") {
    SimulationConfig cfg;
    cfg.num_assets = 5;
    cfg.num_days = 30;
    const auto t = simulate_prices(cfg);
    CHECK(t.rows() == 31);
    CHECK(t.cols() == 5);
    CHECK(t.assets.front() == "S01");
    CHECK(t.dates.front().to_string() == "2019-07-01");
    CHECK(t.prices.row(0).isApproxToConstant(100.0));
    CHECK_NOTHROW(t.validate());
    for (const auto& d : t.dates) {
        const std::chrono::weekday wd{d.days()};
        CHECK(wd != std::chrono::Saturday);
        CHECK(wd != std::chrono::Sunday);
    }
}

TEST_CASE("simulate_prices is reproducible for a fixed seed") {
    SimulationConfig cfg;
    cfg.seed = 123;
    std::ostringstream a, b, c;
    io::write_prices_csv(a, simulate_prices(cfg));
    io::write_prices_csv(b, simulate_prices(cfg));
    cfg.seed = 124;
    io::write_prices_csv(c, simulate_prices(cfg));
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
}

TEST_CASE("simulated blocks stay contiguous in the dendrogram") {
    SimulationConfig cfg;
    cfg.num_assets = 6;
    cfg.num_blocks = 2;
    cfg.within_rho = 0.8;
    cfg.between_rho = 0.1;
    cfg.num_days = 2000;
    const auto res = run_hrp(log_returns(simulate_prices(cfg)));
    CHECK(oracle::blocks_contiguous(res.tree.leaf_order, block_assignment(cfg)));
}

TEST_CASE("simulation config errors") {
    SimulationConfig cfg;
    cfg.num_assets = 1;
    CHECK_THROWS_AS(simulate_prices(cfg), ConfigError);
    cfg = {};
    cfg.within_rho = -0.9;
    cfg.between_rho = 0.5;
    CHECK_THROWS_AS(simulate_prices(cfg), ConfigError);
    cfg = {};
    cfg.num_blocks = 0;
    CHECK_THROWS_AS(simulate_prices(cfg), ConfigError);
    cfg = {};
    cfg.asset_vols = {0.1, 0.2};
    CHECK_THROWS_AS(simulate_prices(cfg), ConfigError);
}

TEST_CASE("volatility schedule") {
    SimulationConfig cfg;
    cfg.num_assets = 4;
    cfg.num_blocks = 2;
    cfg.vol_low = 0.1;
    cfg.vol_high = 0.3;
    CHECK(asset_volatilities(cfg) == std::vector<double>{0.1, 0.3, 0.1, 0.3});
    CHECK(block_assignment(cfg) == std::vector<int>{0, 1, 0, 1});
}
