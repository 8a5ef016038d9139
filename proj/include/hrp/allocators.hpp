#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "hrp/marketdata.hpp"
#include "hrp/weights.hpp"

namespace hrp {

/// Annualized expected returns, one per asset.
struct ExpectedReturns {
    std::vector<std::string> assets;
    Eigen::VectorXd mu;
};

inline constexpr int kDefaultPeriodsPerYear = 252;

WeightVector equal_weight(const std::vector<std::string>& assets);

/// mu_i = periods_per_year * mean daily log return of asset i.
ExpectedReturns mean_returns(const ReturnMatrix& returns, int periods_per_year = kDefaultPeriodsPerYear);

/// Cholesky factor of a covariance matrix, with the ridge that was needed to
/// make it positive definite (0 when the raw matrix factorized).
struct SpdFactor {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double ridge = 0.0;
};

/// Factorizes `cov`, adding eps * trace/N * I for eps = 1e-8, 1e-7, ...,
/// 1e-4 until the decomposition succeeds. Throws NumericalError otherwise.
SpdFactor factorize_spd(const Eigen::MatrixXd& cov);

/// Unconstrained maximum-Sharpe weights, Sigma^-1 (mu - rf) normalized to
/// sum to one. Weights may be negative.
WeightVector tangency_weights(const ExpectedReturns& mu, const Eigen::MatrixXd& cov, double rf);

struct LongOnlyResult {
    WeightVector weights;
    /// True when no asset has a positive excess return and the allocation
    /// fell back to the single asset with the best (mu_i - rf) / sigma_i.
    bool degenerate_fallback = false;
    int iterations = 0;
};

/// Maximum-Sharpe portfolio with w >= 0 and sum(w) = 1.
///
/// Solves min y' Sigma y subject to (mu - rf)' y = 1, y >= 0 with a primal
/// active-set method and rescales y to unit sum. When the unconstrained
/// tangency portfolio is already long-only it is returned unchanged.
LongOnlyResult max_sharpe_long_only(const ExpectedReturns& mu, const Eigen::MatrixXd& cov, double rf);

/// (w' mu - rf) / sqrt(w' Sigma w).
double portfolio_sharpe(const Eigen::VectorXd& w, const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov, double rf);

}  // namespace hrp
