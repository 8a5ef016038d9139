#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "hrp/marketdata.hpp"

namespace hrp {

/// Sample covariance, correlation and correlation distance for one universe.
struct RiskModel {
    std::vector<std::string> assets;
    Eigen::MatrixXd covariance;   // daily return variance units
    Eigen::MatrixXd correlation;
    Eigen::MatrixXd distance;     // sqrt((1 - rho) / 2), in [0, 1]
};

inline constexpr double kCorrelationClampTolerance = 1e-9;

/// sqrt((1 - rho) / 2). Inputs within 1e-9 outside [-1, 1] are clamped,
/// anything further out raises DomainError.
double distance_from_correlation(double rho);

/// Unbiased (T - 1) sample covariance of the return columns and the
/// correlation and distance matrices derived from it.
RiskModel estimate(const ReturnMatrix& returns);

}  // namespace hrp
