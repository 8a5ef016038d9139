#include "hrp/riskmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrp/error.hpp"

namespace hrp {

double distance_from_correlation(double rho) {
    if (!(rho >= -1.0 - kCorrelationClampTolerance && rho <= 1.0 + kCorrelationClampTolerance)) {
        throw DomainError("correlation " + std::to_string(rho) + " outside [-1, 1]");
    }
    rho = std::clamp(rho, -1.0, 1.0);
    return std::sqrt((1.0 - rho) / 2.0);
}

RiskModel estimate(const ReturnMatrix& returns) {
    const Eigen::Index t_count = returns.periods();
    const Eigen::Index n = returns.num_assets();
    if (t_count < 2) throw EstimationError("covariance estimation needs at least two return periods");
    if (n < 1) throw EstimationError("covariance estimation needs at least one asset");

    const Eigen::MatrixXd& x = returns.values;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto col = x.col(i);
        if (!col.allFinite()) throw EstimationError("non-finite return for asset '" + returns.assets[i] + "'");
        if (col.minCoeff() == col.maxCoeff()) {
            throw EstimationError("asset '" + returns.assets[i] + "' has zero sample variance");
        }
    }

    // Two-pass estimate with plain loops; the summation order is fixed so
    // results are reproducible bit for bit.
    Eigen::MatrixXd centered(t_count, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double sum = 0.0;
        for (Eigen::Index t = 0; t < t_count; ++t) sum += x(t, i);
        const double mean = sum / static_cast<double>(t_count);
        for (Eigen::Index t = 0; t < t_count; ++t) centered(t, i) = x(t, i) - mean;
    }

    RiskModel model;
    model.assets = returns.assets;
    model.covariance.resize(n, n);
    const double divisor = static_cast<double>(t_count - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            double acc = 0.0;
            for (Eigen::Index t = 0; t < t_count; ++t) acc += centered(t, i) * centered(t, j);
            model.covariance(i, j) = model.covariance(j, i) = acc / divisor;
        }
        if (!(model.covariance(i, i) > 0.0)) {
            throw EstimationError("asset '" + returns.assets[i] + "' has zero sample variance");
        }
    }

    model.correlation.resize(n, n);
    model.distance.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        model.correlation(i, i) = 1.0;
        model.distance(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double scale = std::sqrt(model.covariance(i, i) * model.covariance(j, j));
            const double rho = std::clamp(model.covariance(i, j) / scale, -1.0, 1.0);
            model.correlation(i, j) = model.correlation(j, i) = rho;
            model.distance(i, j) = model.distance(j, i) = distance_from_correlation(rho);
        }
    }
    return model;
}

}  // namespace hrp
