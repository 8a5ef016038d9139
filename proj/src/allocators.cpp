#include "hrp/allocators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hrp/error.hpp"

namespace hrp {

namespace {

void check_inputs(const ExpectedReturns& mu, const Eigen::MatrixXd& cov, double rf) {
    const auto n = mu.mu.size();
    if (n == 0) throw DomainError("expected-return vector is empty");
    if (static_cast<std::size_t>(n) != mu.assets.size()) throw DomainError("expected returns and tickers differ in length");
    if (cov.rows() != n || cov.cols() != n) throw DomainError("covariance shape does not match expected returns");
    if (!mu.mu.allFinite()) throw DomainError("expected returns must be finite");
    if (!cov.allFinite()) throw DomainError("covariance must be finite");
    if (!std::isfinite(rf)) throw DomainError("risk-free rate must be finite");
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) out(a, b) = m(idx[a], idx[b]);
    }
    return out;
}

}  // namespace

WeightVector equal_weight(const std::vector<std::string>& assets) {
    if (assets.empty()) throw DomainError("equal weight needs at least one asset");
    WeightVector w;
    w.assets = assets;
    w.weights.assign(assets.size(), 1.0 / static_cast<double>(assets.size()));
    return w;
}

ExpectedReturns mean_returns(const ReturnMatrix& returns, int periods_per_year) {
    if (returns.periods() < 2) throw DomainError("mean returns need at least two periods");
    if (periods_per_year < 1) throw DomainError("periods_per_year must be positive");
    ExpectedReturns out;
    out.assets = returns.assets;
    out.mu.resize(returns.num_assets());
    for (Eigen::Index i = 0; i < returns.num_assets(); ++i) {
        double sum = 0.0;
        for (Eigen::Index t = 0; t < returns.periods(); ++t) sum += returns.values(t, i);
        out.mu(i) = static_cast<double>(periods_per_year) * (sum / static_cast<double>(returns.periods()));
    }
    return out;
}

SpdFactor factorize_spd(const Eigen::MatrixXd& cov) {
    if (cov.rows() != cov.cols() || cov.rows() == 0) throw DomainError("covariance must be square and non-empty");
    SpdFactor f;
    f.llt.compute(cov);
    if (f.llt.info() == Eigen::Success) return f;

    const double scale = cov.trace() / static_cast<double>(cov.rows());
    if (scale > 0.0) {
        for (double eps = 1e-8; eps <= 1e-4 * (1.0 + 1e-9); eps *= 10.0) {
            Eigen::MatrixXd repaired = cov;
            repaired.diagonal().array() += eps * scale;
            f.llt.compute(repaired);
            if (f.llt.info() == Eigen::Success) {
                f.ridge = eps * scale;
                return f;
            }
        }
    }
    throw NumericalError("Cholesky (LLT) decomposition of the covariance failed; matrix is singular or indefinite "
                         "even with ridge 1e-4 * trace / N");
}

WeightVector tangency_weights(const ExpectedReturns& mu, const Eigen::MatrixXd& cov, double rf) {
    check_inputs(mu, cov, rf);
    const SpdFactor f = factorize_spd(cov);
    const Eigen::VectorXd excess = mu.mu.array() - rf;
    const Eigen::VectorXd x = f.llt.solve(excess);
    const double norm = x.sum();
    if (!(std::abs(norm) > 1e-14 * x.cwiseAbs().sum()) || !std::isfinite(norm)) {
        throw DegeneratePortfolioError("tangency normalizer 1' Sigma^-1 (mu - rf) is zero");
    }
    WeightVector w;
    w.assets = mu.assets;
    w.weights.resize(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) w.weights[i] = x(i) / norm;
    return w;
}

LongOnlyResult max_sharpe_long_only(const ExpectedReturns& mu, const Eigen::MatrixXd& cov, double rf) {
    check_inputs(mu, cov, rf);
    const Eigen::Index n = mu.mu.size();
    const SpdFactor f = factorize_spd(cov);
    Eigen::MatrixXd sigma = cov;
    sigma.diagonal().array() += f.ridge;
    const Eigen::VectorXd a = mu.mu.array() - rf;

    LongOnlyResult result;
    result.weights.assets = mu.assets;
    result.weights.weights.assign(static_cast<std::size_t>(n), 0.0);

    if (a.maxCoeff() <= 0.0) {
        Eigen::Index best = 0;
        double best_ratio = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double ratio = a(i) / std::sqrt(sigma(i, i));
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best = i;
            }
        }
        result.weights.weights[best] = 1.0;
        result.degenerate_fallback = true;
        return result;
    }

    // Unconstrained solution first; it is optimal whenever it is long-only.
    {
        const Eigen::VectorXd x = f.llt.solve(a);
        const double norm = x.sum();
        if (norm > 0.0 && x.minCoeff() >= 0.0) {
            for (Eigen::Index i = 0; i < n; ++i) result.weights.weights[i] = x(i) / norm;
            return result;
        }
    }

    // Primal active set for  min 1/2 y' S y  s.t.  a' y = 1, y >= 0.
    // Start at the vertex of the best single asset.
    Eigen::Index start = 0;
    double best_ratio = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (a(i) <= 0.0) continue;
        const double ratio = a(i) / std::sqrt(sigma(i, i));
        if (ratio > best_ratio) {
            best_ratio = ratio;
            start = i;
        }
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    y(start) = 1.0 / a(start);
    std::vector<bool> free(static_cast<std::size_t>(n), false);
    free[start] = true;

    const double tol = 1e-12;
    const int max_iter = 50 * static_cast<int>(n) + 100;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (free[i]) idx.push_back(i);
        }
        const auto k = static_cast<Eigen::Index>(idx.size());
        Eigen::VectorXd a_free(k);
        for (Eigen::Index p = 0; p < k; ++p) a_free(p) = a(idx[p]);
        Eigen::LLT<Eigen::MatrixXd> llt(submatrix(sigma, idx));
        if (llt.info() != Eigen::Success) throw NumericalError("Cholesky (LLT) of the free-set covariance failed");
        const Eigen::VectorXd x = llt.solve(a_free);
        const double s = a_free.dot(x);
        if (!(s > 0.0)) throw NumericalError("free-set system lost positive definiteness");
        const Eigen::VectorXd target = x / s;  // equality-constrained optimum on the free set

        Eigen::Index blocking = -1;
        double step = 1.0;
        for (Eigen::Index p = 0; p < k; ++p) {
            if (target(p) < 0.0) {
                const double cur = y(idx[p]);
                const double t = cur / (cur - target(p));
                if (t < step) {
                    step = t;
                    blocking = idx[p];
                }
            }
        }
        for (Eigen::Index p = 0; p < k; ++p) y(idx[p]) += step * (target(p) - y(idx[p]));

        if (blocking >= 0) {
            y(blocking) = 0.0;
            free[blocking] = false;
            continue;
        }

        // Multipliers of the bound constraints: nu = S y - lambda a, lambda = 1/s.
        const Eigen::VectorXd grad = sigma * y;
        const double lambda = 1.0 / s;
        Eigen::Index entering = -1;
        double most_negative = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (free[i]) continue;
            const double nu = grad(i) - lambda * a(i);
            const double threshold = -tol * (std::abs(grad(i)) + std::abs(lambda * a(i)));
            if (nu < threshold && nu < most_negative) {
                most_negative = nu;
                entering = i;
            }
        }
        if (entering < 0) break;
        free[entering] = true;
    }
    result.iterations = iter + 1;
    if (iter == max_iter) throw NumericalError("long-only max-Sharpe active set did not converge");

    for (Eigen::Index i = 0; i < n; ++i) y(i) = std::max(y(i), 0.0);
    const double total = y.sum();
    for (Eigen::Index i = 0; i < n; ++i) result.weights.weights[i] = y(i) / total;
    return result;
}

double portfolio_sharpe(const Eigen::VectorXd& w, const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov, double rf) {
    const double var = w.dot(cov * w);
    if (!(var > 0.0)) throw UndefinedMetricError("portfolio variance is zero");
    return (w.dot(mu) - rf) / std::sqrt(var);
}

}  // namespace hrp
