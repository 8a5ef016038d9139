#include "hrp/hrp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>

#include "hrp/error.hpp"

namespace hrp {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void check_permutation(std::span<const std::size_t> order, std::size_t n) {
    if (order.size() != n) {
        throw DomainError("order has " + std::to_string(order.size()) + " entries, expected " + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (std::size_t idx : order) {
        if (idx >= n || seen[idx]) throw DomainError("order is not a permutation of 0.." + std::to_string(n - 1));
        seen[idx] = true;
    }
}

void check_square(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols()) throw DomainError(std::string(what) + " must be square");
}

void check_dissimilarity(const Eigen::MatrixXd& d) {
    check_square(d, "distance matrix");
    if (d.rows() < 2) throw DomainError("clustering needs at least two assets");
    if (!d.allFinite()) throw ValidationError("distance matrix has non-finite entries");
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        if (std::abs(d(i, i)) > kSymmetryTolerance) {
            throw ValidationError("distance matrix diagonal entry " + std::to_string(i) + " is not zero");
        }
        for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
            if (d(i, j) < 0.0 || d(j, i) < 0.0) throw ValidationError("distance matrix has negative entries");
            if (std::abs(d(i, j) - d(j, i)) > kSymmetryTolerance) {
                throw ValidationError("distance matrix is not symmetric at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
            }
        }
    }
}

double lance_williams(Linkage method, double d_ak, double d_bk, double d_ab, double na, double nb, double nk) {
    switch (method) {
        case Linkage::Single:
            return std::min(d_ak, d_bk);
        case Linkage::Complete:
            return std::max(d_ak, d_bk);
        case Linkage::Average:
            return (na * d_ak + nb * d_bk) / (na + nb);
        case Linkage::Ward: {
            // Distances are treated as Euclidean; no embedding is built.
            const double s = ((na + nk) * d_ak * d_ak + (nb + nk) * d_bk * d_bk - nk * d_ab * d_ab) / (na + nb + nk);
            return std::sqrt(std::max(s, 0.0));
        }
    }
    return std::min(d_ak, d_bk);
}

}  // namespace

Linkage parse_linkage(std::string_view name) {
    if (name == "single") return Linkage::Single;
    if (name == "complete") return Linkage::Complete;
    if (name == "average") return Linkage::Average;
    if (name == "ward") return Linkage::Ward;
    throw ConfigError("unknown linkage '" + std::string(name) + "' (single|complete|average|ward)");
}

std::string_view to_string(Linkage linkage) {
    switch (linkage) {
        case Linkage::Single: return "single";
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
        case Linkage::Ward: return "ward";
    }
    return "single";
}

LinkageTree cluster(const Eigen::MatrixXd& distance, Linkage method) {
    check_dissimilarity(distance);
    const auto n = static_cast<std::size_t>(distance.rows());
    const std::size_t total = 2 * n - 1;

    // Symmetrize exactly so the scan below sees one value per pair.
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (distance(i, j) + distance(j, i));
            d(i, j) = d(j, i) = v;
        }
    }

    std::vector<double> size(total, 1.0);
    std::vector<double> centrality(total, 0.0);  // summed row distance of members
    std::vector<std::size_t> min_leaf(total);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) centrality[i] += d(i, j);
        min_leaf[i] = i;
    }

    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = i;

    LinkageTree tree;
    tree.num_leaves = n;
    tree.merges.reserve(n - 1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        // `active` stays sorted, so the first strict minimum in this scan is
        // the tie winner by (smaller id, larger id).
        std::size_t best_p = 0, best_q = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < active.size(); ++p) {
            for (std::size_t q = p + 1; q < active.size(); ++q) {
                const double v = d(active[p], active[q]);
                if (v < best) {
                    best = v;
                    best_p = p;
                    best_q = q;
                }
            }
        }
        const std::size_t a = active[best_p];
        const std::size_t b = active[best_q];
        const std::size_t node = n + step;

        const double key_a = centrality[a] / size[a];
        const double key_b = centrality[b] / size[b];
        bool a_left = min_leaf[a] < min_leaf[b];
        if (key_a < key_b) {
            a_left = true;
        } else if (key_b < key_a) {
            a_left = false;
        }
        const std::size_t left = a_left ? a : b;
        const std::size_t right = a_left ? b : a;

        size[node] = size[a] + size[b];
        centrality[node] = centrality[a] + centrality[b];
        min_leaf[node] = std::min(min_leaf[a], min_leaf[b]);
        tree.merges.push_back({left, right, best, static_cast<std::size_t>(size[node])});

        for (std::size_t k : active) {
            if (k == a || k == b) continue;
            const double v = lance_williams(method, d(a, k), d(b, k), best, size[a], size[b], size[k]);
            d(node, k) = d(k, node) = v;
        }
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_q));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_p));
        active.push_back(node);
    }

    tree.leaf_order = leaf_order(tree);
    return tree;
}

std::vector<std::size_t> leaf_order(const LinkageTree& tree) {
    const std::size_t n = tree.num_leaves;
    if (n < 1) throw DomainError("linkage tree has no leaves");
    if (n == 1) return {0};
    if (tree.merges.size() != n - 1) throw DomainError("linkage tree must have exactly N - 1 merges");

    std::vector<bool> used(2 * n - 1, false);
    for (std::size_t k = 0; k < tree.merges.size(); ++k) {
        for (std::size_t child : {tree.merges[k].left, tree.merges[k].right}) {
            if (child >= n + k || used[child]) throw DomainError("linkage tree references an invalid child node");
            used[child] = true;
        }
    }

    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<std::size_t> stack{2 * n - 2};
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        if (node < n) {
            order.push_back(node);
            continue;
        }
        const Merge& m = tree.merges[node - n];
        stack.push_back(m.right);
        stack.push_back(m.left);
    }
    return order;
}

Eigen::MatrixXd quasi_diagonalize(const Eigen::MatrixXd& cov, std::span<const std::size_t> order) {
    check_square(cov, "covariance");
    check_permutation(order, static_cast<std::size_t>(cov.rows()));
    const auto n = static_cast<Eigen::Index>(order.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) out(a, b) = cov(order[a], order[b]);
    }
    return out;
}

double cluster_variance(const Eigen::MatrixXd& cov, std::span<const std::size_t> members) {
    check_square(cov, "covariance");
    if (members.empty()) throw DomainError("cluster_variance needs at least one member");
    std::vector<double> ivp(members.size());
    double total = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
        const std::size_t i = members[k];
        if (i >= static_cast<std::size_t>(cov.rows())) throw DomainError("cluster member index out of range");
        const double v = cov(i, i);
        if (!(v > 0.0)) throw DomainError("non-positive variance on covariance diagonal at " + std::to_string(i));
        ivp[k] = 1.0 / v;
        total += ivp[k];
    }
    for (double& w : ivp) w /= total;

    double var = 0.0;
    for (std::size_t p = 0; p < members.size(); ++p) {
        double row = 0.0;
        for (std::size_t q = 0; q < members.size(); ++q) row += cov(members[p], members[q]) * ivp[q];
        var += ivp[p] * row;
    }
    return var;
}

std::vector<double> recursive_bisection(const Eigen::MatrixXd& cov, std::span<const std::size_t> order) {
    check_square(cov, "covariance");
    check_permutation(order, static_cast<std::size_t>(cov.rows()));

    std::vector<double> weights(order.size(), 1.0);
    std::deque<std::pair<std::size_t, std::size_t>> work;  // [begin, end) into `order`
    if (order.size() > 1) work.emplace_back(0, order.size());
    while (!work.empty()) {
        const auto [begin, end] = work.front();
        work.pop_front();
        const std::size_t mid = begin + (end - begin + 1) / 2;
        const auto left = order.subspan(begin, mid - begin);
        const auto right = order.subspan(mid, end - mid);
        const double var_left = cluster_variance(cov, left);
        const double var_right = cluster_variance(cov, right);
        const double alpha = var_right / (var_left + var_right);
        for (std::size_t i : left) weights[i] *= alpha;
        for (std::size_t i : right) weights[i] *= 1.0 - alpha;
        if (left.size() > 1) work.emplace_back(begin, mid);
        if (right.size() > 1) work.emplace_back(mid, end);
    }
    return weights;
}

HrpResult run_hrp(const ReturnMatrix& returns, const HrpConfig& config) {
    if (returns.num_assets() < 2) throw DomainError("HRP needs at least two assets");
    HrpResult result;
    result.risk = estimate(returns);
    result.tree = cluster(result.risk.distance, config.linkage);
    result.weights.assets = returns.assets;
    result.weights.weights = recursive_bisection(result.risk.covariance, result.tree.leaf_order);
    return result;
}

WeightVector hrp_weights(const ReturnMatrix& returns, const HrpConfig& config) {
    return run_hrp(returns, config).weights;
}

}  // namespace hrp
