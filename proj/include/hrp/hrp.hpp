#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrp/marketdata.hpp"
#include "hrp/riskmodel.hpp"
#include "hrp/weights.hpp"

namespace hrp {

enum class Linkage { Single, Complete, Average, Ward };

Linkage parse_linkage(std::string_view name);
std::string_view to_string(Linkage linkage);

/// One agglomeration step. Node ids below N are leaves; the k-th merge
/// creates node N + k.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double distance = 0.0;
    std::size_t size = 0;
};

/// Dendrogram: N - 1 merges plus the induced leaf order.
struct LinkageTree {
    std::size_t num_leaves = 0;
    std::vector<Merge> merges;
    std::vector<std::size_t> leaf_order;
};

/// Agglomerative clustering of a dissimilarity matrix.
///
/// The closest pair of active clusters is merged at each step; exact
/// distance ties go to the pair whose (smaller id, larger id) is
/// lexicographically smallest. At each merge the child with the lower mean
/// distance to the whole universe is placed left, falling back to the child
/// holding the smallest leaf id, so the leaf order depends only on the
/// distances and not on the column order of the input.
LinkageTree cluster(const Eigen::MatrixXd& distance, Linkage method = Linkage::Single);

/// In-order traversal of the tree, left child first.
std::vector<std::size_t> leaf_order(const LinkageTree& tree);

/// output(a, b) = cov(order[a], order[b]), i.e. P C P^T.
Eigen::MatrixXd quasi_diagonalize(const Eigen::MatrixXd& cov, std::span<const std::size_t> order);

/// Variance of the inverse-variance portfolio restricted to `members`.
double cluster_variance(const Eigen::MatrixXd& cov, std::span<const std::size_t> members);

/// Top-down bisection of `order` into halves of ceil(n/2) and floor(n/2)
/// elements. Each split gives the left half alpha = var_R / (var_L + var_R)
/// of the parent weight. Returned weights are indexed by asset, not by
/// position in `order`.
std::vector<double> recursive_bisection(const Eigen::MatrixXd& cov, std::span<const std::size_t> order);

struct HrpConfig {
    Linkage linkage = Linkage::Single;
};

/// Every intermediate of one HRP run, kept for the figure exports.
struct HrpResult {
    RiskModel risk;
    LinkageTree tree;
    WeightVector weights;
};

HrpResult run_hrp(const ReturnMatrix& returns, const HrpConfig& config = {});
WeightVector hrp_weights(const ReturnMatrix& returns, const HrpConfig& config = {});

}  // namespace hrp
