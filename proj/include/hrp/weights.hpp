#pragma once

#include <string>
#include <vector>

namespace hrp {

/// Named portfolio allocation. Weights are fractions that sum to one.
struct WeightVector {
    std::vector<std::string> assets;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return weights.size(); }
    [[nodiscard]] double sum() const;

    /// (ticker, weight) pairs sorted by descending weight, ties by ticker.
    [[nodiscard]] std::vector<std::pair<std::string, double>> sorted_descending() const;
};

}  // namespace hrp
