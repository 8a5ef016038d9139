#include "hrp/weights.hpp"

#include <algorithm>
#include <numeric>

namespace hrp {

double WeightVector::sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

std::vector<std::pair<std::string, double>> WeightVector::sorted_descending() const {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) out.emplace_back(assets[i], weights[i]);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

}  // namespace hrp
