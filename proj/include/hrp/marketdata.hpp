#pragma once

#include <Eigen/Dense>

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "hrp/date.hpp"

namespace hrp {

/// Date-indexed wide panel of daily closing prices. Missing cells are NaN.
///
/// Invariants: dates strictly increasing, tickers unique and non-empty,
/// every present price strictly positive.
struct PriceTable {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    Eigen::MatrixXd prices;  // dates.size() x assets.size()

    [[nodiscard]] Eigen::Index rows() const { return prices.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return prices.cols(); }
    [[nodiscard]] bool is_missing(Eigen::Index t, Eigen::Index i) const;
    [[nodiscard]] bool dense() const;

    /// Throws ValidationError if any invariant is violated.
    void validate() const;
};

/// Daily log returns. Row t holds ln(p[t+1] / p[t]) and is labelled with the
/// later date; `anchor` is the date of the first price row.
struct ReturnMatrix {
    Date anchor;
    std::vector<Date> dates;
    std::vector<std::string> assets;
    Eigen::MatrixXd values;  // T x N

    [[nodiscard]] Eigen::Index periods() const { return values.rows(); }
    [[nodiscard]] Eigen::Index num_assets() const { return values.cols(); }
};

struct AlignmentPolicy {
    std::optional<Date> start;  // inclusive
    std::optional<Date> end;    // inclusive
    double max_missing_frac = 0.10;
};

/// Parses a wide price CSV (`date,<T1>,<T2>,...`). Rows are sorted by date;
/// empty cells become missing.
PriceTable load_prices(std::istream& source);
PriceTable load_prices_file(const std::string& path);

/// Restricts to the date window, drops sparse assets, trims to the common
/// coverage window and forward-fills interior gaps.
PriceTable align(const PriceTable& table, const AlignmentPolicy& policy = {});

ReturnMatrix log_returns(const PriceTable& table);

}  // namespace hrp
