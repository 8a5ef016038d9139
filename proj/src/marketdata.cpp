#include "hrp/marketdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include "hrp/error.hpp"
#include "hrp/io.hpp"

namespace hrp {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

bool PriceTable::is_missing(Eigen::Index t, Eigen::Index i) const { return std::isnan(prices(t, i)); }

bool PriceTable::dense() const { return !prices.hasNaN(); }

void PriceTable::validate() const {
    if (prices.rows() != static_cast<Eigen::Index>(dates.size()) ||
        prices.cols() != static_cast<Eigen::Index>(assets.size())) {
        throw ValidationError("price matrix shape does not match dates x assets");
    }
    for (std::size_t t = 1; t < dates.size(); ++t) {
        if (!(dates[t - 1] < dates[t])) {
            throw ValidationError("dates not strictly increasing at " + dates[t].to_string());
        }
    }
    std::set<std::string> seen;
    for (const auto& a : assets) {
        if (a.empty()) throw ValidationError("empty ticker identifier");
        if (!seen.insert(a).second) throw ValidationError("duplicate ticker '" + a + "'");
    }
    for (Eigen::Index t = 0; t < prices.rows(); ++t) {
        for (Eigen::Index i = 0; i < prices.cols(); ++i) {
            const double p = prices(t, i);
            if (std::isnan(p)) continue;
            if (!(p > 0.0) || !std::isfinite(p)) {
                throw ValidationError("non-positive price at " + dates[t].to_string() + ", " + assets[i]);
            }
        }
    }
}

PriceTable load_prices(std::istream& source) {
    std::string line;
    if (!io::read_line(source, line)) throw ParseError("empty price CSV (no header row)");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = io::split_csv_line(line);
    if (header.empty() || trim(header[0]) != "date") {
        throw ParseError("price CSV header must start with a 'date' column");
    }
    PriceTable table;
    std::set<std::string> seen;
    for (std::size_t c = 1; c < header.size(); ++c) {
        std::string ticker{trim(header[c])};
        if (ticker.empty()) throw ValidationError("empty ticker in header column " + std::to_string(c + 1));
        if (!seen.insert(ticker).second) throw ValidationError("duplicate ticker '" + ticker + "' in header");
        table.assets.push_back(std::move(ticker));
    }
    const std::size_t n = table.assets.size();

    struct Row {
        Date date;
        std::vector<double> values;
        std::size_t line_no;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (io::read_line(source, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = io::split_csv_line(line);
        if (fields.size() != n + 1) {
            throw ParseError("row " + std::to_string(line_no) + ": expected " + std::to_string(n + 1) +
                             " fields, found " + std::to_string(fields.size()));
        }
        Row row;
        row.line_no = line_no;
        try {
            row.date = Date::parse(trim(fields[0]));
        } catch (const ParseError& e) {
            throw ParseError("row " + std::to_string(line_no) + ": " + e.what());
        }
        row.values.resize(n, kMissing);
        for (std::size_t i = 0; i < n; ++i) {
            const auto cell = trim(fields[i + 1]);
            if (cell.empty()) continue;
            const auto v = io::parse_double(cell);
            if (!v) {
                throw ParseError("row " + std::to_string(line_no) + ", column '" + table.assets[i] +
                                 "': not a number '" + std::string(cell) + "'");
            }
            if (!(*v > 0.0) || !std::isfinite(*v)) {
                throw ValidationError("row " + std::to_string(line_no) + ", column '" + table.assets[i] +
                                      "': price must be positive, got '" + std::string(cell) + "'");
            }
            row.values[i] = *v;
        }
        rows.push_back(std::move(row));
    }

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].date == rows[r - 1].date) {
            throw ValidationError("duplicate date " + rows[r].date.to_string() + " (row " +
                                  std::to_string(rows[r].line_no) + ")");
        }
    }

    table.prices.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
    table.dates.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        table.dates.push_back(rows[r].date);
        for (std::size_t i = 0; i < n; ++i) table.prices(r, i) = rows[r].values[i];
    }
    return table;
}

PriceTable load_prices_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file '" + path + "'");
    return load_prices(in);
}

PriceTable align(const PriceTable& table, const AlignmentPolicy& policy) {
    if (!(policy.max_missing_frac >= 0.0 && policy.max_missing_frac <= 1.0)) {
        throw ConfigError("max_missing_frac must lie in [0, 1]");
    }
    std::vector<Eigen::Index> rows;
    for (std::size_t t = 0; t < table.dates.size(); ++t) {
        const Date& d = table.dates[t];
        if (policy.start && d < *policy.start) continue;
        if (policy.end && *policy.end < d) continue;
        rows.push_back(static_cast<Eigen::Index>(t));
    }
    if (rows.empty()) throw AlignmentError("no dates fall inside the requested window");

    const auto window = static_cast<double>(rows.size());
    std::vector<Eigen::Index> kept;
    Eigen::Index first_common = 0;
    for (Eigen::Index i = 0; i < table.cols(); ++i) {
        std::size_t missing = 0;
        std::optional<Eigen::Index> first;
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(rows.size()); ++k) {
            if (table.is_missing(rows[k], i)) {
                ++missing;
            } else if (!first) {
                first = k;
            }
        }
        if (!first || static_cast<double>(missing) / window > policy.max_missing_frac) continue;
        kept.push_back(i);
        first_common = std::max(first_common, *first);
    }
    if (kept.empty()) throw AlignmentError("no asset satisfies the missing-data policy");

    PriceTable out;
    const auto t_out = static_cast<Eigen::Index>(rows.size()) - first_common;
    out.prices.resize(t_out, static_cast<Eigen::Index>(kept.size()));
    for (Eigen::Index k = first_common; k < static_cast<Eigen::Index>(rows.size()); ++k) {
        out.dates.push_back(table.dates[rows[k]]);
    }
    for (std::size_t c = 0; c < kept.size(); ++c) {
        const Eigen::Index i = kept[c];
        out.assets.push_back(table.assets[i]);
        double last = kMissing;
        for (Eigen::Index k = first_common; k < static_cast<Eigen::Index>(rows.size()); ++k) {
            const double p = table.prices(rows[k], i);
            if (!std::isnan(p)) last = p;
            out.prices(k - first_common, static_cast<Eigen::Index>(c)) = last;
        }
    }
    return out;
}

ReturnMatrix log_returns(const PriceTable& table) {
    if (table.rows() < 2) throw DomainError("log returns need at least two price rows");
    for (Eigen::Index t = 0; t < table.rows(); ++t) {
        for (Eigen::Index i = 0; i < table.cols(); ++i) {
            const double p = table.prices(t, i);
            if (std::isnan(p)) {
                throw DomainError("missing price at " + table.dates[t].to_string() + ", " + table.assets[i] +
                                  " (align the table first)");
            }
            if (!(p > 0.0)) {
                throw DomainError("non-positive price at " + table.dates[t].to_string() + ", " + table.assets[i]);
            }
        }
    }
    ReturnMatrix r;
    r.anchor = table.dates.front();
    r.dates.assign(table.dates.begin() + 1, table.dates.end());
    r.assets = table.assets;
    r.values.resize(table.rows() - 1, table.cols());
    for (Eigen::Index t = 0; t + 1 < table.rows(); ++t) {
        for (Eigen::Index i = 0; i < table.cols(); ++i) {
            r.values(t, i) = std::log(table.prices(t + 1, i) / table.prices(t, i));
        }
    }
    return r;
}

}  // namespace hrp
