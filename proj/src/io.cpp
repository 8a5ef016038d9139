#include "hrp/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "hrp/error.hpp"

namespace hrp::io {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::string format_fixed(double value, int decimals) {
    std::array<char, 512> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) return format_double(value);
    return std::string(buf.data(), ptr);
}

std::optional<double> parse_double(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

void write_weights_csv(std::ostream& out, const WeightVector& w) {
    out << "ticker,weight\n";
    for (const auto& [ticker, weight] : w.sorted_descending()) out << ticker << ',' << format_double(weight) << '\n';
}

WeightVector read_weights_csv(std::istream& in) {
    std::string line;
    if (!read_line(in, line) || line != "ticker,weight") throw ParseError("weights CSV must start with 'ticker,weight'");
    WeightVector w;
    std::size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        const auto v = fields.size() == 2 ? parse_double(fields[1]) : std::nullopt;
        if (!v) throw ParseError("weights CSV row " + std::to_string(line_no) + " is malformed");
        w.assets.push_back(fields[0]);
        w.weights.push_back(*v);
    }
    return w;
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels, const Eigen::MatrixXd& m) {
    out << "ticker";
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << labels[i];
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
        out << '\n';
    }
}

LabeledMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    if (!read_line(in, line)) throw ParseError("empty matrix CSV");
    auto header = split_csv_line(line);
    if (header.empty() || header[0] != "ticker") throw ParseError("matrix CSV must start with a 'ticker' column");
    LabeledMatrix out;
    out.labels.assign(header.begin() + 1, header.end());
    const auto n = static_cast<Eigen::Index>(out.labels.size());
    out.values.resize(n, n);
    Eigen::Index row = 0;
    while (read_line(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (row >= n || static_cast<Eigen::Index>(fields.size()) != n + 1 || fields[0] != out.labels[row]) {
            throw ParseError("matrix CSV row " + std::to_string(row + 2) + " is malformed");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto v = parse_double(fields[j + 1]);
            if (!v) throw ParseError("matrix CSV row " + std::to_string(row + 2) + " has a non-numeric cell");
            out.values(row, j) = *v;
        }
        ++row;
    }
    if (row != n) throw ParseError("matrix CSV is not square");
    return out;
}

nlohmann::ordered_json dendrogram_json(const LinkageTree& tree, const std::vector<std::string>& labels) {
    nlohmann::ordered_json j;
    j["merges"] = nlohmann::ordered_json::array();
    for (const auto& m : tree.merges) j["merges"].push_back({m.left, m.right, m.distance, m.size});
    j["leaf_order"] = tree.leaf_order;
    j["labels"] = labels;
    return j;
}

LinkageTree dendrogram_from_json(const nlohmann::ordered_json& j) {
    try {
        LinkageTree tree;
        tree.num_leaves = j.at("labels").size();
        for (const auto& m : j.at("merges")) {
            tree.merges.push_back({m.at(0).get<std::size_t>(), m.at(1).get<std::size_t>(), m.at(2).get<double>(),
                                   m.at(3).get<std::size_t>()});
        }
        tree.leaf_order = j.at("leaf_order").get<std::vector<std::size_t>>();
        return tree;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed dendrogram JSON: ") + e.what());
    }
}

std::string dendrogram_svg(const LinkageTree& tree, const std::vector<std::string>& labels) {
    const std::size_t n = tree.num_leaves;
    const double leaf_gap = 18.0, margin_left = 60.0, margin_top = 20.0, plot_h = 300.0, label_h = 90.0;
    const double width = margin_left + leaf_gap * static_cast<double>(n) + 20.0;
    const double height = margin_top + plot_h + label_h;
    double max_h = 0.0;
    for (const auto& m : tree.merges) max_h = std::max(max_h, m.distance);
    if (max_h <= 0.0) max_h = 1.0;

    std::vector<double> x(2 * n - 1, 0.0), y(2 * n - 1, 0.0);
    for (std::size_t pos = 0; pos < tree.leaf_order.size(); ++pos) {
        x[tree.leaf_order[pos]] = margin_left + leaf_gap * (static_cast<double>(pos) + 0.5);
    }
    const auto to_y = [&](double h) { return margin_top + plot_h * (1.0 - h / max_h); };
    for (std::size_t i = 0; i < n; ++i) y[i] = to_y(0.0);

    const auto f = [](double v) { return format_fixed(v, 2); };
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(width) << "\" height=\"" << f(height)
        << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    svg << "<line x1=\"" << f(margin_left - 10) << "\" y1=\"" << f(to_y(0)) << "\" x2=\"" << f(margin_left - 10)
        << "\" y2=\"" << f(to_y(max_h)) << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double h = max_h * tick / 4.0;
        svg << "<text x=\"" << f(margin_left - 14) << "\" y=\"" << f(to_y(h) + 3) << "\" text-anchor=\"end\">"
            << format_fixed(h, 3) << "</text>\n";
    }
    for (std::size_t k = 0; k < tree.merges.size(); ++k) {
        const auto& m = tree.merges[k];
        const std::size_t node = n + k;
        x[node] = 0.5 * (x[m.left] + x[m.right]);
        y[node] = to_y(m.distance);
        svg << "<path d=\"M" << f(x[m.left]) << ' ' << f(y[m.left]) << " V" << f(y[node]) << " H" << f(x[m.right])
            << " V" << f(y[m.right]) << "\" fill=\"none\" stroke=\"steelblue\"/>\n";
    }
    for (std::size_t pos = 0; pos < tree.leaf_order.size(); ++pos) {
        const std::size_t leaf = tree.leaf_order[pos];
        const double lx = x[leaf], ly = to_y(0.0) + 6.0;
        svg << "<text x=\"" << f(lx) << "\" y=\"" << f(ly) << "\" transform=\"rotate(90 " << f(lx) << ' ' << f(ly)
            << ")\">" << (leaf < labels.size() ? labels[leaf] : std::to_string(leaf)) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

nlohmann::ordered_json metric_json(const Metric& m) {
    return m.value ? nlohmann::ordered_json(*m.value) : nlohmann::ordered_json(nullptr);
}

std::string metric_cell(const Metric& m) { return m.value ? format_fixed(*m.value, 3) : "NA"; }

}  // namespace

nlohmann::ordered_json report_json(const std::vector<StrategyPerformance>& rows, const ReportMetadata& meta) {
    nlohmann::ordered_json j;
    auto& md = j["metadata"];
    md["rf"] = meta.rf;
    md["periods_per_year"] = meta.periods_per_year;
    md["start_date"] = meta.start_date;
    md["end_date"] = meta.end_date;
    md["num_assets"] = meta.num_assets;
    md["num_periods"] = meta.num_periods;
    md["linkage"] = meta.linkage;
    md["max_sharpe_variant"] = meta.max_sharpe_variant;
    md["max_sharpe_fallback"] = meta.max_sharpe_fallback;
    md["covariance_ridge"] = meta.covariance_ridge;
    md["conventions"] = {
        {"returns", "daily log returns; portfolio series combine log returns linearly with static weights"},
        {"annual_return", "exp(periods_per_year * mean daily log return) - 1"},
        {"volatility", "sample stdev (n - 1) of daily portfolio returns * sqrt(periods_per_year)"},
        {"sharpe", "(annual_return - rf) / volatility"},
        {"sortino",
         "(annual_return - rf) / downside deviation; downside deviation averages min(r - rf/periods_per_year, 0)^2 "
         "over all days"},
        {"calmar", "annual_return / |max_drawdown|"},
        {"max_drawdown", "min over t of wealth / running peak - 1"},
        {"tracking_error", "sample stdev of (portfolio - 1/N) daily returns * sqrt(periods_per_year)"},
    };

    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& perf : rows) {
        const auto& r = perf.report;
        nlohmann::ordered_json row;
        row["portfolio"] = r.portfolio_name;
        row["annual_return"] = metric_json(r.annual_return);
        row["volatility"] = metric_json(r.volatility);
        row["sharpe"] = metric_json(r.sharpe);
        row["sortino"] = metric_json(r.sortino);
        row["calmar"] = metric_json(r.calmar);
        row["max_drawdown"] = metric_json(r.max_drawdown);
        row["tracking_error"] = r.tracking_error ? metric_json(*r.tracking_error) : nlohmann::ordered_json(nullptr);

        nlohmann::ordered_json reasons = nlohmann::ordered_json::object();
        const std::pair<const char*, const Metric*> all[] = {
            {"annual_return", &r.annual_return}, {"volatility", &r.volatility}, {"sharpe", &r.sharpe},
            {"sortino", &r.sortino},             {"calmar", &r.calmar},         {"max_drawdown", &r.max_drawdown}};
        for (const auto& [name, m] : all) {
            if (!m->defined()) reasons[name] = m->reason;
        }
        if (!r.tracking_error) {
            reasons["tracking_error"] = "benchmark row";
        } else if (!r.tracking_error->defined()) {
            reasons["tracking_error"] = r.tracking_error->reason;
        }
        row["null_reasons"] = reasons;
        j["rows"].push_back(std::move(row));
    }
    return j;
}

void write_report_csv(std::ostream& out, const std::vector<StrategyPerformance>& rows) {
    out << kReportCsvHeader << '\n';
    for (const auto& perf : rows) {
        const auto& r = perf.report;
        out << r.portfolio_name << ',' << metric_cell(r.annual_return) << ',' << metric_cell(r.volatility) << ','
            << metric_cell(r.sharpe) << ',' << metric_cell(r.sortino) << ',' << metric_cell(r.calmar) << ','
            << metric_cell(r.max_drawdown) << ',' << (r.tracking_error ? metric_cell(*r.tracking_error) : "--")
            << '\n';
    }
}

std::vector<ReportCsvRow> read_report_csv(std::istream& in) {
    std::string line;
    if (!read_line(in, line) || line != kReportCsvHeader) throw ParseError("report CSV header mismatch");
    std::vector<ReportCsvRow> rows;
    while (read_line(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 8) throw ParseError("report CSV row must have 8 fields");
        ReportCsvRow row;
        row.portfolio = fields[0];
        for (std::size_t c = 1; c < 8; ++c) {
            if (fields[c] == "--" || fields[c] == "NA") {
                row.values.emplace_back(std::nullopt);
                continue;
            }
            const auto v = parse_double(fields[c]);
            if (!v) throw ParseError("report CSV cell '" + fields[c] + "' is not numeric");
            row.values.emplace_back(*v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_wealth_csv(std::ostream& out, const std::vector<StrategyPerformance>& rows) {
    out << "date";
    for (const auto& perf : rows) out << ',' << perf.report.portfolio_name;
    out << '\n';
    if (rows.empty()) return;
    const auto& dates = rows.front().wealth.dates;
    for (std::size_t t = 0; t < dates.size(); ++t) {
        out << dates[t].to_string();
        for (const auto& perf : rows) out << ',' << format_double(perf.wealth.wealth[t]);
        out << '\n';
    }
}

void write_prices_csv(std::ostream& out, const PriceTable& table) {
    out << "date";
    for (const auto& a : table.assets) out << ',' << a;
    out << '\n';
    for (Eigen::Index t = 0; t < table.rows(); ++t) {
        out << table.dates[t].to_string();
        for (Eigen::Index i = 0; i < table.cols(); ++i) {
            out << ',';
            if (!table.is_missing(t, i)) out << format_double(table.prices(t, i));
        }
        out << '\n';
    }
}

}  // namespace hrp::io
