#include "bdnet/data_pipeline.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace bdnet::data {

Date parse_date(std::string_view text)
{
    int y = 0;
    unsigned m = 0, d = 0;
    const char* end = text.data() + text.size();
    auto bad = [&] { return DataError("invalid ISO-8601 date '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
    if (std::from_chars(text.data(), text.data() + 4, y).ec != std::errc{}) throw bad();
    if (std::from_chars(text.data() + 5, text.data() + 7, m).ec != std::errc{}) throw bad();
    if (std::from_chars(text.data() + 8, end, d).ec != std::errc{}) throw bad();
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) throw bad();
    return date;
}

std::string format_date(const Date& d)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

namespace {

std::vector<std::string> split_record(std::string_view line, std::size_t line_no)
{
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw DataError("unterminated quote on line " + std::to_string(line_no));
    cells.push_back(std::move(cur));
    return cells;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool is_missing(std::string_view cell)
{
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan";
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name)
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
}

} // namespace

Dataset parse_csv(std::string_view text, const CsvOptions& opt)
{
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw EmptyData("CSV input is empty");

    std::vector<std::string> header = split_record(lines[0], 1);
    if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);
    for (auto& h : header) h = std::string(trim(h));

    std::optional<std::size_t> date_idx;
    if (opt.date_column) date_idx = find_column(header, *opt.date_column);
    std::optional<std::size_t> filter_idx;
    if (opt.filter_column) filter_idx = find_column(header, *opt.filter_column);

    std::vector<std::size_t> keep;
    if (!opt.columns.empty()) {
        for (const auto& c : opt.columns) keep.push_back(find_column(header, c));
    } else {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (k != date_idx && k != filter_idx) keep.push_back(k);
        }
    }
    if (keep.size() < 2) throw DataError("at least two numeric columns are required");

    Dataset ds;
    for (std::size_t k : keep) ds.columns.push_back(header[k]);

    std::vector<double> values;
    std::size_t kept = 0;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        const std::vector<std::string> cells = split_record(lines[li], li + 1);
        if (cells.size() != header.size()) {
            throw DataError("line " + std::to_string(li + 1) + " has " +
                            std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(header.size()));
        }
        if (filter_idx && opt.filter_value && trim(cells[*filter_idx]) != *opt.filter_value) {
            continue;
        }
        bool missing = false;
        std::vector<double> row;
        for (std::size_t k : keep) {
            const std::string_view cell = trim(cells[k]);
            if (is_missing(cell)) {
                missing = true;
                break;
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw DataError("non-numeric value '" + std::string(cell) + "' in column '" +
                                header[k] + "' on line " + std::to_string(li + 1));
            }
            row.push_back(v);
        }
        if (!missing && date_idx && is_missing(trim(cells[*date_idx]))) missing = true;
        if (missing) {
            ++ds.dropped_rows;
            continue;
        }
        if (date_idx) ds.dates.push_back(parse_date(trim(cells[*date_idx])));
        values.insert(values.end(), row.begin(), row.end());
        ++kept;
    }
    if (kept == 0) throw EmptyData("CSV contains no complete data rows");

    const auto p = static_cast<Index>(keep.size());
    ds.rows.resize(static_cast<Index>(kept), p);
    for (Index r = 0; r < ds.rows.rows(); ++r) {
        for (Index c = 0; c < p; ++c) ds.rows(r, c) = values[static_cast<std::size_t>(r * p + c)];
    }
    return ds;
}

Dataset read_csv(const std::filesystem::path& path, const CsvOptions& opt)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), opt);
}

namespace {

std::string quote_if_needed(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void append_double(std::string& out, double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

} // namespace

std::string format_csv(const Dataset& ds)
{
    std::string out;
    const bool dated = !ds.dates.empty();
    if (dated) out += "date,";
    for (std::size_t k = 0; k < ds.columns.size(); ++k) {
        if (k) out.push_back(',');
        out += quote_if_needed(ds.columns[k]);
    }
    out.push_back('\n');
    for (Index r = 0; r < ds.rows.rows(); ++r) {
        if (dated) out += format_date(ds.dates[static_cast<std::size_t>(r)]) + ",";
        for (Index c = 0; c < ds.rows.cols(); ++c) {
            if (c) out.push_back(',');
            append_double(out, ds.rows(r, c));
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const Dataset& ds)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << format_csv(ds);
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window)
{
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    if (series.size() < window) {
        throw std::invalid_argument("moving_average: series of length " +
                                    std::to_string(series.size()) + " is shorter than window " +
                                    std::to_string(window));
    }
    std::vector<double> out;
    out.reserve(series.size() - window + 1);
    const double w = static_cast<double>(window);
    for (std::size_t end = window; end <= series.size(); ++end) {
        // Summed per window rather than as a running sum so results do not drift.
        double s = 0.0;
        for (std::size_t k = end - window; k < end; ++k) s += series[k];
        out.push_back(s / w);
    }
    return out;
}

Dataset moving_average(const Dataset& ds, std::size_t window)
{
    Dataset out;
    out.columns = ds.columns;
    out.dropped_rows = ds.dropped_rows;
    const auto n = static_cast<std::size_t>(ds.n());
    if (n < window) throw std::invalid_argument("moving_average: fewer rows than the window");
    out.rows.resize(static_cast<Index>(n - window + 1), ds.p());
    for (Index c = 0; c < ds.p(); ++c) {
        const Vector col = ds.rows.col(c);
        const auto ma = moving_average(std::span<const double>(col.data(), n), window);
        for (std::size_t r = 0; r < ma.size(); ++r) out.rows(static_cast<Index>(r), c) = ma[r];
    }
    if (!ds.dates.empty()) out.dates.assign(ds.dates.begin() + static_cast<long>(window - 1), ds.dates.end());
    return out;
}

Matrix nonparanormal_transform(const Matrix& x, std::span<const std::string> names)
{
    const Index n = x.rows();
    if (n < 3) throw std::invalid_argument("nonparanormal_transform: need at least 3 rows");
    const boost::math::normal_distribution<double> std_normal;
    Matrix out(n, x.cols());
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index c = 0; c < x.cols(); ++c) {
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Index a, Index b) { return x(a, c) < x(b, c); });
        if (x(order.front(), c) == x(order.back(), c)) {
            const std::string name = static_cast<std::size_t>(c) < names.size()
                                         ? names[static_cast<std::size_t>(c)]
                                         : "#" + std::to_string(c);
            throw DataError("column '" + name + "' is constant");
        }
        for (Index k = 0; k < n;) {
            Index e = k;
            while (e + 1 < n && x(order[static_cast<std::size_t>(e + 1)], c) ==
                                    x(order[static_cast<std::size_t>(k)], c)) {
                ++e;
            }
            // Ranks are 1-based; ties share the average of their ranks.
            const double rank = 0.5 * static_cast<double>(k + e) + 1.0;
            const double z = boost::math::quantile(std_normal, rank / static_cast<double>(n + 1));
            for (Index t = k; t <= e; ++t) out(order[static_cast<std::size_t>(t)], c) = z;
            k = e + 1;
        }
    }
    return out;
}

SymMatrix sample_covariance(const Matrix& x)
{
    if (x.rows() < 2) throw std::invalid_argument("sample_covariance: need at least 2 rows");
    const Matrix centered = x.rowwise() - x.colwise().mean();
    return SymMatrix::from_lower((centered.transpose() * centered) /
                                 static_cast<double>(x.rows() - 1));
}

BoxM boxs_m_test(const SymMatrix& s1, std::size_t n1, const SymMatrix& s2, std::size_t n2)
{
    require_same_dim(s1, s2, "boxs_m_test");
    const auto p = static_cast<double>(s1.dim());
    if (static_cast<double>(n1) <= p || static_cast<double>(n2) <= p) {
        throw std::invalid_argument("boxs_m_test: each group needs more observations than variables");
    }
    const double v1 = static_cast<double>(n1) - 1.0;
    const double v2 = static_cast<double>(n2) - 1.0;
    const double v = v1 + v2;
    const SymMatrix pooled = (s1 * v1 + s2 * v2) * (1.0 / v);

    const double m = v * cholesky_pd(pooled).log_det - v1 * cholesky_pd(s1).log_det -
                     v2 * cholesky_pd(s2).log_det;
    const double c = (2.0 * p * p + 3.0 * p - 1.0) / (6.0 * (p + 1.0)) *
                     (1.0 / v1 + 1.0 / v2 - 1.0 / v);
    BoxM out;
    out.statistic = std::max(0.0, m * (1.0 - c));
    out.dof = p * (p + 1.0) / 2.0;
    if (out.statistic == 0.0) {
        out.p_value = 1.0;
    } else {
        const boost::math::chi_squared_distribution<double> chi(out.dof);
        out.p_value = boost::math::cdf(boost::math::complement(chi, out.statistic));
    }
    return out;
}

PhaseSplit split_phases(const Dataset& ds, std::span<const Date> boundaries,
                        std::span<const std::string> names)
{
    const auto n = static_cast<std::size_t>(ds.n());
    if (!boundaries.empty() && ds.dates.empty()) {
        throw DataError("phase boundaries need a date column");
    }
    for (std::size_t r = 1; r < ds.dates.size(); ++r) {
        if (ds.dates[r] < ds.dates[r - 1]) throw DataError("dates are not in ascending order");
    }
    std::vector<std::size_t> cuts = {0};
    for (std::size_t k = 0; k < boundaries.size(); ++k) {
        const Date& b = boundaries[k];
        if (k > 0 && !(boundaries[k - 1] < b)) {
            throw DataError("phase boundaries must be strictly increasing");
        }
        if (b < ds.dates.front() || ds.dates.back() < b) {
            throw DataError("boundary " + format_date(b) + " outside data range " +
                            format_date(ds.dates.front()) + " .. " + format_date(ds.dates.back()));
        }
        const auto it = std::lower_bound(ds.dates.begin(), ds.dates.end(), b);
        cuts.push_back(static_cast<std::size_t>(it - ds.dates.begin()));
    }
    cuts.push_back(n);

    PhaseSplit split;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        Phase ph;
        ph.name = k < names.size() ? names[k] : "phase" + std::to_string(k + 1);
        ph.begin = cuts[k];
        ph.end = cuts[k + 1];
        if (ph.size() < static_cast<std::size_t>(ds.p()) + 1) {
            split.warnings.push_back(ph.name + " has " + std::to_string(ph.size()) +
                                     " rows, fewer than p + 1 = " + std::to_string(ds.p() + 1));
        }
        split.phases.push_back(std::move(ph));
    }
    return split;
}

Matrix phase_rows(const Dataset& ds, const Phase& phase)
{
    return ds.rows.middleRows(static_cast<Index>(phase.begin), static_cast<Index>(phase.size()));
}

} // namespace bdnet::data
