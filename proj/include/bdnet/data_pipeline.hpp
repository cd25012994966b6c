#pragma once

#include "bdnet/matrix_core.hpp"

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bdnet::data {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No data rows remain after reading.
class EmptyData : public DataError {
public:
    using DataError::DataError;
};

using Date = std::chrono::year_month_day;

Date parse_date(std::string_view text);
std::string format_date(const Date& d);

struct Dataset {
    std::vector<std::string> columns;
    Matrix rows;                 ///< n×p
    std::vector<Date> dates;     ///< empty unless a date column was read
    std::size_t dropped_rows = 0;

    Index n() const { return rows.rows(); }
    Index p() const { return rows.cols(); }
};

struct CsvOptions {
    std::optional<std::string> date_column;
    /// Numeric columns to keep, in this order; empty keeps every other column.
    std::vector<std::string> columns;
    /// Rows matching this column/value filter are kept (used for class splits).
    std::optional<std::string> filter_column;
    std::optional<std::string> filter_value;
};

/// Comma separated, header row, '.' decimal separator. Cells that are empty,
/// "NA" or "NaN" mark the row as missing; such rows are dropped and counted.
Dataset read_csv(const std::filesystem::path& path, const CsvOptions& opt = {});
Dataset parse_csv(std::string_view text, const CsvOptions& opt = {});

/// Writes shortest round-trip representations of every value.
void write_csv(const std::filesystem::path& path, const Dataset& ds);
std::string format_csv(const Dataset& ds);

/// Trailing window mean; output has size - window + 1 entries.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

/// Column-wise moving average; each output row carries the date of its window end.
Dataset moving_average(const Dataset& ds, std::size_t window);

/// Per column: average ranks r, then Phi^-1(r / (n + 1)).
Matrix nonparanormal_transform(const Matrix& x, std::span<const std::string> names = {});

/// Unbiased sample covariance of the columns (divisor n - 1).
SymMatrix sample_covariance(const Matrix& x);

struct BoxM {
    double statistic = 0.0;
    double p_value = 1.0;
    double dof = 0.0;
};

/// Box's M test for two groups with the chi-square approximation.
BoxM boxs_m_test(const SymMatrix& s1, std::size_t n1, const SymMatrix& s2, std::size_t n2);

struct Phase {
    std::string name;
    std::size_t begin = 0; ///< first row
    std::size_t end = 0;   ///< one past the last row

    std::size_t size() const { return end - begin; }
};

struct PhaseSplit {
    std::vector<Phase> phases;
    std::vector<std::string> warnings;
};

/// Phase k holds rows with boundary[k-1] <= date < boundary[k].
PhaseSplit split_phases(const Dataset& ds, std::span<const Date> boundaries,
                        std::span<const std::string> names = {});

/// Rows [phase.begin, phase.end) of the dataset.
Matrix phase_rows(const Dataset& ds, const Phase& phase);

} // namespace bdnet::data
