#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tseval {

/// Raised for malformed or unreadable input data (CSV files, config files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Ordered, finite, equally spaced univariate observations.
 *
 * Timestamps are optional opaque labels. They are carried through splits and
 * differencing but never interpreted. Instances are immutable after
 * construction.
 */
class TimeSeries {
public:
    /// @throws std::invalid_argument if values is empty, holds a non-finite
    ///         value, or timestamps are present with a different length or
    ///         not strictly increasing.
    explicit TimeSeries(std::vector<double> values, std::string name = {},
                        std::optional<std::vector<double>> timestamps = std::nullopt);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::optional<std::vector<double>>& timestamps() const noexcept {
        return timestamps_;
    }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    /// Copy of the half-open range [first, last).
    [[nodiscard]] TimeSeries slice(std::size_t first, std::size_t last) const;

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
    std::string name_;
    std::optional<std::vector<double>> timestamps_;
};

/// Column selector for load_csv: header name or zero-based index.
using CsvColumn = std::variant<std::string, std::size_t>;

/**
 * @brief Load one column of a comma-delimited file as a series.
 *
 * A first row whose selected cell does not parse as a number is treated as
 * the header. Row numbers in error messages are 1-based file lines.
 *
 * @throws DataError on missing file, unknown column, non-numeric cell, or an
 *         empty column.
 */
[[nodiscard]] TimeSeries load_csv(const std::filesystem::path& path, const CsvColumn& column = std::size_t{0});

/// Write a single-column CSV with the given header. Values are printed in
/// shortest round-trip form so that load_csv recovers them bit-exactly.
void write_csv(const TimeSeries& series, const std::filesystem::path& path,
               const std::string& header = "value");

/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Apply first differences d times: y[i] -> y[i+1] - y[i].
/// @throws std::invalid_argument if d >= series.size().
[[nodiscard]] TimeSeries difference(const TimeSeries& series, std::size_t d);

/// Split into the first floor(fraction * t) observations and the remainder.
/// @throws std::invalid_argument if fraction is outside (0, 1) or either side is empty.
[[nodiscard]] std::pair<TimeSeries, TimeSeries> estimation_validation_split(const TimeSeries& series,
                                                                          double fraction);

}  // namespace tseval
