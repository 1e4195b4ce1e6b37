#include "tseval/series.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tseval {

TimeSeries::TimeSeries(std::vector<double> values, std::string name,
                       std::optional<std::vector<double>> timestamps)
    : values_(std::move(values)), name_(std::move(name)), timestamps_(std::move(timestamps)) {
    if (values_.empty()) {
        throw std::invalid_argument("TimeSeries: at least one observation is required");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("TimeSeries: non-finite value at index " + std::to_string(i));
        }
    }
    if (timestamps_) {
        if (timestamps_->size() != values_.size()) {
            throw std::invalid_argument("TimeSeries: timestamps and values differ in length");
        }
        for (std::size_t i = 1; i < timestamps_->size(); ++i) {
            if (!((*timestamps_)[i - 1] < (*timestamps_)[i])) {
                throw std::invalid_argument("TimeSeries: timestamps must be strictly increasing");
            }
        }
    }
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t last) const {
    if (first >= last || last > values_.size()) {
        throw std::out_of_range("TimeSeries::slice: invalid range");
    }
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first),
                          values_.begin() + static_cast<std::ptrdiff_t>(last));
    std::optional<std::vector<double>> ts;
    if (timestamps_) {
        ts.emplace(timestamps_->begin() + static_cast<std::ptrdiff_t>(first),
                   timestamps_->begin() + static_cast<std::ptrdiff_t>(last));
    }
    return TimeSeries(std::move(v), name_, std::move(ts));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

TimeSeries load_csv(const std::filesystem::path& path, const CsvColumn& column) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }

    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> index;
    if (const auto* i = std::get_if<std::size_t>(&column)) index = *i;
    bool first_row = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);

        if (first_row) {
            first_row = false;
            if (!index) {
                const auto& wanted = std::get<std::string>(column);
                auto it = std::find(fields.begin(), fields.end(), std::string_view(wanted));
                if (it == fields.end()) {
                    throw DataError("'" + path.string() + "': no column named '" + wanted + "'");
                }
                index = static_cast<std::size_t>(it - fields.begin());
                continue;
            }
            if (*index < fields.size() && !parse_double(fields[*index])) {
                continue;  // header row
            }
        }

        if (*index >= fields.size()) {
            throw DataError("'" + path.string() + "': row " + std::to_string(line_no) + " has no column " +
                            std::to_string(*index));
        }
        auto v = parse_double(fields[*index]);
        if (!v || !std::isfinite(*v)) {
            throw DataError("'" + path.string() + "': non-numeric value '" + std::string(fields[*index]) +
                            "' at row " + std::to_string(line_no));
        }
        values.push_back(*v);
    }

    if (values.empty()) {
        throw DataError("'" + path.string() + "': column is empty");
    }
    return TimeSeries(std::move(values), path.stem().string());
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

void write_csv(const TimeSeries& series, const std::filesystem::path& path, const std::string& header) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << header << '\n';
    for (double v : series.values()) out << format_double(v) << '\n';
}

TimeSeries difference(const TimeSeries& series, std::size_t d) {
    if (d >= series.size()) {
        throw std::invalid_argument("difference: order " + std::to_string(d) + " too large for length " +
                                    std::to_string(series.size()));
    }
    std::vector<double> v(series.values().begin(), series.values().end());
    for (std::size_t pass = 0; pass < d; ++pass) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
        v.pop_back();
    }
    std::optional<std::vector<double>> ts;
    if (series.timestamps()) {
        ts.emplace(series.timestamps()->begin() + static_cast<std::ptrdiff_t>(d), series.timestamps()->end());
    }
    return TimeSeries(std::move(v), series.name(), std::move(ts));
}

std::pair<TimeSeries, TimeSeries> estimation_validation_split(const TimeSeries& series, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("estimation_validation_split: fraction must lie in (0, 1)");
    }
    const auto t = series.size();
    const auto cut = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(t)));
    if (cut < 1 || cut >= t) {
        throw std::invalid_argument("estimation_validation_split: degenerate split of length " +
                                    std::to_string(t) + " at fraction " + format_double(fraction));
    }
    return {series.slice(0, cut), series.slice(cut, t)};
}

}  // namespace tseval
