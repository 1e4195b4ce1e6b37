#include "tseval/embedding.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tseval {

EmbeddedDataset embed(const TimeSeries& series, std::size_t p) {
    if (p == 0) throw std::invalid_argument("embed: p must be positive");
    if (p >= series.size()) {
        throw std::invalid_argument("embed: p = " + std::to_string(p) + " leaves no rows for a series of length " +
                                    std::to_string(series.size()));
    }
    const auto y = series.values();
    const auto n = series.size() - p;
    EmbeddedDataset out;
    out.p = p;
    out.predictors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    out.targets.resize(static_cast<Eigen::Index>(n));
    out.target_time.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < p; ++c) {
            out.predictors(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = y[k + c];
        }
        out.targets(static_cast<Eigen::Index>(k)) = y[k + p];
        out.target_time[k] = k + p;
    }
    return out;
}

namespace {

double population_sd(std::span<const double> v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

double false_neighbour_fraction(std::span<const double> values, std::size_t d, const FnnOptions& options) {
    if (d == 0 || values.size() < d + 2) {
        throw std::invalid_argument("false_neighbour_fraction: series too short for dimension " + std::to_string(d));
    }
    // Delay vectors (y[i], ..., y[i+d-1]) with extension y[i+d].
    const std::size_t points = values.size() - d;
    const double scale = population_sd(values);
    const double zero_floor = 1e-9 * scale;

    std::size_t false_count = 0;
    for (std::size_t i = 0; i < points; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = i;
        for (std::size_t j = 0; j < points; ++j) {
            if (j == i) continue;
            double dist2 = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = values[i + c] - values[j + c];
                dist2 += diff * diff;
                if (dist2 >= best * best) break;
            }
            double dist = std::sqrt(dist2);
            if (dist <= zero_floor) dist = 0.0;
            if (dist < best) {
                best = dist;
                best_j = j;
            }
        }
        double extension = std::abs(values[i + d] - values[best_j + d]);
        if (extension <= zero_floor) extension = 0.0;

        bool is_false = false;
        if (best == 0.0) {
            is_false = extension > 0.0;
        } else {
            is_false = extension / best > options.distance_ratio_threshold;
        }
        if (!is_false && scale > 0.0) {
            const double extended = std::sqrt(best * best + extension * extension);
            is_false = extended / scale > options.loneliness_threshold;
        }
        if (is_false) ++false_count;
    }
    return static_cast<double>(false_count) / static_cast<double>(points);
}

FnnResult estimate_embedding_dimension(const TimeSeries& series, const FnnOptions& options) {
    if (options.max_dimension == 0) {
        throw std::invalid_argument("estimate_embedding_dimension: max_dimension must be positive");
    }
    if (!(options.tolerance > 0.0 && options.tolerance < 1.0)) {
        throw std::invalid_argument("estimate_embedding_dimension: tolerance must lie in (0, 1)");
    }
    if (series.size() <= options.max_dimension + 1) {
        throw std::invalid_argument("estimate_embedding_dimension: series of length " +
                                    std::to_string(series.size()) + " too short for max_dimension " +
                                    std::to_string(options.max_dimension));
    }
    FnnResult result;
    for (std::size_t d = 1; d <= options.max_dimension; ++d) {
        const double f = false_neighbour_fraction(series.values(), d, options);
        result.false_fraction.push_back(f);
        if (f <= options.tolerance) {
            result.dimension = d;
            return result;
        }
    }
    result.dimension = options.max_dimension;
    result.tolerance_reached = false;
    return result;
}

}  // namespace tseval
