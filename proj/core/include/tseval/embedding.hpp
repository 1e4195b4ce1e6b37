#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tseval/series.hpp"

namespace tseval {

/**
 * @brief Time-delay embedding of a series: p lagged predictors per target.
 *
 * Row k holds (y[k], ..., y[k+p-1]) with the most recent lag in the last
 * column, and its target is y[k+p]. target_time[k] = k + p indexes the
 * source series. Consecutive rows share p-1 values.
 */
struct EmbeddedDataset {
    Eigen::MatrixXd predictors;
    Eigen::VectorXd targets;
    std::vector<std::size_t> target_time;
    std::size_t p = 0;

    [[nodiscard]] std::size_t rows() const noexcept { return target_time.size(); }
};

/// @throws std::invalid_argument if p == 0 or p >= series.size().
[[nodiscard]] EmbeddedDataset embed(const TimeSeries& series, std::size_t p);

struct FnnOptions {
    std::size_t max_dimension = 30;
    double tolerance = 0.01;
    double distance_ratio_threshold = 10.0;  // Kennel R_tol
    double loneliness_threshold = 2.0;       // Kennel A_tol
};

struct FnnResult {
    std::size_t dimension = 1;
    /// Fraction of false neighbours for d = 1..k, where k is the last dimension examined.
    std::vector<double> false_fraction;
    /// Set when no dimension reached the tolerance and max_dimension was returned.
    bool tolerance_reached = true;
};

/**
 * @brief Fraction of false nearest neighbours when going from dimension d to d+1.
 *
 * Points are the d-dimensional delay vectors that have a (d+1)-th coordinate.
 * A neighbour is false if the added coordinate separates it by more than
 * R_tol times the d-dimensional distance, or if the (d+1)-dimensional distance
 * exceeds A_tol standard deviations of the series. Distances below a
 * round-off floor relative to the series scale are treated as exact zeros;
 * such a pair is false only if the added coordinate also differs.
 */
[[nodiscard]] double false_neighbour_fraction(std::span<const double> values, std::size_t d,
                                              const FnnOptions& options = {});

/// Smallest d in [1, max_dimension] with false fraction <= tolerance; max_dimension otherwise.
/// @throws std::invalid_argument if series.size() <= max_dimension + 1 or tolerance not in (0, 1).
[[nodiscard]] FnnResult estimate_embedding_dimension(const TimeSeries& series, const FnnOptions& options = {});

}  // namespace tseval
