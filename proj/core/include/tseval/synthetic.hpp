#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tseval/rng.hpp"
#include "tseval/series.hpp"

namespace tseval {

enum class DgpKind { S1, S2, S3 };

[[nodiscard]] std::string_view dgp_name(DgpKind kind) noexcept;
[[nodiscard]] std::optional<DgpKind> parse_dgp(std::string_view name);

/// y[t] = intercept + sum_s seasonal[s] * y[t - (s+1)*period] + sum_i ar[i] * y[t - i - 1] + e[t]
struct SeasonalArModel {
    double intercept = 0.0;
    std::size_t period = 12;
    std::vector<double> seasonal;
    std::vector<double> ar;
    /// Residual standard deviation of the fit that produced the coefficients.
    double residual_sd = 1.0;
};

/**
 * Default S3 process: a seasonal AR(1) at lag 12 fitted by least squares to
 * the bundled monthly US accidental deaths series (1973-1978), with the
 * intercept divided by the residual standard deviation so that unit
 * innovations reproduce the fitted dynamics up to scale.
 */
[[nodiscard]] SeasonalArModel default_s3_model();

struct DgpSpec {
    DgpKind kind = DgpKind::S1;
    double root_bound = 5.0;
    std::size_t length = 200;
    std::size_t burn_in = 200;
    double innovation_sd = 1.0;
    std::optional<SeasonalArModel> s3;

    /// @throws std::invalid_argument if root_bound <= 1.1, length < 20 or innovation_sd <= 0.
    void validate() const;
};

/// A generated series together with the parameters that produced it.
struct Simulation {
    TimeSeries series;
    std::vector<double> roots;
    std::vector<double> ar_coefficients;
    double ma_coefficient = 0.0;
};

/// Uniform draws on [-r, -1.1] U [1.1, r]; the two intervals are equally likely.
[[nodiscard]] std::vector<double> sample_roots(std::size_t count, double root_bound, Rng& rng);

/// phi such that prod_i (1 - z / root_i) = 1 - phi_1 z - ... - phi_q z^q.
/// @throws std::invalid_argument if any |root| <= 1.
[[nodiscard]] std::vector<double> roots_to_ar_coefficients(std::span<const double> roots);

/// True when every root of 1 - sum_i phi_i z^i lies outside the unit circle.
[[nodiscard]] bool is_stationary_ar(std::span<const double> phi);

/// x - min(x) + 1.
[[nodiscard]] TimeSeries positivize(const TimeSeries& series);

/// AR(3) from three sampled roots.
[[nodiscard]] Simulation simulate_s1(const DgpSpec& spec, Rng& rng);
/// Invertible MA(1) with theta = -1 / z0 for one sampled root z0.
[[nodiscard]] Simulation simulate_s2(const DgpSpec& spec, Rng& rng);
/// Seasonal AR with spec.s3 as the model (default_s3_model() when unset).
[[nodiscard]] Simulation simulate_s3(const DgpSpec& spec, Rng& rng);
[[nodiscard]] Simulation simulate(const DgpSpec& spec, Rng& rng);

/**
 * @brief Least-squares seasonal AR fit of y[t] on an intercept and
 * y[t - period], ..., y[t - seasonal_order * period].
 *
 * @throws std::invalid_argument if the series is too short or the design is rank deficient.
 */
[[nodiscard]] SeasonalArModel fit_seasonal_ar(const TimeSeries& series, std::size_t period,
                                              std::size_t seasonal_order = 1);

/// Seed used for a given Monte Carlo trial.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) noexcept;

[[nodiscard]] Simulation simulate_trial(const DgpSpec& spec, std::size_t trial, std::uint64_t base_seed);

/// Trials 0..trials-1, each generated from its own trial_seed.
[[nodiscard]] std::vector<Simulation> monte_carlo(const DgpSpec& spec, std::size_t trials, std::uint64_t base_seed);

}  // namespace tseval
