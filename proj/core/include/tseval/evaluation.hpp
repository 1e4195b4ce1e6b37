#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <cmath>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tseval/embedding.hpp"
#include "tseval/learners.hpp"
#include "tseval/series.hpp"
#include "tseval/splitters.hpp"

namespace tseval {

/// sqrt(mean((predictions - actuals)^2)).
/// @throws std::invalid_argument on empty or mismatched inputs.
[[nodiscard]] double rmse(std::span<const double> predictions, std::span<const double> actuals);

struct LossEstimate {
    double estimate = 0.0;              // unweighted mean of iteration losses
    std::vector<double> iteration_loss; // RMSE on each iteration's test rows
};

/// Fit on each iteration's training rows and score RMSE on its test rows.
[[nodiscard]] LossEstimate evaluate_plan(const EmbeddedDataset& data, const ResamplingPlan& plan,
                                         const LearnerSpec& learner);

/// Embed the estimation set once, build the method's plan over its rows and evaluate it.
[[nodiscard]] LossEstimate estimate_loss(const TimeSeries& estimation, Method method, const LearnerSpec& learner,
                                         std::size_t p, std::uint64_t seed, const MethodSettings& settings = {});

/**
 * Ground-truth loss: embed estimation followed by validation, train on rows
 * whose target lies in the estimation part and score RMSE on rows whose
 * target lies in the validation part. Every validation value is a target
 * exactly once.
 */
[[nodiscard]] double true_loss(const TimeSeries& estimation, const TimeSeries& validation, const LearnerSpec& learner,
                               std::size_t p);

/// Signed estimation error estimate - true_loss (negative = optimistic).
[[nodiscard]] inline double pae(double estimate, double true_loss) { return estimate - true_loss; }
/// |estimate - true_loss|.
[[nodiscard]] inline double apae(double estimate, double true_loss) { return std::abs(estimate - true_loss); }
/// 100 (estimate - true_loss) / true_loss. @throws std::invalid_argument unless true_loss > 0.
[[nodiscard]] double pct_diff(double estimate, double true_loss);

struct EstimationResult {
    std::string problem_id;
    std::string method;
    double estimate = 0.0;
    double true_loss = 0.0;
    double apae = 0.0;
    double pae = 0.0;
    double pct_diff = 0.0;  // NaN when true_loss == 0

    friend bool operator==(const EstimationResult&, const EstimationResult&) = default;
};

[[nodiscard]] EstimationResult make_result(std::string problem_id, std::string method, double estimate,
                                           double true_loss);

inline constexpr const char* kResultsHeader = "problem_id,method,estimate,true_loss,apae,pae,pct_diff";

void write_results_csv(std::ostream& out, std::span<const EstimationResult> results);
void write_results_csv(const std::filesystem::path& path, std::span<const EstimationResult> results);
/// @throws DataError on a wrong header or malformed row.
[[nodiscard]] std::vector<EstimationResult> read_results_csv(const std::filesystem::path& path);

struct RankTable {
    std::vector<std::string> methods;
    std::vector<double> mean_rank;
    std::vector<double> sd_rank;  // sample standard deviation; 0 with a single problem
    std::size_t problems = 0;
};

/// Ascending ranks of each row (lowest value = rank 1); ties share their average position.
[[nodiscard]] std::vector<double> rank_row(std::span<const double> row);

/**
 * @brief Mean and standard deviation of per-problem ranks.
 * @param matrix problems x methods, lower is better
 * @throws std::invalid_argument on an empty or ragged matrix or a NaN entry.
 */
[[nodiscard]] RankTable average_ranks(const std::vector<std::vector<double>>& matrix,
                                      std::vector<std::string> methods = {});

struct SignTestResult {
    double p_left = 0.0;  // differences below the ROPE: the first method has the lower loss error
    double p_rope = 0.0;
    double p_right = 0.0;
    std::size_t n_left = 0;
    std::size_t n_rope = 0;
    std::size_t n_right = 0;
};

/**
 * @brief Bayes sign test with a region of practical equivalence.
 *
 * Draws Dirichlet(n_left, n_rope + prior_strength, n_right) vectors and
 * reports how often each component is the largest, splitting ties evenly.
 * Components with zero concentration are identically zero.
 *
 * @throws std::invalid_argument on empty input, rope_low >= rope_high,
 *         samples == 0 or a negative prior.
 */
[[nodiscard]] SignTestResult bayes_sign_test(std::span<const double> differences, double rope_low, double rope_high,
                                             std::size_t samples = 100000, double prior_strength = 1.0,
                                             std::uint64_t seed = 0);

/// Per-problem 100 (APAE_method - APAE_baseline) / true_loss for every problem in both sets.
[[nodiscard]] std::vector<double> relative_apae_differences(std::span<const EstimationResult> results,
                                                            const std::string& method, const std::string& baseline);

}  // namespace tseval
