#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tseval/embedding.hpp"
#include "tseval/evaluation.hpp"
#include "tseval/learners.hpp"
#include "tseval/splitters.hpp"
#include "tseval/synthetic.hpp"

namespace tseval {

/// One series to evaluate.
struct Problem {
    std::string id;
    TimeSeries series;
};

struct ExperimentConfig {
    double estimation_fraction = 0.7;
    /// Fixed embedding dimension; when unset it is estimated by FNN on the estimation set.
    std::optional<std::size_t> embedding_dimension;
    FnnOptions fnn;
    LearnerSpec learner;
    std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
    MethodSettings settings;
    std::uint64_t base_seed = 1;
    /// Worker threads over problems; results do not depend on it.
    std::size_t threads = 1;

    /// @throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

struct Failure {
    std::string problem_id;
    std::string method;  // empty when the whole problem failed
    std::string reason;
};

struct ExperimentOutput {
    std::vector<EstimationResult> results;  // ordered by (problem, configured method order)
    std::vector<Failure> failures;
    RankTable ranks;  // over problems where every method succeeded
};

/// Seed used by `method` on problem number `problem`.
[[nodiscard]] std::uint64_t method_seed(std::uint64_t base_seed, std::size_t problem, Method method) noexcept;

/**
 * @brief Estimation/validation workflow for every problem.
 *
 * Each problem is split into estimation and validation parts; every
 * configured method estimates the loss on the estimation part and the
 * learner retrained on the whole estimation part is scored on the
 * validation part. Failures are recorded per problem and method without
 * affecting other rows. Progress and failures are written as JSON lines to
 * `log` when given.
 */
[[nodiscard]] ExperimentOutput run_experiment(const ExperimentConfig& config, const std::vector<Problem>& problems,
                                              std::ostream* log = nullptr);

/// Rank table of APAE over problems that have a result for every method in `methods`.
[[nodiscard]] RankTable rank_results(std::span<const EstimationResult> results, const std::vector<std::string>& methods);

struct MethodComparison {
    std::string method;
    SignTestResult test;
};

struct ComparisonOptions {
    std::string baseline = "Rep-Holdout";
    double rope = 2.5;  // percent of the true loss, symmetric
    std::size_t samples = 100000;
    double prior_strength = 1.0;
    std::uint64_t seed = 0;
};

/// Bayes sign test of every other method against the baseline on relative APAE differences.
[[nodiscard]] std::vector<MethodComparison> compare_to_baseline(std::span<const EstimationResult> results,
                                                                const std::vector<std::string>& methods,
                                                                const ComparisonOptions& options = {});

struct SyntheticStudy {
    ExperimentOutput output;
    std::vector<MethodComparison> comparisons;
};

/// Problems for trials 0..trials-1 of a data-generating process.
[[nodiscard]] std::vector<Problem> synthetic_problems(const DgpSpec& dgp, std::size_t trials, std::uint64_t base_seed);

/// Synthetic study: fixed embedding dimension 5 unless the config sets one.
[[nodiscard]] SyntheticStudy reproduce_synthetic(const DgpSpec& dgp, std::size_t trials, ExperimentConfig config,
                                                 const ComparisonOptions& comparison = {},
                                                 std::ostream* log = nullptr);

void write_rank_table(std::ostream& out, const RankTable& table);
void write_comparisons(std::ostream& out, std::span<const MethodComparison> comparisons, const std::string& baseline);

}  // namespace tseval
