#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tseval/experiment.hpp"

namespace tseval::cli {

/// Exit status of a subcommand.
enum class Status : int { Ok = 0, Fatal = 1, Partial = 2 };

/// Raw option values shared by `evaluate` and `benchmark`.
struct ExperimentFlags {
    std::string learner = "lasso";
    std::optional<double> lambda;
    double lambda_ratio = 0.01;
    std::size_t k = 5;
    std::size_t max_iter = 10000;
    double tol = 1e-9;
    std::string methods = "all";
    std::size_t folds = 10;
    std::size_t repetitions = 10;
    double holdout_fraction = 0.7;
    double rep_train_fraction = 0.6;
    double rep_test_fraction = 0.1;
    std::size_t sliding_blocks = 1;
    std::size_t preq_window = 0;
    std::size_t refit_interval = 1;
    double estimation_fraction = 0.7;
    std::string embedding = "auto";
    std::size_t fnn_max_dim = 30;
    double fnn_tolerance = 0.01;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

struct ComparisonFlags {
    std::string baseline = "Rep-Holdout";
    double rope = 2.5;
    std::size_t samples = 100000;
    double prior = 1.0;
    std::uint64_t seed = 0;
};

void add_experiment_options(CLI::App& app, ExperimentFlags& flags);
void add_comparison_options(CLI::App& app, ComparisonFlags& flags);

/// Parse a comma-separated list of method names; "all" selects every method.
/// @throws std::invalid_argument on an unknown name.
[[nodiscard]] std::vector<Method> parse_method_list(const std::string& text);

/// @throws std::invalid_argument on inconsistent values.
[[nodiscard]] ExperimentConfig make_config(const ExperimentFlags& flags);

[[nodiscard]] ComparisonOptions make_comparison(const ComparisonFlags& flags);

/// A CSV column given on the command line: all digits selects by index, anything else by header name.
[[nodiscard]] CsvColumn parse_column(const std::string& text);

}  // namespace tseval::cli
