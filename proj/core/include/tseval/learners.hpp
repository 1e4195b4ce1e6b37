#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace tseval {

enum class LearnerKind { Lasso, Knn };

[[nodiscard]] std::string_view learner_name(LearnerKind kind) noexcept;

struct LearnerSpec {
    LearnerKind kind = LearnerKind::Lasso;
    /// Lasso penalty. When unset, lambda = lambda_ratio * lambda_max of the training data.
    std::optional<double> lambda;
    double lambda_ratio = 0.01;
    std::size_t k = 5;
    std::size_t max_iter = 10000;
    double tol = 1e-9;

    /// @throws std::invalid_argument on negative lambda, k == 0, max_iter == 0 or tol <= 0.
    void validate() const;
};

/**
 * @brief Immutable fitted regressor.
 *
 * Lasso models keep coefficients on both the standardized and the raw scale.
 * kNN models keep their training rows.
 */
class FittedModel {
public:
    [[nodiscard]] LearnerKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }

    // Lasso state.
    [[nodiscard]] double intercept() const noexcept { return intercept_; }
    [[nodiscard]] const Eigen::VectorXd& coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] const Eigen::VectorXd& standardized_coefficients() const noexcept { return std_coefficients_; }
    [[nodiscard]] const Eigen::VectorXd& column_means() const noexcept { return means_; }
    /// Population standard deviation per column; 0 marks a constant column.
    [[nodiscard]] const Eigen::VectorXd& column_scales() const noexcept { return scales_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }
    [[nodiscard]] bool converged() const noexcept { return converged_; }

    // kNN state.
    [[nodiscard]] std::size_t neighbours() const noexcept { return k_; }
    [[nodiscard]] const Eigen::MatrixXd& training_predictors() const noexcept { return train_x_; }
    [[nodiscard]] const Eigen::VectorXd& training_targets() const noexcept { return train_y_; }

private:
    friend FittedModel fit(const LearnerSpec&, const Eigen::MatrixXd&, const Eigen::VectorXd&);

    LearnerKind kind_ = LearnerKind::Lasso;
    std::size_t dimension_ = 0;
    double intercept_ = 0.0;
    Eigen::VectorXd coefficients_;
    Eigen::VectorXd std_coefficients_;
    Eigen::VectorXd means_;
    Eigen::VectorXd scales_;
    double lambda_ = 0.0;
    std::size_t iterations_ = 0;
    bool converged_ = false;
    std::size_t k_ = 0;
    Eigen::MatrixXd train_x_;
    Eigen::VectorXd train_y_;
};

/// max_j |<x_j, y - mean(y)>| / n over standardized non-constant columns.
[[nodiscard]] double lasso_lambda_max(const Eigen::MatrixXd& predictors, const Eigen::VectorXd& targets);

/**
 * @brief Fit a learner.
 *
 * Lasso minimizes (1/2n)|y~ - X~ b|^2 + lambda |b|_1 over standardized
 * predictors X~ and centred targets y~ by cyclic coordinate descent, stopping
 * once the largest coefficient change in a sweep is below tol.
 *
 * @throws std::invalid_argument on empty or mismatched inputs, non-finite
 *         values, fewer than 2 rows for lasso, or fewer than k rows for kNN.
 */
[[nodiscard]] FittedModel fit(const LearnerSpec& spec, const Eigen::MatrixXd& predictors,
                              const Eigen::VectorXd& targets);

/// @throws std::invalid_argument if the column count differs from the fitted dimension.
[[nodiscard]] Eigen::VectorXd predict(const FittedModel& model, const Eigen::MatrixXd& predictors);

}  // namespace tseval
