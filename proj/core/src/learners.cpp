#include "tseval/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tseval {

std::string_view learner_name(LearnerKind kind) noexcept { return kind == LearnerKind::Lasso ? "lasso" : "knn"; }

void LearnerSpec::validate() const {
    if (lambda && !(*lambda >= 0.0)) throw std::invalid_argument("LearnerSpec: lambda must be non-negative");
    if (!(lambda_ratio >= 0.0)) throw std::invalid_argument("LearnerSpec: lambda_ratio must be non-negative");
    if (k == 0) throw std::invalid_argument("LearnerSpec: k must be positive");
    if (max_iter == 0) throw std::invalid_argument("LearnerSpec: max_iter must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("LearnerSpec: tol must be positive");
}

namespace {

void check_inputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("fit: empty training set");
    if (x.rows() != y.size()) throw std::invalid_argument("fit: predictor and target row counts differ");
    if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("fit: non-finite training data");
}

// Columns whose spread is below this fraction of their magnitude are constant.
constexpr double kConstantColumn = 1e-12;

struct Standardized {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd means;
    Eigen::VectorXd scales;
    double y_mean = 0.0;
};

Standardized standardize(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const auto n = static_cast<double>(x.rows());
    Standardized s;
    s.means = x.colwise().mean().transpose();
    s.scales.resize(x.cols());
    s.x = x.rowwise() - s.means.transpose();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double sd = std::sqrt(s.x.col(j).squaredNorm() / n);
        const double magnitude = std::max(1.0, x.col(j).cwiseAbs().maxCoeff());
        if (sd <= kConstantColumn * magnitude) {
            s.scales(j) = 0.0;
            s.x.col(j).setZero();
        } else {
            s.scales(j) = sd;
            s.x.col(j) /= sd;
        }
    }
    s.y_mean = y.mean();
    s.y = y.array() - s.y_mean;
    return s;
}

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

}  // namespace

double lasso_lambda_max(const Eigen::MatrixXd& predictors, const Eigen::VectorXd& targets) {
    check_inputs(predictors, targets);
    const auto s = standardize(predictors, targets);
    return (s.x.transpose() * s.y).cwiseAbs().maxCoeff() / static_cast<double>(predictors.rows());
}

FittedModel fit(const LearnerSpec& spec, const Eigen::MatrixXd& predictors, const Eigen::VectorXd& targets) {
    spec.validate();
    check_inputs(predictors, targets);

    FittedModel model;
    model.kind_ = spec.kind;
    model.dimension_ = static_cast<std::size_t>(predictors.cols());

    if (spec.kind == LearnerKind::Knn) {
        if (static_cast<std::size_t>(predictors.rows()) < spec.k) {
            throw std::invalid_argument("fit: kNN needs at least k = " + std::to_string(spec.k) + " rows, got " +
                                        std::to_string(predictors.rows()));
        }
        model.k_ = spec.k;
        model.train_x_ = predictors;
        model.train_y_ = targets;
        return model;
    }

    if (predictors.rows() < 2) throw std::invalid_argument("fit: lasso needs at least 2 rows");

    const auto s = standardize(predictors, targets);
    const auto n = static_cast<double>(predictors.rows());
    const auto p = predictors.cols();
    const double lambda_max = (s.x.transpose() * s.y).cwiseAbs().maxCoeff() / n;
    const double lambda = spec.lambda ? *spec.lambda : spec.lambda_ratio * lambda_max;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd residual = s.y;
    std::size_t sweeps = 0;
    bool converged = false;
    if (lambda >= lambda_max) {
        converged = true;
    }
    while (!converged && sweeps < spec.max_iter) {
        ++sweeps;
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (s.scales(j) == 0.0) continue;
            // Standardized columns have unit mean square, so the update needs no rescaling.
            const double rho = s.x.col(j).dot(residual) / n + beta(j);
            const double updated = soft_threshold(rho, lambda);
            const double delta = updated - beta(j);
            if (delta != 0.0) {
                residual.noalias() -= delta * s.x.col(j);
                beta(j) = updated;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        if (max_change < spec.tol) converged = true;
    }

    model.lambda_ = lambda;
    model.iterations_ = sweeps;
    model.converged_ = converged;
    model.std_coefficients_ = beta;
    model.means_ = s.means;
    model.scales_ = s.scales;
    model.coefficients_ = Eigen::VectorXd::Zero(p);
    double intercept = s.y_mean;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (s.scales(j) == 0.0) continue;
        model.coefficients_(j) = beta(j) / s.scales(j);
        intercept -= model.coefficients_(j) * s.means(j);
    }
    model.intercept_ = intercept;
    return model;
}

Eigen::VectorXd predict(const FittedModel& model, const Eigen::MatrixXd& predictors) {
    if (static_cast<std::size_t>(predictors.cols()) != model.dimension()) {
        throw std::invalid_argument("predict: expected " + std::to_string(model.dimension()) + " columns, got " +
                                    std::to_string(predictors.cols()));
    }
    if (model.kind() == LearnerKind::Lasso) {
        return (predictors * model.coefficients()).array() + model.intercept();
    }

    const auto& train_x = model.training_predictors();
    const auto& train_y = model.training_targets();
    const auto rows = static_cast<std::size_t>(train_x.rows());
    const auto k = model.neighbours();
    Eigen::VectorXd out(predictors.rows());
    std::vector<std::size_t> order(rows);
    std::vector<double> dist(rows);
    for (Eigen::Index r = 0; r < predictors.rows(); ++r) {
        for (std::size_t i = 0; i < rows; ++i) {
            dist[i] = (train_x.row(static_cast<Eigen::Index>(i)) - predictors.row(r)).squaredNorm();
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                          [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += train_y(static_cast<Eigen::Index>(order[i]));
        out(r) = sum / static_cast<double>(k);
    }
    return out;
}

}  // namespace tseval
