#include "tseval/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tseval/rng.hpp"

namespace tseval {

namespace {

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

Eigen::VectorXd select_rows(const Eigen::VectorXd& y, const std::vector<std::size_t>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(rows[i]));
    return out;
}

double fit_and_score(const EmbeddedDataset& data, const std::vector<std::size_t>& train,
                     const std::vector<std::size_t>& test, const LearnerSpec& learner) {
    const auto model = fit(learner, select_rows(data.predictors, train), select_rows(data.targets, train));
    const Eigen::VectorXd predicted = predict(model, select_rows(data.predictors, test));
    const Eigen::VectorXd actual = select_rows(data.targets, test);
    return rmse({predicted.data(), static_cast<std::size_t>(predicted.size())},
                {actual.data(), static_cast<std::size_t>(actual.size())});
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_field(std::string_view s, std::size_t line_no) {
    if (s == "nan" || s == "NaN" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(s), &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw DataError("results CSV: bad number '" + std::string(s) + "' at row " + std::to_string(line_no));
    }
}

}  // namespace

double rmse(std::span<const double> predictions, std::span<const double> actuals) {
    if (predictions.empty()) throw std::invalid_argument("rmse: empty input");
    if (predictions.size() != actuals.size()) throw std::invalid_argument("rmse: length mismatch");
    double ss = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - actuals[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(predictions.size()));
}

LossEstimate evaluate_plan(const EmbeddedDataset& data, const ResamplingPlan& plan, const LearnerSpec& learner) {
    if (plan.n != data.rows()) {
        throw std::invalid_argument("evaluate_plan: plan covers " + std::to_string(plan.n) + " rows, data has " +
                                    std::to_string(data.rows()));
    }
    if (plan.iterations.empty()) throw std::invalid_argument("evaluate_plan: plan has no iterations");
    LossEstimate out;
    out.iteration_loss.reserve(plan.iterations.size());
    for (const auto& it : plan.iterations) out.iteration_loss.push_back(fit_and_score(data, it.train, it.test, learner));
    out.estimate = std::accumulate(out.iteration_loss.begin(), out.iteration_loss.end(), 0.0) /
                   static_cast<double>(out.iteration_loss.size());
    return out;
}

LossEstimate estimate_loss(const TimeSeries& estimation, Method method, const LearnerSpec& learner, std::size_t p,
                           std::uint64_t seed, const MethodSettings& settings) {
    const auto data = embed(estimation, p);
    return evaluate_plan(data, make_plan(method, data.rows(), p, seed, settings), learner);
}

double true_loss(const TimeSeries& estimation, const TimeSeries& validation, const LearnerSpec& learner,
                 std::size_t p) {
    std::vector<double> joined(estimation.values().begin(), estimation.values().end());
    joined.insert(joined.end(), validation.values().begin(), validation.values().end());
    if (estimation.size() <= p) {
        throw std::invalid_argument("true_loss: estimation set of length " + std::to_string(estimation.size()) +
                                    " has no rows at p = " + std::to_string(p));
    }
    const auto data = embed(TimeSeries(std::move(joined)), p);
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t k = 0; k < data.rows(); ++k) {
        (data.target_time[k] < estimation.size() ? train : test).push_back(k);
    }
    return fit_and_score(data, train, test, learner);
}

double pct_diff(double estimate, double true_loss) {
    if (!(true_loss > 0.0)) throw std::invalid_argument("pct_diff: true loss must be positive");
    return 100.0 * (estimate - true_loss) / true_loss;
}

EstimationResult make_result(std::string problem_id, std::string method, double estimate, double true_loss) {
    EstimationResult r;
    r.problem_id = std::move(problem_id);
    r.method = std::move(method);
    r.estimate = estimate;
    r.true_loss = true_loss;
    r.pae = pae(estimate, true_loss);
    r.apae = std::abs(r.pae);
    r.pct_diff = true_loss > 0.0 ? pct_diff(estimate, true_loss) : std::numeric_limits<double>::quiet_NaN();
    return r;
}

void write_results_csv(std::ostream& out, std::span<const EstimationResult> results) {
    out << kResultsHeader << '\n';
    for (const auto& r : results) {
        out << r.problem_id << ',' << r.method << ',' << format_double(r.estimate) << ',' << format_double(r.true_loss)
            << ',' << format_double(r.apae) << ',' << format_double(r.pae) << ','
            << (std::isnan(r.pct_diff) ? std::string("nan") : format_double(r.pct_diff)) << '\n';
    }
}

void write_results_csv(const std::filesystem::path& path, std::span<const EstimationResult> results) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    write_results_csv(out, results);
}

std::vector<EstimationResult> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path.string() + "': empty results file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kResultsHeader) throw DataError("'" + path.string() + "': unexpected header '" + line + "'");

    std::vector<EstimationResult> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 7) throw DataError("'" + path.string() + "': row " + std::to_string(line_no) + " has " +
                                           std::to_string(f.size()) + " fields");
        EstimationResult r;
        r.problem_id = std::string(f[0]);
        r.method = std::string(f[1]);
        r.estimate = parse_field(f[2], line_no);
        r.true_loss = parse_field(f[3], line_no);
        r.apae = parse_field(f[4], line_no);
        r.pae = parse_field(f[5], line_no);
        r.pct_diff = parse_field(f[6], line_no);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<double> rank_row(std::span<const double> row) {
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
    std::vector<double> ranks(row.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && row[order[j + 1]] == row[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

RankTable average_ranks(const std::vector<std::vector<double>>& matrix, std::vector<std::string> methods) {
    if (matrix.empty() || matrix.front().empty()) throw std::invalid_argument("average_ranks: empty matrix");
    const auto z = matrix.front().size();
    if (!methods.empty() && methods.size() != z) throw std::invalid_argument("average_ranks: method count mismatch");

    std::vector<double> sum(z, 0.0);
    std::vector<double> sum_sq(z, 0.0);
    for (const auto& row : matrix) {
        if (row.size() != z) throw std::invalid_argument("average_ranks: ragged matrix");
        for (double v : row) {
            if (std::isnan(v)) throw std::invalid_argument("average_ranks: NaN entry");
        }
        const auto ranks = rank_row(row);
        for (std::size_t m = 0; m < z; ++m) {
            sum[m] += ranks[m];
            sum_sq[m] += ranks[m] * ranks[m];
        }
    }
    RankTable table;
    table.problems = matrix.size();
    table.methods = std::move(methods);
    const auto count = static_cast<double>(matrix.size());
    for (std::size_t m = 0; m < z; ++m) {
        const double mean = sum[m] / count;
        table.mean_rank.push_back(mean);
        const double var = matrix.size() > 1 ? std::max(0.0, (sum_sq[m] - count * mean * mean) / (count - 1.0)) : 0.0;
        table.sd_rank.push_back(std::sqrt(var));
    }
    return table;
}

SignTestResult bayes_sign_test(std::span<const double> differences, double rope_low, double rope_high,
                               std::size_t samples, double prior_strength, std::uint64_t seed) {
    if (differences.empty()) throw std::invalid_argument("bayes_sign_test: no differences");
    if (!(rope_low < rope_high)) throw std::invalid_argument("bayes_sign_test: rope_low must be below rope_high");
    if (samples == 0) throw std::invalid_argument("bayes_sign_test: samples must be positive");
    if (!(prior_strength >= 0.0)) throw std::invalid_argument("bayes_sign_test: prior must be non-negative");

    SignTestResult out;
    for (double d : differences) {
        if (d < rope_low) {
            ++out.n_left;
        } else if (d > rope_high) {
            ++out.n_right;
        } else {
            ++out.n_rope;
        }
    }
    const std::array<double, 3> alpha = {static_cast<double>(out.n_left),
                                         static_cast<double>(out.n_rope) + prior_strength,
                                         static_cast<double>(out.n_right)};
    std::array<std::gamma_distribution<double>, 3> gamma;
    for (std::size_t c = 0; c < 3; ++c) {
        if (alpha[c] > 0.0) gamma[c] = std::gamma_distribution<double>(alpha[c], 1.0);
    }

    Rng rng(seed);
    std::array<double, 3> wins{0.0, 0.0, 0.0};
    for (std::size_t s = 0; s < samples; ++s) {
        // Normalization does not change which component is largest.
        std::array<double, 3> draw{};
        for (std::size_t c = 0; c < 3; ++c) draw[c] = alpha[c] > 0.0 ? gamma[c](rng) : 0.0;
        const double best = std::max({draw[0], draw[1], draw[2]});
        const double ties = static_cast<double>(std::count(draw.begin(), draw.end(), best));
        for (std::size_t c = 0; c < 3; ++c) {
            if (draw[c] == best) wins[c] += 1.0 / ties;
        }
    }
    const auto total = static_cast<double>(samples);
    out.p_left = wins[0] / total;
    out.p_rope = wins[1] / total;
    out.p_right = wins[2] / total;
    return out;
}

std::vector<double> relative_apae_differences(std::span<const EstimationResult> results, const std::string& method,
                                              const std::string& baseline) {
    std::map<std::string, const EstimationResult*> base;
    for (const auto& r : results) {
        if (r.method == baseline) base[r.problem_id] = &r;
    }
    std::vector<double> out;
    for (const auto& r : results) {
        if (r.method != method) continue;
        const auto it = base.find(r.problem_id);
        if (it == base.end() || !(r.true_loss > 0.0)) continue;
        out.push_back(100.0 * (r.apae - it->second->apae) / r.true_loss);
    }
    return out;
}

}  // namespace tseval
