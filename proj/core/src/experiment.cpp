#include "tseval/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "tseval/rng.hpp"

namespace tseval {

namespace {

struct ProblemOutcome {
    std::vector<EstimationResult> results;
    std::vector<Failure> failures;
};

class JsonLog {
public:
    explicit JsonLog(std::ostream* out) : out_(out) {}

    void write(const nlohmann::json& event) {
        if (out_ == nullptr) return;
        const std::lock_guard lock(mutex_);
        *out_ << event.dump() << '\n';
    }

private:
    std::ostream* out_;
    std::mutex mutex_;
};

ProblemOutcome run_problem(const ExperimentConfig& config, const Problem& problem, std::size_t index, JsonLog& log) {
    ProblemOutcome out;
    std::size_t p = 0;
    double loss = 0.0;
    std::optional<TimeSeries> estimation;
    try {
        auto [est, val] = estimation_validation_split(problem.series, config.estimation_fraction);
        if (config.embedding_dimension) {
            p = *config.embedding_dimension;
        } else {
            const auto fnn = estimate_embedding_dimension(est, config.fnn);
            p = fnn.dimension;
            if (!fnn.tolerance_reached) {
                log.write({{"event", "warning"},
                           {"problem", problem.id},
                           {"reason", "false-neighbour tolerance not reached; using max dimension"}});
            }
        }
        loss = true_loss(est, val, config.learner, p);
        estimation.emplace(std::move(est));
    } catch (const std::exception& e) {
        out.failures.push_back({problem.id, "", e.what()});
        log.write({{"event", "failure"}, {"problem", problem.id}, {"reason", e.what()}});
        return out;
    }

    for (const auto method : config.methods) {
        const auto name = std::string(method_name(method));
        try {
            const auto estimate = estimate_loss(*estimation, method, config.learner, p,
                                                method_seed(config.base_seed, index, method), config.settings);
            out.results.push_back(make_result(problem.id, name, estimate.estimate, loss));
        } catch (const std::exception& e) {
            out.failures.push_back({problem.id, name, e.what()});
            log.write({{"event", "failure"}, {"problem", problem.id}, {"method", name}, {"reason", e.what()}});
        }
    }
    log.write({{"event", "done"}, {"problem", problem.id}, {"index", index}, {"p", p}});
    return out;
}

std::vector<std::string> method_names(const std::vector<Method>& methods) {
    std::vector<std::string> out;
    for (auto m : methods) out.emplace_back(method_name(m));
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(estimation_fraction > 0.0 && estimation_fraction < 1.0)) {
        throw std::invalid_argument("config: estimation fraction must lie in (0, 1)");
    }
    if (embedding_dimension && *embedding_dimension == 0) {
        throw std::invalid_argument("config: embedding dimension must be positive");
    }
    if (settings.folds < 2) throw std::invalid_argument("config: folds must be at least 2");
    if (settings.repetitions < 1) throw std::invalid_argument("config: repetitions must be positive");
    if (methods.empty()) throw std::invalid_argument("config: no methods selected");
    if (threads == 0) throw std::invalid_argument("config: threads must be positive");
    learner.validate();
}

std::uint64_t method_seed(std::uint64_t base_seed, std::size_t problem, Method method) noexcept {
    return derive_seed(base_seed, {static_cast<std::uint64_t>(problem), hash_name(method_name(method))});
}

ExperimentOutput run_experiment(const ExperimentConfig& config, const std::vector<Problem>& problems,
                                std::ostream* log_stream) {
    config.validate();
    JsonLog log(log_stream);
    std::vector<ProblemOutcome> outcomes(problems.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < problems.size(); i = next++) {
            outcomes[i] = run_problem(config, problems[i], i, log);
        }
    };
    const auto workers = std::min(config.threads, std::max<std::size_t>(1, problems.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    }

    ExperimentOutput output;
    for (auto& o : outcomes) {
        std::move(o.results.begin(), o.results.end(), std::back_inserter(output.results));
        std::move(o.failures.begin(), o.failures.end(), std::back_inserter(output.failures));
    }
    const auto names = method_names(config.methods);
    if (!output.results.empty()) {
        try {
            output.ranks = rank_results(output.results, names);
        } catch (const std::invalid_argument&) {
            output.ranks.methods = names;  // no problem finished every method
        }
    }
    return output;
}

RankTable rank_results(std::span<const EstimationResult> results, const std::vector<std::string>& methods) {
    std::map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < methods.size(); ++i) column[methods[i]] = i;

    // Keep first-appearance order of problems.
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::optional<double>>> rows;
    for (const auto& r : results) {
        const auto c = column.find(r.method);
        if (c == column.end()) continue;
        auto [it, inserted] = rows.try_emplace(r.problem_id, methods.size());
        if (inserted) order.push_back(r.problem_id);
        it->second[c->second] = r.apae;
    }
    std::vector<std::vector<double>> matrix;
    for (const auto& id : order) {
        const auto& row = rows[id];
        if (std::any_of(row.begin(), row.end(), [](const auto& v) { return !v.has_value(); })) continue;
        std::vector<double> values;
        for (const auto& v : row) values.push_back(*v);
        matrix.push_back(std::move(values));
    }
    return average_ranks(matrix, methods);
}

std::vector<MethodComparison> compare_to_baseline(std::span<const EstimationResult> results,
                                                  const std::vector<std::string>& methods,
                                                  const ComparisonOptions& options) {
    std::vector<MethodComparison> out;
    for (const auto& m : methods) {
        if (m == options.baseline) continue;
        const auto diffs = relative_apae_differences(results, m, options.baseline);
        if (diffs.empty()) continue;
        out.push_back({m, bayes_sign_test(diffs, -options.rope, options.rope, options.samples, options.prior_strength,
                                          derive_seed(options.seed, {hash_name(m)}))});
    }
    return out;
}

std::vector<Problem> synthetic_problems(const DgpSpec& dgp, std::size_t trials, std::uint64_t base_seed) {
    std::vector<Problem> problems;
    problems.reserve(trials);
    for (auto& sim : monte_carlo(dgp, trials, base_seed)) {
        auto id = sim.series.name();
        problems.push_back({std::move(id), std::move(sim.series)});
    }
    return problems;
}

SyntheticStudy reproduce_synthetic(const DgpSpec& dgp, std::size_t trials, ExperimentConfig config,
                                   const ComparisonOptions& comparison, std::ostream* log) {
    if (!config.embedding_dimension) config.embedding_dimension = 5;
    SyntheticStudy study;
    study.output = run_experiment(config, synthetic_problems(dgp, trials, config.base_seed), log);
    study.comparisons = compare_to_baseline(study.output.results, method_names(config.methods), comparison);
    return study;
}

void write_rank_table(std::ostream& out, const RankTable& table) {
    out << "method,mean_rank,sd_rank,problems\n";
    for (std::size_t i = 0; i < table.mean_rank.size(); ++i) {
        const auto name = i < table.methods.size() ? table.methods[i] : std::to_string(i);
        out << name << ',' << format_double(table.mean_rank[i]) << ',' << format_double(table.sd_rank[i]) << ','
            << table.problems << '\n';
    }
}

void write_comparisons(std::ostream& out, std::span<const MethodComparison> comparisons, const std::string& baseline) {
    out << "method,baseline,p_method_better,p_equivalent,p_baseline_better,n_better,n_equivalent,n_worse\n";
    for (const auto& c : comparisons) {
        out << c.method << ',' << baseline << ',' << format_double(c.test.p_left) << ','
            << format_double(c.test.p_rope) << ',' << format_double(c.test.p_right) << ',' << c.test.n_left << ','
            << c.test.n_rope << ',' << c.test.n_right << '\n';
    }
}

}  // namespace tseval
