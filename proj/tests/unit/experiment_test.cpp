#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "tseval/experiment.hpp"

using namespace tseval;

namespace {

std::vector<Problem> noise_problems(std::size_t count, std::size_t length) {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> z(5, 1);
    std::vector<Problem> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> v(length);
        for (auto& x : v) x = z(rng);
        out.push_back({"p" + std::to_string(i), TimeSeries(v)});
    }
    return out;
}

}  // namespace

TEST(Experiment, SingleMethodGivesOneRowPerProblem) {
    ExperimentConfig cfg;
    cfg.methods = {Method::Holdout};
    cfg.embedding_dimension = 3;
    const auto out = run_experiment(cfg, noise_problems(1, 150));
    ASSERT_EQ(out.results.size(), 1u);
    EXPECT_EQ(out.results[0].method, "Holdout");
    EXPECT_TRUE(out.failures.empty());
    EXPECT_EQ(out.ranks.problems, 1u);
}

TEST(Experiment, ResultsAreDeterministicAndThreadIndependent) {
    ExperimentConfig cfg;
    cfg.embedding_dimension = 3;
    const auto problems = noise_problems(6, 120);
    const auto a = run_experiment(cfg, problems);
    cfg.threads = 4;
    const auto b = run_experiment(cfg, problems);
    EXPECT_EQ(a.results, b.results);
    EXPECT_EQ(a.results.size(), 6u * kAllMethods.size());
    EXPECT_EQ(a.ranks.mean_rank, b.ranks.mean_rank);
}

TEST(Experiment, FailuresAreIsolated) {
    ExperimentConfig cfg;
    cfg.methods = {Method::CVBl, Method::Holdout};
    cfg.embedding_dimension = 3;
    auto problems = noise_problems(2, 120);
    problems.insert(problems.begin() + 1, Problem{"short", TimeSeries({1, 2, 3, 4, 5, 6})});
    std::ostringstream log;
    const auto out = run_experiment(cfg, problems, &log);
    EXPECT_EQ(out.results.size(), 4u);
    ASSERT_FALSE(out.failures.empty());
    EXPECT_EQ(out.failures.front().problem_id, "short");
    EXPECT_EQ(out.ranks.problems, 2u);
    EXPECT_NE(log.str().find("short"), std::string::npos);
}

TEST(Experiment, MethodSeedsDependOnProblemAndMethod) {
    EXPECT_NE(method_seed(1, 0, Method::CV), method_seed(1, 1, Method::CV));
    EXPECT_NE(method_seed(1, 0, Method::CV), method_seed(1, 0, Method::CVMod));
    EXPECT_EQ(method_seed(1, 4, Method::CV), method_seed(1, 4, Method::CV));
}

TEST(Experiment, RejectsBadConfig) {
    ExperimentConfig cfg;
    cfg.estimation_fraction = 1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.methods.clear();
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Experiment, ComparisonsAgainstBaseline) {
    ExperimentConfig cfg;
    cfg.embedding_dimension = 2;
    cfg.methods = {Method::RepHoldout, Method::CV, Method::Holdout};
    const auto out = run_experiment(cfg, noise_problems(8, 100));
    ComparisonOptions opt;
    opt.samples = 2000;
    const auto cmp = compare_to_baseline(out.results, {"Rep-Holdout", "CV", "Holdout"}, opt);
    ASSERT_EQ(cmp.size(), 2u);
    for (const auto& c : cmp) {
        EXPECT_NE(c.method, "Rep-Holdout");
        EXPECT_EQ(c.test.n_left + c.test.n_rope + c.test.n_right, 8u);
    }
    std::ostringstream csv;
    write_comparisons(csv, cmp, opt.baseline);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
              "method,baseline,p_method_better,p_equivalent,p_baseline_better,n_better,n_equivalent,n_worse");
}
