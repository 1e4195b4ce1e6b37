#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "plan_checks.hpp"
#include "tseval/splitters.hpp"

using namespace tseval;
using Rows = std::vector<std::size_t>;

namespace {

Rows rows(std::initializer_list<std::size_t> r) { return Rows(r); }

std::vector<Rows> tests_of(const ResamplingPlan& p) {
    std::vector<Rows> out;
    for (const auto& it : p.iterations) out.push_back(it.test);
    return out;
}

}  // namespace

TEST(MethodNames, RoundTrip) {
    for (auto m : kAllMethods) {
        EXPECT_EQ(parse_method(method_name(m)), m);
    }
    EXPECT_EQ(parse_method("cv-hvbl"), Method::CVHvBl);
    EXPECT_FALSE(parse_method("CV-Foo").has_value());
    EXPECT_TRUE(is_out_of_sample(Method::PreqGrow));
    EXPECT_FALSE(is_out_of_sample(Method::CVMod));
}

TEST(BlockPartition, RemainderGoesToEarliestBlocks) {
    const auto b = block_partition(7, 3);
    ASSERT_EQ(b.size(), 3u);
    EXPECT_EQ(b[0].begin, 0u);
    EXPECT_EQ(b[0].end, 3u);
    EXPECT_EQ(b[1].end, 5u);
    EXPECT_EQ(b[2].end, 7u);

    const auto big = block_partition(195, 10);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(big[i].end - big[i].begin, i < 5 ? 20u : 19u);
}

TEST(PlanCv, PartitionOfSix) {
    const auto p = plan_cv(6, 3, 42);
    ASSERT_EQ(p.iterations.size(), 3u);
    EXPECT_EQ(plan_checks::check_plan(p, Method::CV, 6, 3, 1), "");
    for (const auto& it : p.iterations) EXPECT_EQ(it.test.size(), 2u);
}

TEST(PlanCv, UnshuffledEqualsBlocked) {
    EXPECT_EQ(plan_cv(6, 3, 1, false).iterations, plan_cv_bl(6, 3).iterations);
}

TEST(PlanCv, LeaveOneOut) {
    const auto p = plan_cv(10, 10, 3);
    for (const auto& it : p.iterations) EXPECT_EQ(it.test.size(), 1u);
    EXPECT_EQ(plan_checks::check_plan(p, Method::CV, 10, 10, 1), "");
}

TEST(PlanCv, FoldsExceedRows) { EXPECT_THROW((void)plan_cv(3, 4, 0), std::invalid_argument); }

TEST(PlanCvBl, Examples) {
    const auto p = plan_cv_bl(6, 3);
    EXPECT_EQ(tests_of(p), (std::vector<Rows>{rows({0, 1}), rows({2, 3}), rows({4, 5})}));
    EXPECT_EQ(p.iterations[1].train, rows({0, 1, 4, 5}));
    EXPECT_EQ(tests_of(plan_cv_bl(7, 3)), (std::vector<Rows>{rows({0, 1, 2}), rows({3, 4}), rows({5, 6})}));
}

TEST(PlanCvMod, RemovalRadiusExample) {
    // Search seeds for a fold equal to {2, 5} and check the hand-enumerated exclusions.
    bool found = false;
    for (std::uint64_t seed = 0; seed < 5000 && !found; ++seed) {
        const auto p = plan_cv_mod(8, 4, 1, seed);
        for (const auto& it : p.iterations) {
            if (it.test == rows({2, 5})) {
                EXPECT_EQ(it.train, rows({0, 7}));
                EXPECT_EQ(it.gap, rows({1, 3, 4, 6}));
                found = true;
            }
        }
    }
    EXPECT_TRUE(found);
}

TEST(PlanCvMod, Errors) {
    EXPECT_THROW((void)plan_cv_mod(8, 4, 0, 1), std::invalid_argument);
    try {
        (void)plan_cv_mod(8, 2, 10, 1);
        FAIL() << "expected an empty training set";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("empty training set"), std::string::npos);
    }
}

TEST(PlanCvHvBl, Examples) {
    const auto p = plan_cv_hvbl(10, 5, 1);
    EXPECT_EQ(p.iterations[2].test, rows({4, 5}));
    EXPECT_EQ(p.iterations[2].train, rows({0, 1, 2, 7, 8, 9}));
    EXPECT_EQ(p.iterations[2].gap, rows({3, 6}));
    EXPECT_EQ(p.iterations[0].test, rows({0, 1}));
    EXPECT_EQ(p.iterations[0].gap, rows({2}));
}

TEST(PlanCvHvBl, AtMostTwoPExclusions) {
    const auto p = plan_cv_hvbl(195, 10, 5);
    for (std::size_t k = 0; k < p.iterations.size(); ++k) {
        const auto& gap = p.iterations[k].gap;
        EXPECT_EQ(gap.size(), (k == 0 || k == 9) ? 5u : 10u);
    }
}

TEST(PlanHoldout, Examples) {
    auto p = plan_holdout(10, 0.7);
    EXPECT_EQ(p.iterations[0].train, rows({0, 1, 2, 3, 4, 5, 6}));
    EXPECT_EQ(p.iterations[0].test, rows({7, 8, 9}));
    p = plan_holdout(2, 0.5);
    EXPECT_EQ(p.iterations[0].train, rows({0}));
    EXPECT_EQ(p.iterations[0].test, rows({1}));
    p = plan_holdout(140, 0.7);
    EXPECT_EQ(p.iterations[0].train.size(), 98u);
    EXPECT_EQ(p.iterations[0].test.size(), 42u);
    EXPECT_THROW((void)plan_holdout(1, 0.7), std::invalid_argument);
}

TEST(PlanRepHoldout, CutPointsCoverTheInclusiveRange) {
    // Both extreme cut points must be reachable.
    bool low = false;
    bool high = false;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto p = plan_rep_holdout(100, 10, 0.6, 0.1, seed);
        ASSERT_EQ(p.iterations.size(), 10u);
        EXPECT_EQ(plan_checks::check_plan(p, Method::RepHoldout, 100, 10, 1), "");
        for (const auto& it : p.iterations) {
            if (it.test.front() == 60) {
                low = true;
                EXPECT_EQ(it.train.front(), 0u);
                EXPECT_EQ(it.test.back(), 69u);
            }
            if (it.test.front() == 90) {
                high = true;
                EXPECT_EQ(it.train.front(), 30u);
                EXPECT_EQ(it.test.back(), 99u);
            }
        }
    }
    EXPECT_TRUE(low);
    EXPECT_TRUE(high);
    EXPECT_THROW((void)plan_rep_holdout(100, 10, 0.95, 0.1, 1), std::invalid_argument);
}

TEST(PlanPreqBls, Examples) {
    const auto p = plan_preq_bls(10, 5);
    ASSERT_EQ(p.iterations.size(), 4u);
    EXPECT_EQ(p.iterations[0].train, rows({0, 1}));
    EXPECT_EQ(p.iterations[0].test, rows({2, 3}));
    EXPECT_EQ(p.iterations[3].train, rows({0, 1, 2, 3, 4, 5, 6, 7}));
    EXPECT_EQ(p.iterations[3].test, rows({8, 9}));
    const auto m = plan_preq_bls(4, 2);
    ASSERT_EQ(m.iterations.size(), 1u);
    const auto big = plan_preq_bls(195, 10);
    EXPECT_EQ(big.iterations.size(), 9u);
    EXPECT_EQ(big.iterations.back().train.size(), 176u);
}

TEST(PlanPreqSldBls, Examples) {
    const auto p = plan_preq_sld_bls(10, 5);
    const std::vector<Rows> train{rows({0, 1}), rows({2, 3}), rows({4, 5}), rows({6, 7})};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(p.iterations[k].train, train[k]);
    EXPECT_EQ(plan_preq_sld_bls(4, 2).iterations, plan_preq_bls(4, 2).iterations);
}

TEST(PlanPreqSldBls, WiderWindowKnob) {
    const auto p = plan_preq_sld_bls(10, 5, 2);
    EXPECT_EQ(p.iterations[0].train, rows({0, 1}));
    EXPECT_EQ(p.iterations[2].train, rows({2, 3, 4, 5}));
    EXPECT_EQ(p.iterations[2].test, rows({6, 7}));
}

TEST(PlanPreqBlsGap, Examples) {
    const auto p = plan_preq_bls_gap(10, 5);
    ASSERT_EQ(p.iterations.size(), 3u);
    EXPECT_EQ(p.iterations[0].train, rows({0, 1}));
    EXPECT_EQ(p.iterations[0].gap, rows({2, 3}));
    EXPECT_EQ(p.iterations[0].test, rows({4, 5}));
    EXPECT_EQ(p.iterations[2].train, rows({0, 1, 2, 3, 4, 5}));
    EXPECT_EQ(p.iterations[2].test, rows({8, 9}));
    EXPECT_THROW((void)plan_preq_bls_gap(10, 2), std::invalid_argument);
}

TEST(PlanPreqGrow, Examples) {
    auto p = plan_preq_grow(5, 2, 1);
    ASSERT_EQ(p.iterations.size(), 3u);
    EXPECT_EQ(p.iterations[0].train, rows({0, 1}));
    EXPECT_EQ(p.iterations[2].train, rows({0, 1, 2, 3}));
    EXPECT_EQ(p.iterations[2].test, rows({4}));
    p = plan_preq_grow(5, 2, 2);
    ASSERT_EQ(p.iterations.size(), 2u);
    EXPECT_EQ(p.iterations[0].test, rows({2, 3}));
    EXPECT_EQ(p.iterations[1].train, rows({0, 1, 2, 3}));
    EXPECT_EQ(p.iterations[1].test, rows({4}));
    EXPECT_THROW((void)plan_preq_grow(5, 5, 1), std::invalid_argument);
}

TEST(PlanPreqSlide, Examples) {
    const auto p = plan_preq_slide(5, 2, 1);
    ASSERT_EQ(p.iterations.size(), 3u);
    EXPECT_EQ(p.iterations[1].train, rows({1, 2}));
    EXPECT_EQ(p.iterations[2].train, rows({2, 3}));
    const auto last = plan_preq_slide(6, 5, 1);
    ASSERT_EQ(last.iterations.size(), 1u);
    EXPECT_EQ(last.iterations[0], plan_preq_grow(6, 5, 1).iterations.back());
}

TEST(PlanProperties, RandomInstancesSatisfyInvariants) {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(30, 300)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(3, 10)(rng);
        const std::size_t p = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        for (auto m : kAllMethods) {
            const auto plan = make_plan(m, n, p, rng(), MethodSettings{.folds = k});
            EXPECT_EQ(plan_checks::check_plan(plan, m, n, k, p), "") << method_name(m) << " n=" << n << " K=" << k;
        }
    }
}

TEST(PlanProperties, SeededPlansAreReproducible) {
    for (auto m : kAllMethods) {
        EXPECT_EQ(make_plan(m, 137, 4, 99), make_plan(m, 137, 4, 99)) << method_name(m);
    }
    EXPECT_NE(plan_cv(50, 5, 1).iterations, plan_cv(50, 5, 2).iterations);
    EXPECT_EQ(make_plan(Method::CVBl, 50, 2, 1).iterations, make_plan(Method::CVBl, 50, 2, 2).iterations);
}

TEST(PlanJson, RoundTrip) {
    for (auto m : kAllMethods) {
        const auto plan = make_plan(m, 60, 3, 5);
        const auto j = to_json(plan);
        EXPECT_EQ(j.at("method").get<std::string>(), std::string(method_name(m)));
        EXPECT_TRUE(j.at("iterations").at(0).contains("gap"));
        EXPECT_EQ(plan_from_json(nlohmann::json::parse(j.dump())), plan);
    }
}
