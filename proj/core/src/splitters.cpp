#include "tseval/splitters.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tseval {

namespace {

constexpr std::array<std::string_view, 11> kNames = {
    "Holdout",   "Rep-Holdout", "Preq-Bls", "Preq-Sld-Bls", "Preq-Bls-Gap", "Preq-Grow",
    "Preq-Slide", "CV",         "CV-Bl",    "CV-Mod",       "CV-hvBl",
};

std::vector<std::size_t> range(std::size_t first, std::size_t last) {
    std::vector<std::size_t> out(last > first ? last - first : 0);
    std::iota(out.begin(), out.end(), first);
    return out;
}

void require_folds(std::size_t n, std::size_t folds, std::size_t min_folds, const char* who) {
    if (folds < min_folds) {
        throw std::invalid_argument(std::string(who) + ": need at least " + std::to_string(min_folds) +
                                    " folds, got " + std::to_string(folds));
    }
    if (folds > n) {
        throw std::invalid_argument(std::string(who) + ": " + std::to_string(folds) + " folds exceed " +
                                    std::to_string(n) + " rows");
    }
}

std::size_t floor_size(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

// Complement of test within [0, n), moving rows excluded by `excluded` into the gap.
template <typename Excluded>
Iteration with_exclusions(std::size_t n, std::vector<std::size_t> test, Excluded&& excluded, std::size_t fold,
                          const char* who) {
    std::vector<bool> in_test(n, false);
    for (auto j : test) in_test[j] = true;
    Iteration it;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_test[i]) continue;
        (excluded(i) ? it.gap : it.train).push_back(i);
    }
    if (it.train.empty()) {
        throw std::invalid_argument(std::string(who) + ": empty training set in iteration " + std::to_string(fold));
    }
    it.test = std::move(test);
    return it;
}

std::vector<std::vector<std::size_t>> random_folds(std::size_t n, std::size_t folds, std::uint64_t seed,
                                                   bool shuffle) {
    auto order = range(0, n);
    if (shuffle) {
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::vector<std::vector<std::size_t>> out;
    for (const auto& b : block_partition(n, folds)) {
        std::vector<std::size_t> fold(order.begin() + static_cast<std::ptrdiff_t>(b.begin),
                                      order.begin() + static_cast<std::ptrdiff_t>(b.end));
        std::sort(fold.begin(), fold.end());
        out.push_back(std::move(fold));
    }
    return out;
}

}  // namespace

std::string_view method_name(Method m) noexcept { return kNames[static_cast<std::size_t>(m)]; }

std::optional<Method> parse_method(std::string_view name) {
    auto lower = [](std::string_view s) {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
        return out;
    };
    const auto wanted = lower(name);
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (lower(kNames[i]) == wanted) return kAllMethods[i];
    }
    return std::nullopt;
}

bool is_out_of_sample(Method m) noexcept {
    switch (m) {
        case Method::CV:
        case Method::CVBl:
        case Method::CVMod:
        case Method::CVHvBl:
            return false;
        default:
            return true;
    }
}

std::vector<Block> block_partition(std::size_t n, std::size_t folds) {
    if (folds == 0 || folds > n) {
        throw std::invalid_argument("block_partition: need 1 <= folds <= n");
    }
    std::vector<Block> blocks(folds);
    const auto base = n / folds;
    const auto extra = n % folds;
    std::size_t start = 0;
    for (std::size_t i = 0; i < folds; ++i) {
        const auto size = base + (i < extra ? 1 : 0);
        blocks[i] = {start, start + size};
        start += size;
    }
    return blocks;
}

ResamplingPlan plan_cv(std::size_t n, std::size_t folds, std::uint64_t seed, bool shuffle) {
    require_folds(n, folds, 2, "plan_cv");
    ResamplingPlan plan{Method::CV, n, {}, {}};
    plan.params.folds = folds;
    plan.params.seed = seed;
    std::size_t k = 0;
    for (auto& test : random_folds(n, folds, seed, shuffle)) {
        plan.iterations.push_back(with_exclusions(n, std::move(test), [](std::size_t) { return false; }, k++,
                                                  "plan_cv"));
    }
    return plan;
}

ResamplingPlan plan_cv_bl(std::size_t n, std::size_t folds) {
    require_folds(n, folds, 2, "plan_cv_bl");
    ResamplingPlan plan{Method::CVBl, n, {}, {}};
    plan.params.folds = folds;
    std::size_t k = 0;
    for (const auto& b : block_partition(n, folds)) {
        plan.iterations.push_back(with_exclusions(n, range(b.begin, b.end), [](std::size_t) { return false; }, k++,
                                                  "plan_cv_bl"));
    }
    return plan;
}

ResamplingPlan plan_cv_mod(std::size_t n, std::size_t folds, std::size_t removal, std::uint64_t seed) {
    require_folds(n, folds, 2, "plan_cv_mod");
    if (removal == 0) throw std::invalid_argument("plan_cv_mod: removal radius must be at least 1");
    ResamplingPlan plan{Method::CVMod, n, {}, {}};
    plan.params.folds = folds;
    plan.params.removal = removal;
    plan.params.seed = seed;
    std::size_t k = 0;
    for (auto& test : random_folds(n, folds, seed, true)) {
        // Distance from each row to the nearest test row, by two sweeps.
        std::vector<std::size_t> nearest(n, n + removal + 1);
        std::vector<bool> in_test(n, false);
        for (auto j : test) in_test[j] = true;
        std::size_t last = n + removal + 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (in_test[i]) last = i;
            if (last <= i) nearest[i] = std::min(nearest[i], i - last);
        }
        bool seen = false;
        for (std::size_t i = n; i-- > 0;) {
            if (in_test[i]) {
                last = i;
                seen = true;
            }
            if (seen) nearest[i] = std::min(nearest[i], last - i);
        }
        plan.iterations.push_back(with_exclusions(
            n, std::move(test), [&](std::size_t i) { return nearest[i] <= removal; }, k++, "plan_cv_mod"));
    }
    return plan;
}

ResamplingPlan plan_cv_hvbl(std::size_t n, std::size_t folds, std::size_t removal) {
    require_folds(n, folds, 2, "plan_cv_hvbl");
    if (removal == 0) throw std::invalid_argument("plan_cv_hvbl: removal radius must be at least 1");
    ResamplingPlan plan{Method::CVHvBl, n, {}, {}};
    plan.params.folds = folds;
    plan.params.removal = removal;
    std::size_t k = 0;
    for (const auto& b : block_partition(n, folds)) {
        const auto lo = b.begin > removal ? b.begin - removal : 0;
        const auto hi = b.end + removal;  // exclusive
        plan.iterations.push_back(with_exclusions(
            n, range(b.begin, b.end), [&](std::size_t i) { return i >= lo && i < hi; }, k++, "plan_cv_hvbl"));
    }
    return plan;
}

ResamplingPlan plan_holdout(std::size_t n, double train_fraction) {
    const auto cut = floor_size(train_fraction, n);
    if (!(train_fraction > 0.0 && train_fraction < 1.0) || cut < 1 || cut >= n) {
        throw std::invalid_argument("plan_holdout: fraction " + std::to_string(train_fraction) +
                                    " leaves an empty side for n = " + std::to_string(n));
    }
    ResamplingPlan plan{Method::Holdout, n, {}, {}};
    plan.params.train_fraction = train_fraction;
    plan.iterations.push_back({range(0, cut), range(cut, n), {}});
    return plan;
}

ResamplingPlan plan_rep_holdout(std::size_t n, std::size_t repetitions, double train_fraction, double test_fraction,
                                std::uint64_t seed) {
    const auto train_size = floor_size(train_fraction, n);
    const auto test_size = floor_size(test_fraction, n);
    if (repetitions == 0 || train_size < 1 || test_size < 1 || train_fraction + test_fraction > 1.0 ||
        train_size + test_size > n) {
        throw std::invalid_argument("plan_rep_holdout: windows (" + std::to_string(train_fraction) + ", " +
                                    std::to_string(test_fraction) + ") infeasible for n = " + std::to_string(n));
    }
    ResamplingPlan plan{Method::RepHoldout, n, {}, {}};
    plan.params.repetitions = repetitions;
    plan.params.train_fraction = train_fraction;
    plan.params.test_fraction = test_fraction;
    plan.params.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> cut_point(train_size, n - test_size);
    for (std::size_t r = 0; r < repetitions; ++r) {
        const auto a = cut_point(rng);
        plan.iterations.push_back({range(a - train_size, a), range(a, a + test_size), {}});
    }
    return plan;
}

ResamplingPlan plan_preq_bls(std::size_t n, std::size_t folds) {
    require_folds(n, folds, 2, "plan_preq_bls");
    ResamplingPlan plan{Method::PreqBls, n, {}, {}};
    plan.params.folds = folds;
    const auto blocks = block_partition(n, folds);
    for (std::size_t i = 0; i + 1 < folds; ++i) {
        plan.iterations.push_back({range(0, blocks[i].end), range(blocks[i + 1].begin, blocks[i + 1].end), {}});
    }
    return plan;
}

ResamplingPlan plan_preq_sld_bls(std::size_t n, std::size_t folds, std::size_t window_blocks) {
    require_folds(n, folds, 2, "plan_preq_sld_bls");
    if (window_blocks == 0) throw std::invalid_argument("plan_preq_sld_bls: window must span at least one block");
    ResamplingPlan plan{Method::PreqSldBls, n, {}, {}};
    plan.params.folds = folds;
    plan.params.window = window_blocks;
    const auto blocks = block_partition(n, folds);
    for (std::size_t i = 0; i + 1 < folds; ++i) {
        const auto first = i + 1 >= window_blocks ? i + 1 - window_blocks : 0;
        plan.iterations.push_back(
            {range(blocks[first].begin, blocks[i].end), range(blocks[i + 1].begin, blocks[i + 1].end), {}});
    }
    return plan;
}

ResamplingPlan plan_preq_bls_gap(std::size_t n, std::size_t folds) {
    require_folds(n, folds, 3, "plan_preq_bls_gap");
    ResamplingPlan plan{Method::PreqBlsGap, n, {}, {}};
    plan.params.folds = folds;
    const auto blocks = block_partition(n, folds);
    for (std::size_t i = 0; i + 2 < folds; ++i) {
        plan.iterations.push_back({range(0, blocks[i].end), range(blocks[i + 2].begin, blocks[i + 2].end),
                                   range(blocks[i + 1].begin, blocks[i + 1].end)});
    }
    return plan;
}

ResamplingPlan plan_preq_grow(std::size_t n, std::size_t initial_window, std::size_t refit_interval) {
    if (initial_window < 1 || initial_window >= n) {
        throw std::invalid_argument("plan_preq_grow: initial window must lie in [1, n-1]");
    }
    if (refit_interval < 1) throw std::invalid_argument("plan_preq_grow: refit interval must be positive");
    ResamplingPlan plan{Method::PreqGrow, n, {}, {}};
    plan.params.window = initial_window;
    plan.params.refit_interval = refit_interval;
    for (std::size_t j = initial_window; j < n; j += refit_interval) {
        plan.iterations.push_back({range(0, j), range(j, std::min(j + refit_interval, n)), {}});
    }
    return plan;
}

ResamplingPlan plan_preq_slide(std::size_t n, std::size_t window, std::size_t refit_interval) {
    if (window < 1 || window >= n) {
        throw std::invalid_argument("plan_preq_slide: window must lie in [1, n-1]");
    }
    if (refit_interval < 1) throw std::invalid_argument("plan_preq_slide: refit interval must be positive");
    ResamplingPlan plan{Method::PreqSlide, n, {}, {}};
    plan.params.window = window;
    plan.params.refit_interval = refit_interval;
    for (std::size_t j = window; j < n; j += refit_interval) {
        plan.iterations.push_back({range(j - window, j), range(j, std::min(j + refit_interval, n)), {}});
    }
    return plan;
}

ResamplingPlan make_plan(Method method, std::size_t n, std::size_t removal, std::uint64_t seed,
                         const MethodSettings& s) {
    const auto window = s.prequential_window > 0 ? s.prequential_window : std::max<std::size_t>(1, n / s.folds);
    switch (method) {
        case Method::Holdout:
            return plan_holdout(n, s.holdout_train_fraction);
        case Method::RepHoldout:
            return plan_rep_holdout(n, s.repetitions, s.rep_holdout_train_fraction, s.rep_holdout_test_fraction,
                                    seed);
        case Method::PreqBls:
            return plan_preq_bls(n, s.folds);
        case Method::PreqSldBls:
            return plan_preq_sld_bls(n, s.folds, s.sliding_blocks);
        case Method::PreqBlsGap:
            return plan_preq_bls_gap(n, s.folds);
        case Method::PreqGrow:
            return plan_preq_grow(n, window, s.refit_interval);
        case Method::PreqSlide:
            return plan_preq_slide(n, window, s.refit_interval);
        case Method::CV:
            return plan_cv(n, s.folds, seed);
        case Method::CVBl:
            return plan_cv_bl(n, s.folds);
        case Method::CVMod:
            return plan_cv_mod(n, s.folds, removal, seed);
        case Method::CVHvBl:
            return plan_cv_hvbl(n, s.folds, removal);
    }
    throw std::invalid_argument("make_plan: unknown method");
}

nlohmann::json to_json(const ResamplingPlan& plan) {
    nlohmann::json params = {
        {"folds", plan.params.folds},
        {"removal", plan.params.removal},
        {"repetitions", plan.params.repetitions},
        {"train_fraction", plan.params.train_fraction},
        {"test_fraction", plan.params.test_fraction},
        {"window", plan.params.window},
        {"refit_interval", plan.params.refit_interval},
    };
    params["seed"] = plan.params.seed ? nlohmann::json(*plan.params.seed) : nlohmann::json(nullptr);
    nlohmann::json iterations = nlohmann::json::array();
    for (const auto& it : plan.iterations) {
        iterations.push_back({{"train", it.train}, {"test", it.test}, {"gap", it.gap}});
    }
    return {{"method", method_name(plan.method)}, {"n", plan.n}, {"params", params}, {"iterations", iterations}};
}

ResamplingPlan plan_from_json(const nlohmann::json& j) {
    ResamplingPlan plan;
    const auto name = j.at("method").get<std::string>();
    const auto method = parse_method(name);
    if (!method) throw std::invalid_argument("plan_from_json: unknown method '" + name + "'");
    plan.method = *method;
    plan.n = j.at("n").get<std::size_t>();
    const auto& p = j.at("params");
    plan.params.folds = p.at("folds").get<std::size_t>();
    plan.params.removal = p.at("removal").get<std::size_t>();
    plan.params.repetitions = p.at("repetitions").get<std::size_t>();
    plan.params.train_fraction = p.at("train_fraction").get<double>();
    plan.params.test_fraction = p.at("test_fraction").get<double>();
    plan.params.window = p.at("window").get<std::size_t>();
    plan.params.refit_interval = p.at("refit_interval").get<std::size_t>();
    if (!p.at("seed").is_null()) plan.params.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& it : j.at("iterations")) {
        plan.iterations.push_back({it.at("train").get<std::vector<std::size_t>>(),
                                   it.at("test").get<std::vector<std::size_t>>(),
                                   it.at("gap").get<std::vector<std::size_t>>()});
    }
    return plan;
}

}  // namespace tseval
