#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tseval {

/// The eleven performance estimation procedures.
enum class Method {
    Holdout,
    RepHoldout,
    PreqBls,
    PreqSldBls,
    PreqBlsGap,
    PreqGrow,
    PreqSlide,
    CV,
    CVBl,
    CVMod,
    CVHvBl,
};

inline constexpr std::array<Method, 11> kAllMethods = {
    Method::Holdout, Method::RepHoldout, Method::PreqBls,  Method::PreqSldBls, Method::PreqBlsGap, Method::PreqGrow,
    Method::PreqSlide, Method::CV,       Method::CVBl,     Method::CVMod,      Method::CVHvBl,
};

/// Canonical display name, e.g. "Preq-Bls-Gap".
[[nodiscard]] std::string_view method_name(Method m) noexcept;

/// Case-insensitive lookup of a canonical name. Returns nullopt for unknown names.
[[nodiscard]] std::optional<Method> parse_method(std::string_view name);

/// True for methods that always train on data preceding the test window.
[[nodiscard]] bool is_out_of_sample(Method m) noexcept;

struct Iteration {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::vector<std::size_t> gap;

    friend bool operator==(const Iteration&, const Iteration&) = default;
};

/// Parameters a plan was generated with. Unused fields stay at their defaults.
struct PlanParams {
    std::size_t folds = 10;
    std::size_t removal = 0;
    std::size_t repetitions = 10;
    double train_fraction = 0.0;
    double test_fraction = 0.0;
    std::size_t window = 0;
    std::size_t refit_interval = 1;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const PlanParams&, const PlanParams&) = default;
};

struct ResamplingPlan {
    Method method = Method::Holdout;
    std::size_t n = 0;
    PlanParams params;
    std::vector<Iteration> iterations;

    friend bool operator==(const ResamplingPlan&, const ResamplingPlan&) = default;
};

/// Half-open [begin, end) row range of each of K contiguous blocks.
/// The first n mod K blocks get one extra row.
struct Block {
    std::size_t begin = 0;
    std::size_t end = 0;
};
[[nodiscard]] std::vector<Block> block_partition(std::size_t n, std::size_t folds);

// Cross-validation family. Test sets partition [0, n).

[[nodiscard]] ResamplingPlan plan_cv(std::size_t n, std::size_t folds, std::uint64_t seed, bool shuffle = true);
[[nodiscard]] ResamplingPlan plan_cv_bl(std::size_t n, std::size_t folds);
/// Randomized folds; training rows within `removal` of any test row go to the gap.
[[nodiscard]] ResamplingPlan plan_cv_mod(std::size_t n, std::size_t folds, std::size_t removal, std::uint64_t seed);
/// Contiguous folds; `removal` rows on each side of the test block go to the gap.
[[nodiscard]] ResamplingPlan plan_cv_hvbl(std::size_t n, std::size_t folds, std::size_t removal);

// Out-of-sample and prequential family. max(train) < min(test) in every iteration.

[[nodiscard]] ResamplingPlan plan_holdout(std::size_t n, double train_fraction);
[[nodiscard]] ResamplingPlan plan_rep_holdout(std::size_t n, std::size_t repetitions, double train_fraction,
                                              double test_fraction, std::uint64_t seed);
[[nodiscard]] ResamplingPlan plan_preq_bls(std::size_t n, std::size_t folds);
/// `window_blocks` is the number of most recent blocks kept for training.
[[nodiscard]] ResamplingPlan plan_preq_sld_bls(std::size_t n, std::size_t folds, std::size_t window_blocks = 1);
[[nodiscard]] ResamplingPlan plan_preq_bls_gap(std::size_t n, std::size_t folds);
[[nodiscard]] ResamplingPlan plan_preq_grow(std::size_t n, std::size_t initial_window, std::size_t refit_interval);
[[nodiscard]] ResamplingPlan plan_preq_slide(std::size_t n, std::size_t window, std::size_t refit_interval);

/// Settings shared by all procedures when a plan is built by method name.
struct MethodSettings {
    std::size_t folds = 10;
    std::size_t repetitions = 10;
    double holdout_train_fraction = 0.7;
    double rep_holdout_train_fraction = 0.6;
    double rep_holdout_test_fraction = 0.1;
    std::size_t sliding_blocks = 1;
    /// Preq-Grow initial window / Preq-Slide window; 0 means floor(n / folds).
    std::size_t prequential_window = 0;
    std::size_t refit_interval = 1;
};

/// Build the plan for `method` over n rows. `removal` is the CV-Mod/CV-hvBl radius
/// (the embedding dimension), `seed` feeds the randomized methods.
[[nodiscard]] ResamplingPlan make_plan(Method method, std::size_t n, std::size_t removal, std::uint64_t seed,
                                       const MethodSettings& settings = {});

[[nodiscard]] nlohmann::json to_json(const ResamplingPlan& plan);
[[nodiscard]] ResamplingPlan plan_from_json(const nlohmann::json& j);

}  // namespace tseval
