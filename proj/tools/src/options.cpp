#include "options.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace tseval::cli {

void add_experiment_options(CLI::App& app, ExperimentFlags& flags) {
    app.add_option("--learner", flags.learner, "Learner: lasso or knn")
        ->check(CLI::IsMember({"lasso", "knn"}, CLI::ignore_case))
        ->capture_default_str();
    app.add_option("--lambda", flags.lambda, "Fixed lasso penalty (default: lambda-ratio * lambda_max)");
    app.add_option("--lambda-ratio", flags.lambda_ratio, "Lasso penalty as a fraction of lambda_max")
        ->capture_default_str();
    app.add_option("--k", flags.k, "Neighbours for knn")->capture_default_str();
    app.add_option("--max-iter", flags.max_iter, "Lasso coordinate-descent sweep limit")->capture_default_str();
    app.add_option("--tol", flags.tol, "Lasso convergence tolerance")->capture_default_str();
    app.add_option("--methods", flags.methods, "Comma-separated estimation methods, or 'all'")
        ->capture_default_str();
    app.add_option("--folds", flags.folds, "Folds / blocks K")->capture_default_str();
    app.add_option("--repetitions", flags.repetitions, "Rep-Holdout repetitions")->capture_default_str();
    app.add_option("--holdout-fraction", flags.holdout_fraction, "Holdout training fraction")
        ->capture_default_str();
    app.add_option("--rep-train-fraction", flags.rep_train_fraction, "Rep-Holdout training window fraction")
        ->capture_default_str();
    app.add_option("--rep-test-fraction", flags.rep_test_fraction, "Rep-Holdout test window fraction")
        ->capture_default_str();
    app.add_option("--sliding-blocks", flags.sliding_blocks, "Preq-Sld-Bls training window in blocks")
        ->capture_default_str();
    app.add_option("--preq-window", flags.preq_window,
                   "Preq-Grow initial window / Preq-Slide window in rows (0: rows / folds)")
        ->capture_default_str();
    app.add_option("--refit-interval", flags.refit_interval, "Preq-Grow / Preq-Slide refit interval")
        ->capture_default_str();
    app.add_option("--estimation-fraction", flags.estimation_fraction, "Share of each series used for estimation")
        ->capture_default_str();
    app.add_option("--embedding", flags.embedding, "Embedding dimension, or 'auto' for false nearest neighbours")
        ->capture_default_str();
    app.add_option("--fnn-max-dim", flags.fnn_max_dim, "Largest dimension tried by false nearest neighbours")
        ->capture_default_str();
    app.add_option("--fnn-tolerance", flags.fnn_tolerance, "Accepted false-neighbour fraction")
        ->capture_default_str();
    app.add_option("--seed", flags.seed, "Base seed")->capture_default_str();
    app.add_option("--threads", flags.threads, "Worker threads over problems")->capture_default_str();
}

void add_comparison_options(CLI::App& app, ComparisonFlags& flags) {
    app.add_option("--baseline", flags.baseline, "Baseline method")->capture_default_str();
    app.add_option("--rope", flags.rope, "Half-width of the region of practical equivalence, in percent")
        ->capture_default_str();
    app.add_option("--samples", flags.samples, "Dirichlet draws")->capture_default_str();
    app.add_option("--prior", flags.prior, "Prior pseudo-count on the equivalence region")->capture_default_str();
    app.add_option("--comparison-seed", flags.seed, "Seed of the Dirichlet draws")->capture_default_str();
}

std::vector<Method> parse_method_list(const std::string& text) {
    std::string lowered = text;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "all") return {kAllMethods.begin(), kAllMethods.end()};

    std::vector<Method> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto token = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!token.empty()) {
            const auto m = parse_method(token);
            if (!m) throw std::invalid_argument("unknown method '" + token + "'");
            if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("no methods selected");
    return out;
}

ExperimentConfig make_config(const ExperimentFlags& flags) {
    ExperimentConfig config;
    config.learner.kind = (flags.learner == "knn" || flags.learner == "KNN") ? LearnerKind::Knn : LearnerKind::Lasso;
    config.learner.lambda = flags.lambda;
    config.learner.lambda_ratio = flags.lambda_ratio;
    config.learner.k = flags.k;
    config.learner.max_iter = flags.max_iter;
    config.learner.tol = flags.tol;
    config.methods = parse_method_list(flags.methods);
    config.settings.folds = flags.folds;
    config.settings.repetitions = flags.repetitions;
    config.settings.holdout_train_fraction = flags.holdout_fraction;
    config.settings.rep_holdout_train_fraction = flags.rep_train_fraction;
    config.settings.rep_holdout_test_fraction = flags.rep_test_fraction;
    config.settings.sliding_blocks = flags.sliding_blocks;
    config.settings.prequential_window = flags.preq_window;
    config.settings.refit_interval = flags.refit_interval;
    config.estimation_fraction = flags.estimation_fraction;
    if (flags.embedding != "auto") {
        std::size_t used = 0;
        unsigned long p = 0;
        try {
            p = std::stoul(flags.embedding, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != flags.embedding.size() || p == 0) {
            throw std::invalid_argument("--embedding must be 'auto' or a positive integer");
        }
        config.embedding_dimension = p;
    }
    config.fnn.max_dimension = flags.fnn_max_dim;
    config.fnn.tolerance = flags.fnn_tolerance;
    config.base_seed = flags.seed;
    config.threads = flags.threads;
    config.validate();
    return config;
}

ComparisonOptions make_comparison(const ComparisonFlags& flags) {
    const auto baseline = parse_method(flags.baseline);
    if (!baseline) throw std::invalid_argument("unknown baseline method '" + flags.baseline + "'");
    if (!(flags.rope > 0.0)) throw std::invalid_argument("--rope must be positive");
    ComparisonOptions out;
    out.baseline = std::string(method_name(*baseline));
    out.rope = flags.rope;
    out.samples = flags.samples;
    out.prior_strength = flags.prior;
    out.seed = flags.seed;
    return out;
}

CsvColumn parse_column(const std::string& text) {
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
        return static_cast<std::size_t>(std::stoull(text));
    }
    return text;
}

}  // namespace tseval::cli
