#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "options.hpp"
#include "tseval/embedding.hpp"
#include "tseval/evaluation.hpp"
#include "tseval/experiment.hpp"
#include "tseval/series.hpp"
#include "tseval/splitters.hpp"
#include "tseval/stationarity.hpp"
#include "tseval/synthetic.hpp"

namespace fs = std::filesystem;
using namespace tseval;
using cli::Status;

namespace {

/// Output file or standard output when the path is empty or "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw DataError("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct LogSink {
    std::string path;
    std::unique_ptr<std::ofstream> file;
    bool quiet = false;

    std::ostream* open() {
        if (quiet) return nullptr;
        if (path.empty()) return &std::cerr;
        file = std::make_unique<std::ofstream>(path, std::ios::app);
        if (!*file) throw DataError("cannot open log file " + path);
        return file.get();
    }
};

void log_failures(std::ostream* log, const std::vector<Failure>& failures) {
    if (log == nullptr) return;
    for (const auto& f : failures) {
        *log << nlohmann::json{{"event", "summary-failure"}, {"problem", f.problem_id}, {"method", f.method},
                               {"reason", f.reason}}
                    .dump()
             << '\n';
    }
}

Status status_of(const ExperimentOutput& out) {
    if (out.failures.empty()) return Status::Ok;
    return out.results.empty() ? Status::Fatal : Status::Partial;
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
    std::string dgp = "s1";
    std::size_t trials = 1;
    std::size_t length = 200;
    std::size_t burn_in = 200;
    double root_bound = 5.0;
    double innovation_sd = 1.0;
    std::uint64_t seed = 1;
    std::string output;
    std::string output_dir;
};

Status run_simulate(const SimulateFlags& f) {
    DgpSpec spec;
    const auto kind = parse_dgp(f.dgp);
    if (!kind) throw std::invalid_argument("unknown DGP '" + f.dgp + "'");
    spec.kind = *kind;
    spec.length = f.length;
    spec.burn_in = f.burn_in;
    spec.root_bound = f.root_bound;
    spec.innovation_sd = f.innovation_sd;
    if (f.trials == 0) throw std::invalid_argument("--trials must be at least 1");
    const auto sims = monte_carlo(spec, f.trials, f.seed);

    if (!f.output_dir.empty()) {
        fs::create_directories(f.output_dir);
        for (const auto& sim : sims) {
            write_csv(sim.series, fs::path(f.output_dir) / (sim.series.name() + ".csv"));
        }
        return Status::Ok;
    }
    Output out(f.output);
    auto& os = out.stream();
    os << "trial,t,value\n";
    for (std::size_t i = 0; i < sims.size(); ++i) {
        const auto values = sims[i].series.values();
        for (std::size_t t = 0; t < values.size(); ++t) os << i << ',' << t << ',' << format_double(values[t]) << '\n';
    }
    return Status::Ok;
}

// ---------------------------------------------------------------- evaluate / benchmark

struct EvaluateFlags {
    std::vector<std::string> inputs;
    std::string column = "0";
    std::string output;
    std::string ranks;
    cli::ExperimentFlags experiment;
};

Status run_evaluate(const EvaluateFlags& f, LogSink& sink) {
    const auto config = cli::make_config(f.experiment);
    auto* log = sink.open();
    std::vector<Problem> problems;
    std::vector<Failure> load_failures;
    const auto column = cli::parse_column(f.column);
    for (const auto& path : f.inputs) {
        try {
            auto series = load_csv(path, column);
            problems.push_back({path, std::move(series)});
        } catch (const std::exception& e) {
            load_failures.push_back({path, "", e.what()});
        }
    }
    auto out = run_experiment(config, problems, log);
    out.failures.insert(out.failures.begin(), load_failures.begin(), load_failures.end());
    log_failures(log, out.failures);

    Output results(f.output);
    write_results_csv(results.stream(), out.results);
    if (!f.ranks.empty() && !out.results.empty()) {
        Output ranks(f.ranks);
        write_rank_table(ranks.stream(), out.ranks);
    }
    return status_of(out);
}

struct BenchmarkFlags {
    std::string dgp = "s1";
    std::size_t trials = 200;
    std::size_t length = 200;
    std::string output;
    std::string ranks;
    std::string comparisons;
    cli::ExperimentFlags experiment;
    cli::ComparisonFlags comparison;
};

Status run_benchmark(BenchmarkFlags f, LogSink& sink) {
    DgpSpec spec;
    const auto kind = parse_dgp(f.dgp);
    if (!kind) throw std::invalid_argument("unknown DGP '" + f.dgp + "'");
    spec.kind = *kind;
    spec.length = f.length;
    if (f.trials == 0) throw std::invalid_argument("--trials must be at least 1");
    if (f.experiment.embedding == "auto") f.experiment.embedding = "5";
    const auto config = cli::make_config(f.experiment);
    const auto comparison = cli::make_comparison(f.comparison);
    auto* log = sink.open();

    const auto study = reproduce_synthetic(spec, f.trials, config, comparison, log);
    log_failures(log, study.output.failures);

    Output results(f.output);
    write_results_csv(results.stream(), study.output.results);
    if (!study.output.results.empty()) {
        if (!f.ranks.empty() || f.output.empty() || f.output == "-") {
            Output ranks(f.ranks);
            if (f.ranks.empty()) std::cout << '\n';
            write_rank_table(ranks.stream(), study.output.ranks);
        }
        if (!f.comparisons.empty()) {
            Output cmp(f.comparisons);
            write_comparisons(cmp.stream(), study.comparisons, comparison.baseline);
        }
    }
    return status_of(study.output);
}

// ---------------------------------------------------------------- rank / compare

struct RankFlags {
    std::string input;
    std::string methods = "all";
    std::string output;
};

std::vector<std::string> methods_in(const std::vector<EstimationResult>& results, const std::string& selection) {
    std::vector<std::string> names;
    if (selection != "all") {
        for (auto m : cli::parse_method_list(selection)) names.emplace_back(method_name(m));
        return names;
    }
    for (auto m : kAllMethods) {
        const auto name = std::string(method_name(m));
        for (const auto& r : results) {
            if (r.method == name) {
                names.push_back(name);
                break;
            }
        }
    }
    return names;
}

Status run_rank(const RankFlags& f) {
    const auto results = read_results_csv(f.input);
    const auto table = rank_results(results, methods_in(results, f.methods));
    Output out(f.output);
    write_rank_table(out.stream(), table);
    return Status::Ok;
}

struct CompareFlags {
    std::string input;
    std::string output;
    cli::ComparisonFlags comparison;
};

Status run_compare(const CompareFlags& f) {
    const auto options = cli::make_comparison(f.comparison);
    const auto results = read_results_csv(f.input);
    const auto comparisons = compare_to_baseline(results, methods_in(results, "all"), options);
    if (comparisons.empty()) throw DataError("no problem has results for both the baseline and another method");
    Output out(f.output);
    write_comparisons(out.stream(), comparisons, options.baseline);
    return Status::Ok;
}

// ---------------------------------------------------------------- stationarity

struct StationarityFlags {
    std::vector<std::string> inputs;
    std::string column = "0";
    double alpha = 0.05;
    std::string correction = "bonferroni";
    std::size_t max_d = 2;
    std::string output;
};

Status run_stationarity(const StationarityFlags& f, LogSink& sink) {
    WaveletTestOptions options;
    options.alpha = f.alpha;
    options.correction = f.correction == "fdr" ? MultipleTesting::FalseDiscoveryRate : MultipleTesting::Bonferroni;
    const auto column = cli::parse_column(f.column);
    auto* log = sink.open();

    Output out(f.output);
    auto& os = out.stream();
    os << "series,I,S,rejections\n";
    std::size_t failed = 0;
    for (const auto& path : f.inputs) {
        try {
            const auto series = load_csv(path, column);
            const auto d = ndiffs(series, f.max_d);
            const auto wavelet = wavelet_stationarity_test(series, options);
            std::ostringstream triples;
            for (std::size_t i = 0; i < wavelet.rejections.size(); ++i) {
                const auto& r = wavelet.rejections[i];
                triples << (i ? ";" : "") << r.periodogram_level << ':' << r.coefficient_scale << ':' << r.position;
            }
            os << series.name() << ',' << d << ',' << (wavelet.stationary ? 1 : 0) << ',' << triples.str() << '\n';
        } catch (const std::exception& e) {
            ++failed;
            if (log) *log << nlohmann::json{{"event", "failure"}, {"problem", path}, {"reason", e.what()}}.dump() << '\n';
        }
    }
    if (failed == 0) return Status::Ok;
    return failed == f.inputs.size() ? Status::Fatal : Status::Partial;
}

// ---------------------------------------------------------------- embed

struct EmbedFlags {
    std::string input;
    std::string column = "0";
    std::string p = "auto";
    std::size_t fnn_max_dim = 30;
    double fnn_tolerance = 0.01;
    std::string output;
    std::string plan;
    std::string plan_output;
    std::size_t folds = 10;
    std::uint64_t seed = 1;
};

Status run_embed(const EmbedFlags& f, LogSink& sink) {
    const auto series = load_csv(f.input, cli::parse_column(f.column));
    std::size_t p = 0;
    if (f.p == "auto") {
        FnnOptions options;
        options.max_dimension = f.fnn_max_dim;
        options.tolerance = f.fnn_tolerance;
        const auto fnn = estimate_embedding_dimension(series, options);
        p = fnn.dimension;
        if (auto* log = sink.open()) {
            *log << nlohmann::json{{"event", "embedding"},
                                   {"series", series.name()},
                                   {"p", p},
                                   {"false_fraction", fnn.false_fraction},
                                   {"tolerance_reached", fnn.tolerance_reached}}
                        .dump()
                 << '\n';
        }
    } else {
        cli::ExperimentFlags probe;
        probe.embedding = f.p;
        p = *cli::make_config(probe).embedding_dimension;
    }
    const auto data = embed(series, p);

    if (!f.plan.empty()) {
        const auto method = parse_method(f.plan);
        if (!method) throw std::invalid_argument("unknown method '" + f.plan + "'");
        MethodSettings settings;
        settings.folds = f.folds;
        const auto plan = make_plan(*method, data.rows(), p, f.seed, settings);
        Output out(f.plan_output);
        out.stream() << to_json(plan).dump(2) << '\n';
        if (f.plan_output.empty() || f.plan_output == "-") return Status::Ok;
    }

    Output out(f.output);
    auto& os = out.stream();
    for (std::size_t j = 0; j < p; ++j) os << "lag" << (p - j) << ',';
    os << "target,target_time\n";
    for (Eigen::Index r = 0; r < data.predictors.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.predictors.cols(); ++c) os << format_double(data.predictors(r, c)) << ',';
        os << format_double(data.targets(r)) << ',' << data.target_time[static_cast<std::size_t>(r)] << '\n';
    }
    return Status::Ok;
}

/// INI reader that attaches section-less keys to the selected subcommand and
/// keeps comma-separated values (method lists) as one string.
class FlatConfig : public CLI::ConfigINI {
public:
    explicit FlatConfig(std::string subcommand) : subcommand_(std::move(subcommand)) {}

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigINI::from_config(input);
        for (auto& item : items) {
            if (item.parents.empty() && !subcommand_.empty()) item.parents = {subcommand_};
            if (item.inputs.size() > 1) {
                std::string joined;
                for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
                item.inputs = {joined};
            }
        }
        return items;
    }

private:
    std::string subcommand_;
};

std::string find_subcommand(const CLI::App& app, int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        for (const auto* sub : app.get_subcommands({})) {
            if (sub->get_name() == argv[i]) return argv[i];
        }
    }
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Out-of-sample loss estimation for time-series forecasting"};
    app.require_subcommand(1);
    LogSink sink;
    app.add_option("--log", sink.path, "Append JSON-lines progress and failures to this file (default: stderr)");
    app.add_flag("--quiet", sink.quiet, "Suppress the progress log");
    app.set_config("--config", "", "Flat key=value file; keys are the long option names of the subcommand");
    app.allow_config_extras(CLI::config_extras_mode::ignore);

    SimulateFlags simulate;
    auto* sim = app.add_subcommand("simulate", "Generate synthetic series (S1, S2, S3)");
    sim->fallthrough();
    sim->add_option("--dgp", simulate.dgp, "Process: s1, s2 or s3")->capture_default_str();
    sim->add_option("--trials", simulate.trials, "Number of series")->capture_default_str();
    sim->add_option("--length", simulate.length, "Observations per series")->capture_default_str();
    sim->add_option("--burn-in", simulate.burn_in, "Discarded warm-up samples")->capture_default_str();
    sim->add_option("--root-bound", simulate.root_bound, "Largest root magnitude for S1 / S2")->capture_default_str();
    sim->add_option("--innovation-sd", simulate.innovation_sd, "Innovation standard deviation")
        ->capture_default_str();
    sim->add_option("--seed", simulate.seed, "Base seed")->capture_default_str();
    sim->add_option("-o,--output", simulate.output, "Long-format CSV (trial,t,value); stdout by default");
    sim->add_option("--output-dir", simulate.output_dir, "Write one CSV per trial into this directory instead");

    EvaluateFlags evaluate;
    auto* eval = app.add_subcommand("evaluate", "Estimate losses on series CSV files and score them");
    eval->fallthrough();
    eval->add_option("inputs", evaluate.inputs, "Series CSV files")->required();
    eval->add_option("--column", evaluate.column, "Column name or 0-based index")->capture_default_str();
    eval->add_option("-o,--output", evaluate.output, "Results CSV; stdout by default");
    eval->add_option("--ranks", evaluate.ranks, "Also write the rank table here");
    cli::add_experiment_options(*eval, evaluate.experiment);

    BenchmarkFlags benchmark;
    auto* bench = app.add_subcommand("benchmark", "Synthetic Monte Carlo study: results, ranks and comparisons");
    bench->fallthrough();
    bench->add_option("--dgp", benchmark.dgp, "Process: s1, s2 or s3")->capture_default_str();
    bench->add_option("--trials", benchmark.trials, "Monte Carlo trials")->capture_default_str();
    bench->add_option("--length", benchmark.length, "Observations per series")->capture_default_str();
    bench->add_option("-o,--output", benchmark.output, "Results CSV; stdout by default");
    bench->add_option("--ranks", benchmark.ranks, "Rank table CSV");
    bench->add_option("--comparisons", benchmark.comparisons, "Bayes sign test CSV against the baseline");
    cli::add_experiment_options(*bench, benchmark.experiment);
    cli::add_comparison_options(*bench, benchmark.comparison);

    RankFlags rank;
    auto* rk = app.add_subcommand("rank", "Average APAE ranks from a results CSV");
    rk->fallthrough();
    rk->add_option("input", rank.input, "Results CSV")->required();
    rk->add_option("--methods", rank.methods, "Comma-separated methods, or 'all' present")->capture_default_str();
    rk->add_option("-o,--output", rank.output, "Rank table CSV; stdout by default");

    CompareFlags compare;
    auto* cmp = app.add_subcommand("compare", "Bayes sign test of every method against a baseline");
    cmp->fallthrough();
    cmp->add_option("input", compare.input, "Results CSV")->required();
    cmp->add_option("-o,--output", compare.output, "Comparison CSV; stdout by default");
    cli::add_comparison_options(*cmp, compare.comparison);

    StationarityFlags stationarity;
    auto* st = app.add_subcommand("stationarity", "KPSS differencing order and wavelet stationarity verdict");
    st->fallthrough();
    st->add_option("inputs", stationarity.inputs, "Series CSV files")->required();
    st->add_option("--column", stationarity.column, "Column name or 0-based index")->capture_default_str();
    st->add_option("--alpha", stationarity.alpha, "Family-wise level of the wavelet test")->capture_default_str();
    st->add_option("--correction", stationarity.correction, "Multiple testing: bonferroni or fdr")
        ->check(CLI::IsMember({"bonferroni", "fdr"}))
        ->capture_default_str();
    st->add_option("--max-d", stationarity.max_d, "Largest differencing order")->capture_default_str();
    st->add_option("-o,--output", stationarity.output, "Table CSV; stdout by default");

    EmbedFlags embedding;
    auto* emb = app.add_subcommand("embed", "Time-delay embedding and resampling plans");
    emb->fallthrough();
    emb->add_option("input", embedding.input, "Series CSV file")->required();
    emb->add_option("--column", embedding.column, "Column name or 0-based index")->capture_default_str();
    emb->add_option("--p", embedding.p, "Embedding dimension, or 'auto'")->capture_default_str();
    emb->add_option("--fnn-max-dim", embedding.fnn_max_dim, "Largest dimension tried")->capture_default_str();
    emb->add_option("--fnn-tolerance", embedding.fnn_tolerance, "Accepted false-neighbour fraction")
        ->capture_default_str();
    emb->add_option("-o,--output", embedding.output, "Embedded matrix CSV; stdout by default");
    emb->add_option("--plan", embedding.plan, "Also build this method's plan over the embedded rows");
    emb->add_option("--plan-output", embedding.plan_output, "Plan JSON; stdout by default");
    emb->add_option("--folds", embedding.folds, "Folds / blocks K for --plan")->capture_default_str();
    emb->add_option("--seed", embedding.seed, "Seed for randomized plans")->capture_default_str();

    app.config_formatter(std::make_shared<FlatConfig>(find_subcommand(app, argc, argv)));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(Status::Fatal);
    }

    try {
        Status status = Status::Ok;
        if (*sim) status = run_simulate(simulate);
        else if (*eval) status = run_evaluate(evaluate, sink);
        else if (*bench) status = run_benchmark(benchmark, sink);
        else if (*rk) status = run_rank(rank);
        else if (*cmp) status = run_compare(compare);
        else if (*st) status = run_stationarity(stationarity, sink);
        else if (*emb) status = run_embed(embedding, sink);
        return static_cast<int>(status);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(Status::Fatal);
    }
}
