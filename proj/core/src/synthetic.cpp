#include "tseval/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tseval {

namespace {

constexpr double kMinRootModulus = 1.1;

// Least-squares fit of y[t] = c + Phi * y[t-12] on the bundled monthly
// accidental deaths series (data/us_accidental_deaths.csv).
constexpr double kDeathsIntercept = 2006.858908570849;
constexpr double kDeathsSeasonal = 0.7522454186479474;
constexpr double kDeathsResidualSd = 486.0959892095684;

std::vector<double> gaussian_noise(std::size_t count, double sd, Rng& rng) {
    std::normal_distribution<double> normal(0.0, sd);
    std::vector<double> e(count);
    for (auto& v : e) v = normal(rng);
    return e;
}

void check_series_spec(const DgpSpec& spec, DgpKind expected, const char* who) {
    spec.validate();
    if (spec.kind != expected) throw std::invalid_argument(std::string(who) + ": spec is for another process");
}

}  // namespace

std::string_view dgp_name(DgpKind kind) noexcept {
    switch (kind) {
        case DgpKind::S1:
            return "S1";
        case DgpKind::S2:
            return "S2";
        case DgpKind::S3:
            return "S3";
    }
    return "?";
}

std::optional<DgpKind> parse_dgp(std::string_view name) {
    if (name.size() != 2 || std::toupper(static_cast<unsigned char>(name[0])) != 'S') return std::nullopt;
    switch (name[1]) {
        case '1':
            return DgpKind::S1;
        case '2':
            return DgpKind::S2;
        case '3':
            return DgpKind::S3;
        default:
            return std::nullopt;
    }
}

SeasonalArModel default_s3_model() {
    SeasonalArModel model;
    model.period = 12;
    model.intercept = kDeathsIntercept / kDeathsResidualSd;
    model.seasonal = {kDeathsSeasonal};
    model.residual_sd = 1.0;
    return model;
}

void DgpSpec::validate() const {
    if (!(root_bound > kMinRootModulus)) throw std::invalid_argument("DgpSpec: root bound must exceed 1.1");
    if (length < 20) throw std::invalid_argument("DgpSpec: length must be at least 20");
    if (!(innovation_sd > 0.0)) throw std::invalid_argument("DgpSpec: innovation sd must be positive");
}

std::vector<double> sample_roots(std::size_t count, double root_bound, Rng& rng) {
    if (count == 0) throw std::invalid_argument("sample_roots: count must be positive");
    if (!(root_bound > kMinRootModulus)) throw std::invalid_argument("sample_roots: root bound must exceed 1.1");
    const double width = root_bound - kMinRootModulus;
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * width);
    std::vector<double> roots(count);
    for (auto& r : roots) {
        const double u = uniform(rng);
        r = u < width ? -(kMinRootModulus + u) : kMinRootModulus + (u - width);
        r = std::clamp(r, -root_bound, root_bound);
    }
    return roots;
}

std::vector<double> roots_to_ar_coefficients(std::span<const double> roots) {
    // poly[k] is the coefficient of z^k in prod (1 - z / root).
    std::vector<double> poly{1.0};
    for (double root : roots) {
        if (!(std::abs(root) > 1.0)) {
            throw std::invalid_argument("roots_to_ar_coefficients: root " + std::to_string(root) +
                                        " lies on or inside the unit circle");
        }
        poly.push_back(0.0);
        for (std::size_t k = poly.size() - 1; k > 0; --k) poly[k] -= poly[k - 1] / root;
    }
    std::vector<double> phi(roots.size());
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = -poly[k + 1];
    return phi;
}

bool is_stationary_ar(std::span<const double> phi) {
    // Trim trailing zeros; the companion matrix has eigenvalues 1 / root.
    std::size_t q = phi.size();
    while (q > 0 && phi[q - 1] == 0.0) --q;
    if (q == 0) return true;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
    for (std::size_t i = 0; i < q; ++i) companion(0, static_cast<Eigen::Index>(i)) = phi[i];
    for (std::size_t i = 1; i < q; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    const Eigen::VectorXcd eig = companion.eigenvalues();
    return (eig.array().abs() < 1.0).all();
}

TimeSeries positivize(const TimeSeries& series) {
    const auto v = series.values();
    const double lowest = *std::min_element(v.begin(), v.end());
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [lowest](double x) { return x - lowest + 1.0; });
    return TimeSeries(std::move(out), series.name(), series.timestamps());
}

Simulation simulate_s1(const DgpSpec& spec, Rng& rng) {
    check_series_spec(spec, DgpKind::S1, "simulate_s1");
    auto roots = sample_roots(3, spec.root_bound, rng);
    auto phi = roots_to_ar_coefficients(roots);
    const auto total = spec.burn_in + spec.length;
    const auto e = gaussian_noise(total, spec.innovation_sd, rng);
    std::vector<double> y(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double v = e[t];
        for (std::size_t i = 0; i < phi.size() && i < t; ++i) v += phi[i] * y[t - i - 1];
        y[t] = v;
    }
    std::vector<double> kept(y.begin() + static_cast<std::ptrdiff_t>(spec.burn_in), y.end());
    return {positivize(TimeSeries(std::move(kept), "S1")), std::move(roots), std::move(phi), 0.0};
}

Simulation simulate_s2(const DgpSpec& spec, Rng& rng) {
    check_series_spec(spec, DgpKind::S2, "simulate_s2");
    auto roots = sample_roots(1, spec.root_bound, rng);
    // 1 + theta z vanishes at z0.
    const double theta = -1.0 / roots[0];
    const auto total = spec.burn_in + spec.length + 1;
    const auto e = gaussian_noise(total, spec.innovation_sd, rng);
    std::vector<double> y;
    y.reserve(spec.length);
    for (std::size_t t = spec.burn_in + 1; t < total; ++t) y.push_back(e[t] + theta * e[t - 1]);
    return {positivize(TimeSeries(std::move(y), "S2")), std::move(roots), {}, theta};
}

Simulation simulate_s3(const DgpSpec& spec, Rng& rng) {
    check_series_spec(spec, DgpKind::S3, "simulate_s3");
    const auto model = spec.s3 ? *spec.s3 : default_s3_model();
    if (model.period == 0) throw std::invalid_argument("simulate_s3: period must be positive");

    // Expand to a plain AR polynomial to check stability and size the history.
    std::size_t order = model.ar.size();
    order = std::max(order, model.seasonal.size() * model.period);
    std::vector<double> phi(order, 0.0);
    for (std::size_t i = 0; i < model.ar.size(); ++i) phi[i] += model.ar[i];
    for (std::size_t s = 0; s < model.seasonal.size(); ++s) phi[(s + 1) * model.period - 1] += model.seasonal[s];
    if (!is_stationary_ar(phi)) throw std::invalid_argument("simulate_s3: coefficient set is not stationary");

    double phi_sum = 0.0;
    for (double c : phi) phi_sum += c;
    const double mean = model.intercept / (1.0 - phi_sum);

    const auto total = order + spec.burn_in + spec.length;
    const auto e = gaussian_noise(total, spec.innovation_sd, rng);
    std::vector<double> y(total, mean);
    for (std::size_t t = order; t < total; ++t) {
        double v = model.intercept + e[t];
        for (std::size_t i = 0; i < order; ++i) v += phi[i] * y[t - i - 1];
        y[t] = v;
    }
    std::vector<double> kept(y.end() - static_cast<std::ptrdiff_t>(spec.length), y.end());
    return {positivize(TimeSeries(std::move(kept), "S3")), {}, std::move(phi), 0.0};
}

Simulation simulate(const DgpSpec& spec, Rng& rng) {
    switch (spec.kind) {
        case DgpKind::S1:
            return simulate_s1(spec, rng);
        case DgpKind::S2:
            return simulate_s2(spec, rng);
        case DgpKind::S3:
            return simulate_s3(spec, rng);
    }
    throw std::invalid_argument("simulate: unknown process");
}

SeasonalArModel fit_seasonal_ar(const TimeSeries& series, std::size_t period, std::size_t seasonal_order) {
    if (period == 0 || seasonal_order == 0) {
        throw std::invalid_argument("fit_seasonal_ar: period and seasonal order must be positive");
    }
    const auto lag = period * seasonal_order;
    if (series.size() <= lag + 1) throw std::invalid_argument("fit_seasonal_ar: series too short");
    const auto y = series.values();
    const auto rows = static_cast<Eigen::Index>(series.size() - lag);
    const auto cols = static_cast<Eigen::Index>(seasonal_order + 1);
    if (rows <= cols) throw std::invalid_argument("fit_seasonal_ar: series too short");

    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r) + lag;
        design(r, 0) = 1.0;
        for (std::size_t s = 1; s <= seasonal_order; ++s) design(r, static_cast<Eigen::Index>(s)) = y[t - s * period];
        target(r) = y[t];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < cols) throw std::invalid_argument("fit_seasonal_ar: singular design");
    const Eigen::VectorXd beta = qr.solve(target);
    const Eigen::VectorXd residual = target - design * beta;

    SeasonalArModel model;
    model.period = period;
    model.intercept = beta(0);
    model.seasonal.assign(beta.data() + 1, beta.data() + beta.size());
    model.residual_sd = std::sqrt(residual.squaredNorm() / static_cast<double>(rows - cols));
    return model;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) noexcept {
    return derive_seed(base_seed, {static_cast<std::uint64_t>(trial)});
}

Simulation simulate_trial(const DgpSpec& spec, std::size_t trial, std::uint64_t base_seed) {
    Rng rng(trial_seed(base_seed, trial));
    auto sim = simulate(spec, rng);
    sim.series = TimeSeries(std::vector<double>(sim.series.values().begin(), sim.series.values().end()),
                            std::string(dgp_name(spec.kind)) + "-" + std::to_string(trial));
    return sim;
}

std::vector<Simulation> monte_carlo(const DgpSpec& spec, std::size_t trials, std::uint64_t base_seed) {
    if (trials == 0) throw std::invalid_argument("monte_carlo: trials must be positive");
    std::vector<Simulation> out;
    out.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) out.push_back(simulate_trial(spec, i, base_seed));
    return out;
}

}  // namespace tseval
