#include "tseval/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>

namespace tseval {

namespace {

std::vector<double> regression_residuals(std::span<const double> y, KpssNull null) {
    const auto n = y.size();
    std::vector<double> e(n);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    if (null == KpssNull::Level) {
        std::transform(y.begin(), y.end(), e.begin(), [mean](double v) { return v - mean; });
        return e;
    }
    const double t_mean = (static_cast<double>(n) - 1.0) / 2.0;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - t_mean;
        sxy += dt * (y[t] - mean);
        sxx += dt * dt;
    }
    const double slope = sxy / sxx;
    for (std::size_t t = 0; t < n; ++t) e[t] = y[t] - mean - slope * (static_cast<double>(t) - t_mean);
    return e;
}

// Smallest gap, in octaves, between a periodogram level and the Haar scales tested on it.
constexpr std::size_t kScaleGap = 4;

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

// Circular non-decimated Haar detail coefficients at level j (support 2^j), unit-norm filter.
std::vector<double> nondecimated_haar(std::span<const double> x, std::size_t level) {
    const auto n = x.size();
    const std::size_t half = std::size_t{1} << (level - 1);
    const double norm = 1.0 / std::sqrt(static_cast<double>(2 * half));
    std::vector<double> d(n);
    // Running sums over the two halves of the circular window starting at t.
    double first = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        first += x[i % n];
        second += x[(i + half) % n];
    }
    for (std::size_t t = 0; t < n; ++t) {
        d[t] = (first - second) * norm;
        first += x[(t + half) % n] - x[t];
        second += x[(t + 2 * half) % n] - x[(t + half) % n];
    }
    return d;
}

std::vector<double> circular_running_mean(std::span<const double> x, std::size_t width) {
    const auto n = x.size();
    std::vector<double> out(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < width; ++i) sum += x[(n - i) % n];  // x[0], x[n-1], ..., x[n-width+1]
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = sum / static_cast<double>(width);
        sum += x[(t + 1) % n] - x[(t + 1 + n - width) % n];
    }
    return out;
}

// Circular sample autocovariance of x for lags 0..max_lag.
std::vector<double> sample_autocovariance(std::span<const double> x, std::size_t max_lag) {
    const auto n = x.size();
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    std::vector<double> acov(max_lag + 1, 0.0);
    for (std::size_t h = 0; h <= max_lag; ++h) {
        double s = 0.0;
        for (std::size_t t = 0; t < n; ++t) s += (x[t] - mean) * (x[(t + h) % n] - mean);
        acov[h] = s / static_cast<double>(n);
    }
    return acov;
}

// Autocovariance of the smoothed squared Haar output at level j of a Gaussian
// process with autocovariance acov_x. The filter output d has autocovariance
// c(u) = sum_m r(m) acov_x(u - m) with r the filter autocorrelation; for
// Gaussian d, cov(d_t^2, d_{t+u}^2) = 2 c(u)^2; the running mean of width w
// then convolves this with the triangle (w - |v|) / w^2.
std::vector<double> smoothed_periodogram_autocovariance(const std::vector<double>& acov_x, std::size_t level,
                                                        std::size_t width) {
    const auto support = static_cast<long>(std::size_t{1} << level);
    const auto half = support / 2;
    const auto lx = static_cast<long>(acov_x.size()) - 1;
    auto gx = [&](long u) { return std::abs(u) <= lx ? acov_x[static_cast<std::size_t>(std::abs(u))] : 0.0; };
    auto filter_r = [&](long m) {
        // Autocorrelation of the unit-norm pattern (+1 x half, -1 x half) / sqrt(support).
        m = std::abs(m);
        if (m >= support) return 0.0;
        const double same = static_cast<double>(m <= half ? 2 * (half - m) : 0);
        const double cross = static_cast<double>(m <= half ? m : support - m);
        return (same - cross) / static_cast<double>(support);
    };

    const long c_len = support + lx;  // c(u) vanishes for |u| >= c_len
    std::vector<double> periodogram_acov(static_cast<std::size_t>(c_len), 0.0);
    for (long u = 0; u < c_len; ++u) {
        double c = 0.0;
        for (long m = -(support - 1); m <= support - 1; ++m) c += filter_r(m) * gx(u - m);
        periodogram_acov[static_cast<std::size_t>(u)] = 2.0 * c * c;
    }

    const auto w = static_cast<long>(width);
    const double w2 = static_cast<double>(w) * static_cast<double>(w);
    std::vector<double> out(static_cast<std::size_t>(c_len + w), 0.0);
    for (long h = 0; h < c_len + w; ++h) {
        double s = 0.0;
        for (long u = -(c_len - 1); u <= c_len - 1; ++u) {
            const long v = std::abs(h - u);
            if (v < w) s += periodogram_acov[static_cast<std::size_t>(std::abs(u))] * static_cast<double>(w - v) / w2;
        }
        out[static_cast<std::size_t>(h)] = s;
    }
    return out;
}

// Variance of an orthonormal Haar coefficient with support 2^scale under autocovariance acov.
double haar_coefficient_variance(const std::vector<double>& acov, std::size_t scale) {
    const auto support = std::size_t{1} << scale;
    const auto half = support / 2;
    double v = static_cast<double>(support) * acov[0];
    const auto last = std::min(acov.size() - 1, support - 1);
    for (std::size_t h = 1; h <= last; ++h) {
        // Sum over pairs of the +1/-1 pattern products at lag h.
        const double weight = h <= half ? 2.0 * static_cast<double>(half - h) - static_cast<double>(h)
                                        : -static_cast<double>(support - h);
        v += 2.0 * weight * acov[h];
    }
    return v / static_cast<double>(support);
}

}  // namespace

double kpss_statistic(const TimeSeries& series, KpssNull null) {
    const auto y = series.values();
    const auto n = y.size();
    if (n < 10) throw std::invalid_argument("kpss_statistic: need at least 10 observations");

    const auto e = regression_residuals(y, null);
    double scale = 1.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    const double largest = std::abs(*std::max_element(e.begin(), e.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
    }));
    if (largest <= 1e-12 * scale) return 0.0;

    const auto nd = static_cast<double>(n);
    const auto lags = static_cast<std::size_t>(std::floor(4.0 * std::pow(nd / 100.0, 0.25)));
    double partial = 0.0;
    double eta = 0.0;
    double gamma0 = 0.0;
    for (double v : e) {
        partial += v;
        eta += partial * partial;
        gamma0 += v * v;
    }
    double long_run = gamma0;
    for (std::size_t l = 1; l <= lags && l < n; ++l) {
        double g = 0.0;
        for (std::size_t t = l; t < n; ++t) g += e[t] * e[t - l];
        long_run += 2.0 * (1.0 - static_cast<double>(l) / static_cast<double>(lags + 1)) * g;
    }
    long_run /= nd;
    if (!(long_run > 0.0)) return 0.0;
    return eta / (nd * nd) / long_run;
}

double kpss_critical_value(KpssNull null, double alpha) {
    // Kwiatkowski, Phillips, Schmidt and Shin (1992), Table 1.
    struct Row {
        double alpha, level, trend;
    };
    static constexpr Row kTable[] = {
        {0.10, 0.347, 0.119}, {0.05, 0.463, 0.146}, {0.025, 0.574, 0.176}, {0.01, 0.739, 0.216}};
    for (const auto& row : kTable) {
        if (std::abs(row.alpha - alpha) < 1e-12) return null == KpssNull::Level ? row.level : row.trend;
    }
    throw std::invalid_argument("kpss_critical_value: alpha must be one of 0.10, 0.05, 0.025, 0.01");
}

bool kpss_rejects(const TimeSeries& series, KpssNull null, double alpha) {
    return kpss_statistic(series, null) > kpss_critical_value(null, alpha);
}

std::size_t ndiffs(const TimeSeries& series, std::size_t max_d) {
    if (max_d > 2) throw std::invalid_argument("ndiffs: max_d must be 0, 1 or 2");
    if (series.size() < max_d + 10) throw std::invalid_argument("ndiffs: series too short");
    for (std::size_t d = 0; d < max_d; ++d) {
        if (!kpss_rejects(difference(series, d), KpssNull::Trend)) return d;
    }
    return max_d;
}

WaveletTestResult wavelet_stationarity_test(const TimeSeries& series, const WaveletTestOptions& options) {
    if (series.size() < 64) throw std::invalid_argument("wavelet_stationarity_test: need at least 64 observations");
    if (!(options.alpha > 0.0 && options.alpha < 0.5)) {
        throw std::invalid_argument("wavelet_stationarity_test: alpha must lie in (0, 0.5)");
    }

    std::size_t levels = 0;
    while ((std::size_t{2} << levels) <= series.size()) ++levels;  // J with 2^J <= n
    const std::size_t n = std::size_t{1} << levels;
    const auto all = series.values();
    const std::span<const double> x = all.subspan(all.size() - n);

    const std::size_t smoothing = std::size_t{1} << ((levels + 1) / 2);
    std::size_t min_scale = 0;
    while ((std::size_t{1} << min_scale) < smoothing) ++min_scale;
    const std::size_t max_level = levels > kScaleGap ? levels - kScaleGap : 1;
    const auto acov_x = sample_autocovariance(x, smoothing / 2);

    std::vector<WaveletRejection> tested;

    for (std::size_t level = 1; level <= max_level; ++level) {
        auto periodogram = nondecimated_haar(x, level);
        for (auto& v : periodogram) v *= v;
        const auto smooth = circular_running_mean(periodogram, smoothing);
        const auto acov = smoothed_periodogram_autocovariance(acov_x, level, smoothing);

        for (std::size_t scale = std::max(min_scale, level + kScaleGap); scale <= levels; ++scale) {
            const auto support = std::size_t{1} << scale;
            const double variance = haar_coefficient_variance(acov, scale);
            const double norm = 1.0 / std::sqrt(static_cast<double>(support));
            for (std::size_t pos = 0; pos < n / support; ++pos) {
                double first = 0.0;
                double second = 0.0;
                for (std::size_t i = 0; i < support / 2; ++i) {
                    first += smooth[pos * support + i];
                    second += smooth[pos * support + support / 2 + i];
                }
                const double coefficient = (first - second) * norm;
                WaveletRejection r{level, scale, pos, 0.0, 1.0};
                if (variance > 0.0) {
                    r.statistic = coefficient / std::sqrt(variance);
                    r.p_value = normal_two_sided_p(r.statistic);
                }
                tested.push_back(r);
            }
        }
    }

    WaveletTestResult result;
    result.analysed_length = n;
    result.tests = tested.size();
    const auto m = static_cast<double>(tested.size());

    if (options.correction == MultipleTesting::Bonferroni) {
        const boost::math::normal standard;
        const double critical = boost::math::quantile(boost::math::complement(standard, options.alpha / (2.0 * m)));
        for (const auto& r : tested) {
            if (std::abs(r.statistic) > critical) result.rejections.push_back(r);
        }
    } else {
        // Benjamini-Hochberg step-up.
        std::vector<std::size_t> order(tested.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return tested[a].p_value < tested[b].p_value; });
        std::size_t cutoff = 0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (tested[order[k]].p_value <= options.alpha * static_cast<double>(k + 1) / m) cutoff = k + 1;
        }
        std::vector<bool> keep(tested.size(), false);
        for (std::size_t k = 0; k < cutoff; ++k) keep[order[k]] = true;
        for (std::size_t i = 0; i < tested.size(); ++i) {
            if (keep[i]) result.rejections.push_back(tested[i]);
        }
    }
    result.stationary = result.rejections.empty();
    return result;
}

}  // namespace tseval
