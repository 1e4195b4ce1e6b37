#pragma once

#include <cstddef>
#include <vector>

#include "tseval/series.hpp"

namespace tseval {

enum class KpssNull { Level, Trend };

/**
 * KPSS statistic: partial sums of residuals from a regression on an
 * intercept (Level) or intercept plus linear trend (Trend), normalized by a
 * Bartlett long-run variance with bandwidth floor(4 (n/100)^(1/4)).
 * Residuals that vanish to round-off give a statistic of 0.
 *
 * @throws std::invalid_argument if the series has fewer than 10 values.
 */
[[nodiscard]] double kpss_statistic(const TimeSeries& series, KpssNull null);

/// Tabulated asymptotic critical values for alpha in {0.10, 0.05, 0.025, 0.01}.
/// @throws std::invalid_argument for any other alpha.
[[nodiscard]] double kpss_critical_value(KpssNull null, double alpha = 0.05);

/// True if the KPSS test rejects stationarity at level alpha.
[[nodiscard]] bool kpss_rejects(const TimeSeries& series, KpssNull null, double alpha = 0.05);

/// Smallest d <= max_d for which the trend KPSS test at 5% no longer rejects
/// on the d-times differenced series; max_d when every d < max_d rejects.
/// @throws std::invalid_argument if max_d > 2 or a differenced series is too short.
[[nodiscard]] std::size_t ndiffs(const TimeSeries& series, std::size_t max_d = 2);

enum class MultipleTesting { Bonferroni, FalseDiscoveryRate };

struct WaveletTestOptions {
    double alpha = 0.05;
    MultipleTesting correction = MultipleTesting::Bonferroni;
};

/// A Haar coefficient of a smoothed periodogram level judged too large.
struct WaveletRejection {
    std::size_t periodogram_level = 0;  // 1 = finest
    std::size_t coefficient_scale = 0;  // Haar support is 2^scale samples
    std::size_t position = 0;           // coefficient index within the scale
    double statistic = 0.0;             // studentized coefficient
    double p_value = 1.0;
};

struct WaveletTestResult {
    bool stationary = true;
    std::vector<WaveletRejection> rejections;
    std::size_t analysed_length = 0;
    std::size_t tests = 0;
};

/**
 * @brief Haar-wavelet test of second-order stationarity.
 *
 * The most recent 2^J values are analysed. For each fine level of the
 * non-decimated Haar raw periodogram, the level is smoothed by a circular
 * running mean of width 2^ceil(J/2), and the Haar coefficients of the
 * smoothed level are studentized and tested against a two-sided normal
 * reference under a Bonferroni (or Benjamini-Hochberg) correction across
 * all tested (level, scale, position) triples.
 *
 * Differences from the full evolutionary-spectrum construction: there is no
 * periodogram bias correction. Periodogram levels 1..max(1, J-4) are used,
 * and on level j only Haar scales k with 2^k >= 2^ceil(J/2) and k >= j + 4
 * are tested; coarser pairings average too few effectively independent
 * periodogram values for the normal reference to hold in the tails. The
 * variance of each coefficient is exact for a Gaussian process whose
 * autocovariance equals the circular sample autocovariance of the analysed
 * values up to lag 2^ceil(J/2) / 2 (zero beyond): it is propagated through
 * the Haar filter, the squaring and the running mean.
 *
 * @throws std::invalid_argument if the series has fewer than 64 values or
 *         alpha is outside (0, 0.5).
 */
[[nodiscard]] WaveletTestResult wavelet_stationarity_test(const TimeSeries& series,
                                                          const WaveletTestOptions& options = {});

}  // namespace tseval
