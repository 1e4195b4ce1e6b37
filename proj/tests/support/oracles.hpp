#pragma once

// Independent reference implementations used to check the library. They are
// written for clarity, not speed, and share no code with tseval.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Ordinary least squares with intercept through the normal equations.
/// Returns (intercept, slopes...).
inline Eigen::VectorXd least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    Eigen::MatrixXd design(x.rows(), x.cols() + 1);
    design.col(0).setOnes();
    design.rightCols(x.cols()) = x;
    const Eigen::MatrixXd gram = design.transpose() * design;
    const Eigen::VectorXd rhs = design.transpose() * y;
    return gram.ldlt().solve(rhs);
}

/// All complex roots of c[0] + c[1] z + ... + c[d] z^d by Durand-Kerner iteration.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<double> c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    const auto degree = c.size() - 1;
    const double lead = c.back();
    for (auto& v : c) v /= lead;
    std::vector<std::complex<double>> z(degree);
    const std::complex<double> seed(0.4, 0.9);
    for (std::size_t i = 0; i < degree; ++i) z[i] = std::pow(seed, static_cast<double>(i)) * 2.0;
    auto eval = [&](std::complex<double> x) {
        std::complex<double> acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
        return acc;
    };
    for (int iter = 0; iter < 2000; ++iter) {
        double change = 0.0;
        for (std::size_t i = 0; i < degree; ++i) {
            std::complex<double> denom = 1.0;
            for (std::size_t j = 0; j < degree; ++j) {
                if (j != i) denom *= z[i] - z[j];
            }
            const auto step = eval(z[i]) / denom;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-14) break;
    }
    return z;
}

/// Moduli of the roots of 1 - phi_1 z - ... - phi_q z^q.
inline std::vector<double> ar_root_moduli(const std::vector<double>& phi) {
    std::vector<double> c{1.0};
    for (double v : phi) c.push_back(-v);
    std::vector<double> out;
    for (const auto& r : polynomial_roots(c)) out.push_back(std::abs(r));
    return out;
}

/**
 * Brute-force false nearest neighbour fraction with Kennel's two criteria,
 * written directly from the definition: for every delay vector of length d
 * that has a (d+1)-th coordinate, scan every other such vector for the
 * nearest one (lowest index on ties) and test it.
 */
inline double false_neighbour_fraction(const std::vector<double>& y, std::size_t d, double r_tol = 10.0,
                                       double a_tol = 2.0) {
    const std::size_t m = y.size() - d;
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(y.size()));
    // Distances at or below this round-off floor count as exact zeros.
    const double floor = 1e-9 * sd;

    std::size_t false_count = 0;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t best = m;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += (y[i + k] - y[j + k]) * (y[i + k] - y[j + k]);
            if (std::sqrt(s) <= floor) s = 0.0;
            if (s < best_d2) {
                best_d2 = s;
                best = j;
            }
        }
        const double dist = std::sqrt(best_d2);
        double extra = std::abs(y[i + d] - y[best + d]);
        if (extra <= floor) extra = 0.0;
        bool is_false = false;
        if (dist <= floor) {
            is_false = extra > 0.0;
        } else {
            is_false = extra / dist > r_tol || std::sqrt(best_d2 + extra * extra) / sd > a_tol;
        }
        false_count += is_false ? 1 : 0;
    }
    return static_cast<double>(false_count) / static_cast<double>(m);
}

/// Monte Carlo probabilities that each Dirichlet(alpha) component is the largest.
inline std::vector<double> dirichlet_argmax(const std::vector<double>& alpha, std::size_t draws, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<double> wins(alpha.size(), 0.0);
    std::vector<double> g(alpha.size());
    for (std::size_t s = 0; s < draws; ++s) {
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            g[i] = alpha[i] > 0.0 ? std::gamma_distribution<double>(alpha[i], 1.0)(rng) : 0.0;
        }
        const double top = *std::max_element(g.begin(), g.end());
        const auto ties = static_cast<double>(std::count(g.begin(), g.end(), top));
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (g[i] == top) wins[i] += 1.0 / ties;
        }
    }
    for (auto& w : wins) w /= static_cast<double>(draws);
    return wins;
}

}  // namespace oracle
