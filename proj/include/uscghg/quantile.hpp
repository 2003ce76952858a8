#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "uscghg/common.hpp"

namespace uscghg {

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double pinball_loss(double residual, double tau) {
    return residual >= 0.0 ? tau * residual : (tau - 1.0) * residual;
}

// ---------------------------------------------------------------------------
// No-intercept quantile regression in one dimension: minimize
// sum_i pinball_tau(y_i - b x_i) over the slope b, for x_i > 0. Rewriting the
// loss as sum_i x_i * pinball_tau(y_i/x_i - b) shows the optimum is a weighted
// tau-quantile of the ratios y_i/x_i with weights x_i; ties break to the
// smaller slope.
inline double fit_quantile_slope(const std::vector<double>& x, const std::vector<double>& y,
                                 double tau) {
    if (x.size() != y.size()) throw FitError("fit_quantile_slope: size mismatch");
    if (!(tau > 0.0 && tau < 1.0)) throw FitError("fit_quantile_slope: tau must be in (0,1)");
    std::vector<std::pair<double, double>> rw;  // (ratio, weight)
    double total_weight = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0) throw FitError("fit_quantile_slope: negative regressor");
        if (x[i] == 0.0) continue;  // constant loss contribution, no slope information
        rw.emplace_back(y[i] / x[i], x[i]);
        total_weight += x[i];
    }
    if (rw.size() < 2) throw FitError("fit_quantile_slope: need at least 2 points with positive x");
    std::sort(rw.begin(), rw.end());
    const double target = tau * total_weight;
    double acc = 0.0;
    for (const auto& [ratio, weight] : rw) {
        acc += weight;
        if (acc >= target) return ratio;
    }
    return rw.back().first;
}

// ---------------------------------------------------------------------------
// Quadratic curve fits used for the damage-surface summaries: y on (1, T, T^2).

struct QuadraticFit {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double operator()(double t) const { return c0 + c1 * t + c2 * t * t; }
};

namespace detail {

inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a,
                                    std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[static_cast<size_t>(r)][static_cast<size_t>(col)]) >
                std::abs(a[static_cast<size_t>(pivot)][static_cast<size_t>(col)]))
                pivot = r;
        std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(pivot)]);
        std::swap(b[static_cast<size_t>(col)], b[static_cast<size_t>(pivot)]);
        const double d = a[static_cast<size_t>(col)][static_cast<size_t>(col)];
        if (std::abs(d) < 1e-300) throw FitError("degenerate design matrix");
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[static_cast<size_t>(r)][static_cast<size_t>(col)] / d;
            for (int c = col; c < 3; ++c)
                a[static_cast<size_t>(r)][static_cast<size_t>(c)] -=
                    f * a[static_cast<size_t>(col)][static_cast<size_t>(c)];
            b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[static_cast<size_t>(r)];
        for (int c = r + 1; c < 3; ++c)
            s -= a[static_cast<size_t>(r)][static_cast<size_t>(c)] * x[static_cast<size_t>(c)];
        x[static_cast<size_t>(r)] = s / a[static_cast<size_t>(r)][static_cast<size_t>(r)];
    }
    return x;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / 2.5066282746310005024;
}

}  // namespace detail

inline QuadraticFit fit_quadratic_ols(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 3) throw FitError("quadratic OLS: need >= 3 points");
    // guard against a design with no temperature variation
    const double t0 = t.front();
    bool varies = false;
    for (double v : t)
        if (v != t0) {
            varies = true;
            break;
        }
    if (!varies) throw FitError("quadratic OLS: all regressor values identical");

    std::array<std::array<double, 3>, 3> xtx{};
    std::array<double, 3> xty{};
    for (size_t i = 0; i < t.size(); ++i) {
        const std::array<double, 3> row{1.0, t[i], t[i] * t[i]};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c)
                xtx[static_cast<size_t>(r)][static_cast<size_t>(c)] +=
                    row[static_cast<size_t>(r)] * row[static_cast<size_t>(c)];
            xty[static_cast<size_t>(r)] += row[static_cast<size_t>(r)] * y[i];
        }
    }
    const auto beta = detail::solve3(xtx, xty);
    return QuadraticFit{beta[0], beta[1], beta[2]};
}

// Quantile regression on (1, T, T^2) by Newton iteration on a Gaussian-smoothed
// check loss with a shrinking bandwidth. Deterministic given the data.
inline QuadraticFit fit_quadratic_quantile(const std::vector<double>& t,
                                           const std::vector<double>& y, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw FitError("quantile fit: tau must be in (0,1)");
    const size_t n = t.size();
    if (n != y.size() || n < 3) throw FitError("quantile fit: need >= 3 points");

    QuadraticFit beta = fit_quadratic_ols(t, y);

    double sd = 0.0;
    {
        double m = 0.0;
        for (size_t i = 0; i < n; ++i) m += y[i] - beta(t[i]);
        m /= static_cast<double>(n);
        for (size_t i = 0; i < n; ++i) {
            const double r = y[i] - beta(t[i]) - m;
            sd += r * r;
        }
        sd = std::sqrt(sd / static_cast<double>(n));
        if (!(sd > 0.0)) sd = 1e-8;
    }

    const double h_floor =
        sd * std::max(0.01, std::pow(std::log(static_cast<double>(n)) / static_cast<double>(n), 0.4));
    double h = sd * 0.5;
    for (int pass = 0; pass < 6; ++pass) {
        for (int iter = 0; iter < 60; ++iter) {
            std::array<double, 3> grad{};
            std::array<std::array<double, 3>, 3> hess{};
            for (size_t i = 0; i < n; ++i) {
                const std::array<double, 3> row{1.0, t[i], t[i] * t[i]};
                const double r = y[i] - beta(t[i]);
                const double w = detail::normal_cdf(r / h) - (1.0 - tau);  // = tau - cdf(-r/h)
                const double d = detail::normal_pdf(r / h) / h;
                for (int a = 0; a < 3; ++a) {
                    grad[static_cast<size_t>(a)] += row[static_cast<size_t>(a)] * w;
                    for (int b = 0; b < 3; ++b)
                        hess[static_cast<size_t>(a)][static_cast<size_t>(b)] +=
                            row[static_cast<size_t>(a)] * row[static_cast<size_t>(b)] * d;
                }
            }
            std::array<double, 3> step{};
            try {
                step = detail::solve3(hess, grad);
            } catch (const FitError&) {
                break;  // flat Hessian at this bandwidth; shrink and retry
            }
            beta.c0 += step[0];
            beta.c1 += step[1];
            beta.c2 += step[2];
            const double norm =
                std::abs(step[0]) + std::abs(step[1]) + std::abs(step[2]);
            if (norm < 1e-12 * (1.0 + std::abs(beta.c0))) break;
        }
        if (h <= h_floor) break;
        h = std::max(h_floor, h * 0.5);
    }
    return beta;
}

}  // namespace uscghg
