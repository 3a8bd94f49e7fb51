#pragma once

// Reference computations written independently of the library: naive
// recursion in long double, a Lanczos gamma, and closed-form solutions.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

/// Lanczos approximation, g = 7, nine coefficients.
inline double gamma(double x) {
    static const double c[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) return M_PI / (std::sin(M_PI * x) * gamma(1.0 - x));
    x -= 1.0;
    double a = c[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
    return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

inline double hausdorff(double mu) { return std::log(2.0) / std::log(2.0 / (1.0 - mu)); }

/// Depth-m intervals by repeated splitting.
inline std::vector<std::pair<long double, long double>> cantor(double mu, int depth, double a = 0.0,
                                                                double b = 1.0) {
    std::vector<std::pair<long double, long double>> cur = {{a, b}};
    const long double r = (1.0L - mu) / 2.0L;
    for (int m = 0; m < depth; ++m) {
        std::vector<std::pair<long double, long double>> next;
        next.reserve(cur.size() * 2);
        for (auto [lo, hi] : cur) {
            const long double w = (hi - lo) * r;
            next.emplace_back(lo, lo + w);
            next.emplace_back(hi - w, hi);
        }
        cur = std::move(next);
    }
    return cur;
}

/// Piecewise-linear depth-m staircase anchored at the left end of [a, b]:
/// every leaf interval carries Gamma(alpha+1) w^alpha, spread linearly.
inline long double staircase_from_origin(double mu, int depth, double alpha, double t, long double a,
                                         long double b, int level = 0) {
    if (t <= a) return 0.0L;
    const long double r = (1.0L - mu) / 2.0L;
    const int rest = depth - level;
    const long double leaf = (b - a) * std::pow(r, static_cast<long double>(rest));
    const long double full = std::ldexp(1.0L, rest) * gamma(alpha + 1.0) * std::pow(leaf, static_cast<long double>(alpha));
    if (t >= b) return full;
    if (rest == 0) return full * (t - a) / (b - a);
    const long double w = (b - a) * r;
    return staircase_from_origin(mu, depth, alpha, t, a, a + w, level + 1) +
           staircase_from_origin(mu, depth, alpha, t, b - w, b, level + 1);
}

inline double staircase(double mu, int depth, double alpha, double t0, double t, double a = 0.0,
                        double b = 1.0) {
    return static_cast<double>(staircase_from_origin(mu, depth, alpha, t, a, b) -
                               staircase_from_origin(mu, depth, alpha, t0, a, b));
}

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace oracle
