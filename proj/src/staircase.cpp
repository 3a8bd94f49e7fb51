#include "fractal/staircase.hpp"

#include "fractal/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fractal {

double gamma_factor(double alpha) { return std::tgamma(alpha + 1.0); }

void validate_order(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw ParameterError("order alpha must lie in (0, 1], got " + std::to_string(alpha));
}

double l_alpha_sum(const IntervalSet& set, double alpha, std::span<const double> subdivision) {
    validate_order(alpha);
    if (subdivision.size() < 2) throw ParameterError("subdivision needs at least two points");
    std::vector<double> widths;
    widths.reserve(subdivision.size() - 1);
    for (std::size_t i = 1; i < subdivision.size(); ++i) {
        const double lo = subdivision[i - 1];
        const double hi = subdivision[i];
        if (!(lo < hi)) throw ParameterError("subdivision must be strictly increasing");
        if (set.meets_open(lo, hi)) widths.push_back(hi - lo);
    }
    return gamma_factor(alpha) * kernels::pow_sum(widths, alpha);
}

int depth_for_resolution(const CantorSpec& spec, double delta) {
    if (!(delta > 0.0)) throw ParameterError("resolution delta must be positive");
    const int cap = max_depth();
    for (int m = 0; m <= cap; ++m)
        if (spec.interval_length(m) <= delta) return m;
    throw ResolutionError("delta " + std::to_string(delta) + " needs depth beyond the cap " +
                          std::to_string(cap));
}

double mass_in_window(const IntervalSet& set, double alpha, double c1, double c2) {
    if (!(c1 < c2)) throw ParameterError("mass window needs c1 < c2");
    const auto left = set.left();
    const auto right = set.right();
    const auto width = set.width();
    // Intervals with right > c1 and left < c2 meet the open window.
    const auto first = static_cast<std::size_t>(
        std::upper_bound(right.begin(), right.end(), c1) - right.begin());
    const auto last = static_cast<std::size_t>(
        std::lower_bound(left.begin(), left.end(), c2) - left.begin());
    if (first >= last) return 0.0;

    // Fully covered intervals keep their stored width; the (at most two)
    // clipped ones get the clipped length.
    std::size_t inner_begin = first;
    std::size_t inner_end = last;
    double edge = 0.0;
    auto clipped = [&](std::size_t i) { return std::min(right[i], c2) - std::max(left[i], c1); };
    if (left[first] < c1) {
        edge += std::pow(clipped(first), alpha);
        ++inner_begin;
    }
    if (inner_begin < inner_end && right[last - 1] > c2) {
        edge += std::pow(clipped(last - 1), alpha);
        --inner_end;
    }
    double inner = 0.0;
    if (inner_begin < inner_end)
        inner = kernels::pow_sum(width.subspan(inner_begin, inner_end - inner_begin), alpha);
    return gamma_factor(alpha) * (inner + edge);
}

MassEstimate estimate_mass(const CantorSpec& spec, double alpha, double c1, double c2, double delta) {
    validate_order(alpha);
    if (!(c1 < c2)) throw ParameterError("mass window needs c1 < c2");
    CantorSpec s = spec;
    s.depth = depth_for_resolution(spec, delta);
    const IntervalSet set = generate(s);
    return {alpha, delta, s.depth, mass_in_window(set, alpha, c1, c2)};
}

namespace {

// Running compensated prefix sums: prefix[k] = sum of w[0..k).
std::vector<double> prefix_sums(std::span<const double> w) {
    std::vector<double> prefix(w.size() + 1, 0.0);
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double t = sum + w[i];
        if (std::abs(sum) >= std::abs(w[i]))
            comp += (sum - t) + w[i];
        else
            comp += (w[i] - t) + sum;
        sum = t;
        prefix[i + 1] = sum + comp;
    }
    return prefix;
}

}  // namespace

StaircaseTable build_staircase(const CantorSpec& spec, double alpha, double t0) {
    validate_order(alpha);
    spec.validate();
    if (!(t0 >= spec.origin && t0 <= spec.extent))
        throw ParameterError("anchor t0 must lie within the base interval");

    StaircaseTable table;
    table.alpha = alpha;
    table.gamma = gamma_factor(alpha);
    table.t0 = t0;
    table.spec = spec;
    table.set = generate(spec);

    const IntervalSet& set = table.set;
    const std::size_t n = set.size();
    std::vector<double> w(n);
    kernels::pow_map(set.width(), alpha, w);
    for (double& x : w) x *= table.gamma;
    const std::vector<double> prefix = prefix_sums(w);

    const auto left = set.left();
    const auto right = set.right();
    const std::size_t inside = set.find(t0);
    const bool strictly_inside = inside < n && left[inside] < t0 && t0 < right[inside];

    table.t.reserve(2 * n + 1);
    table.s.reserve(2 * n + 1);
    if (!strictly_inside) {
        // Number of intervals lying entirely at or before t0.
        const auto before = static_cast<std::size_t>(
            std::upper_bound(right.begin(), right.end(), t0) - right.begin());
        const double base = prefix[before];
        for (std::size_t k = 0; k < n; ++k) {
            table.t.push_back(left[k]);
            table.s.push_back(prefix[k] - base);
            table.t.push_back(right[k]);
            table.s.push_back(prefix[k + 1] - base);
        }
    } else {
        const std::size_t j = inside;
        const double wl = table.gamma * std::pow(t0 - left[j], alpha);
        const double wr = table.gamma * std::pow(right[j] - t0, alpha);
        for (std::size_t k = 0; k < j; ++k) {
            table.t.push_back(left[k]);
            table.s.push_back(-(wl + (prefix[j] - prefix[k])));
            table.t.push_back(right[k]);
            table.s.push_back(-(wl + (prefix[j] - prefix[k + 1])));
        }
        table.t.push_back(left[j]);
        table.s.push_back(-wl);
        table.t.push_back(t0);
        table.s.push_back(0.0);
        table.t.push_back(right[j]);
        table.s.push_back(wr);
        for (std::size_t k = j + 1; k < n; ++k) {
            table.t.push_back(left[k]);
            table.s.push_back(wr + (prefix[k] - prefix[j + 1]));
            table.t.push_back(right[k]);
            table.s.push_back(wr + (prefix[k + 1] - prefix[j + 1]));
        }
    }
    return table;
}

double eval_staircase(const StaircaseTable& table, double t) {
    if (!(t >= table.t_begin() && t <= table.t_end()))
        throw DomainError("t = " + std::to_string(t) + " lies outside the staircase span");
    const auto& ts = table.t;
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    const auto k = static_cast<std::size_t>(it - ts.begin());
    if (ts[k] == t) return table.s[k];
    const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
    const double s0 = table.s[k - 1];
    const double s1 = table.s[k];
    return s0 == s1 ? s0 : s0 + w * (s1 - s0);
}

std::vector<double> default_alpha_grid(double step) {
    if (!(step > 0.0 && step <= 1.0)) throw ParameterError("alpha grid step must lie in (0, 1]");
    std::vector<double> grid;
    const int n = static_cast<int>(std::floor(1.0 / step + 1e-9));
    for (int i = 1; i <= n; ++i) grid.push_back(i * step);
    return grid;
}

DimensionEstimate gamma_dimension(const CantorSpec& spec, double delta1, double delta2,
                                  std::span<const double> alphas) {
    if (!(delta2 < delta1)) throw ParameterError("gamma_dimension needs delta2 < delta1");
    if (alphas.size() < 2) throw ParameterError("alpha grid needs at least two points");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        validate_order(alphas[i]);
        if (i > 0 && !(alphas[i - 1] < alphas[i]))
            throw ParameterError("alpha grid must be strictly increasing");
    }

    CantorSpec coarse = spec;
    CantorSpec fine = spec;
    coarse.depth = depth_for_resolution(spec, delta1);
    fine.depth = depth_for_resolution(spec, delta2);
    if (fine.depth <= coarse.depth)
        throw ResolutionError("delta1 and delta2 resolve to the same depth");
    const IntervalSet coarse_set = generate(coarse);
    const IntervalSet fine_set = generate(fine);

    auto ratio = [&](double alpha) {
        const double m1 = mass_in_window(coarse_set, alpha, spec.origin, spec.extent);
        const double m2 = mass_in_window(fine_set, alpha, spec.origin, spec.extent);
        return m2 / m1;
    };

    DimensionEstimate out{0.0, coarse.depth, fine.depth, {}};
    out.curve.reserve(alphas.size());
    for (double a : alphas) out.curve.push_back({a, ratio(a)});

    for (std::size_t i = 1; i < out.curve.size(); ++i) {
        const double f_lo = out.curve[i - 1].ratio - 1.0;
        const double f_hi = out.curve[i].ratio - 1.0;
        if (f_lo == 0.0) {
            out.alpha = out.curve[i - 1].alpha;
            return out;
        }
        if (f_lo > 0.0 && f_hi <= 0.0) {
            double lo = out.curve[i - 1].alpha;
            double hi = out.curve[i].alpha;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                if (ratio(mid) - 1.0 > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            out.alpha = 0.5 * (lo + hi);
            return out;
        }
    }
    throw EstimationError("mass ratio does not cross 1 on the alpha grid", std::move(out.curve));
}

double characteristic(const IntervalSet& set, double alpha, double t) {
    validate_order(alpha);
    return set.contains(t) ? 1.0 / gamma_factor(alpha) : 0.0;
}

double characteristic(const CantorSpec& spec, double alpha, double t) {
    return characteristic(generate(spec), alpha, t);
}

}  // namespace fractal
