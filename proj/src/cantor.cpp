#include "fractal/cantor.hpp"

#include "fractal/error.hpp"
#include "fractal/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>

namespace fractal {

int max_depth() {
    const char* env = std::getenv("FRACTAL_CALC_MAX_DEPTH");
    if (!env) return default_max_depth;
    const std::string_view text(env);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0 || value > 40)
        return default_max_depth;
    return value;
}

void CantorSpec::validate() const {
    if (!(mu > 0.0 && mu < 1.0))
        throw ParameterError("mu must lie in (0, 1), got " + std::to_string(mu));
    if (depth < 0) throw ParameterError("depth must be non-negative");
    if (depth > max_depth())
        throw ParameterError("depth " + std::to_string(depth) + " exceeds the cap " +
                             std::to_string(max_depth()) + " (FRACTAL_CALC_MAX_DEPTH)");
    if (!std::isfinite(origin) || !std::isfinite(extent) || !(origin < extent))
        throw ParameterError("base interval must satisfy origin < extent");
}

double CantorSpec::interval_length(int level) const {
    return static_cast<double>(static_cast<long double>(base_length()) *
                               std::pow(static_cast<long double>(ratio()), level));
}

IntervalSet::IntervalSet(std::span<const Interval> intervals) {
    left_.reserve(intervals.size());
    right_.reserve(intervals.size());
    width_.reserve(intervals.size());
    for (const auto& iv : intervals) {
        if (!(iv.a <= iv.b)) throw ParameterError("interval endpoints reversed");
        left_.push_back(iv.a);
        right_.push_back(iv.b);
        width_.push_back(iv.b - iv.a);
    }
    check_sorted();
}

IntervalSet IntervalSet::from_arrays(std::vector<double> left, std::vector<double> right,
                                     std::vector<double> width) {
    if (left.size() != right.size() || left.size() != width.size())
        throw ParameterError("interval array size mismatch");
    for (std::size_t i = 0; i < left.size(); ++i)
        if (!(left[i] <= right[i]) || !(width[i] >= 0.0))
            throw ParameterError("interval endpoints reversed");
    IntervalSet s;
    s.left_ = std::move(left);
    s.right_ = std::move(right);
    s.width_ = std::move(width);
    s.check_sorted();
    return s;
}

void IntervalSet::check_sorted() const {
    for (std::size_t i = 1; i < left_.size(); ++i)
        if (!(right_[i - 1] < left_[i]))
            throw ParameterError("intervals must be sorted and strictly disjoint");
}

std::size_t IntervalSet::find(double t) const {
    // Last interval whose left endpoint is <= t.
    auto it = std::upper_bound(left_.begin(), left_.end(), t);
    if (it == left_.begin()) return size();
    const auto i = static_cast<std::size_t>(it - left_.begin()) - 1;
    return t <= right_[i] ? i : size();
}

bool IntervalSet::contains(double t) const { return find(t) != size(); }

bool IntervalSet::meets_open(double lo, double hi) const {
    if (!(lo < hi) || empty()) return false;
    // First interval with left < hi; walk back to the last such interval and
    // test whether its right end passes lo.
    auto it = std::lower_bound(left_.begin(), left_.end(), hi);
    if (it == left_.begin()) return false;
    const auto i = static_cast<std::size_t>(it - left_.begin()) - 1;
    return right_[i] > lo;
}

std::vector<Interval> IntervalSet::intervals() const {
    std::vector<Interval> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i]);
    return out;
}

IntervalSet generate(const CantorSpec& spec) {
    spec.validate();
    const std::size_t count = std::size_t{1} << spec.depth;

    // Each left endpoint is origin plus, for every level at which the path
    // takes the right branch, the shift (parent - child). Sums run in
    // extended precision and are rounded once.
    std::vector<long double> shift(static_cast<std::size_t>(spec.depth) + 1, 0.0L);
    long double parent = spec.base_length();
    const long double r = static_cast<long double>(spec.ratio());
    for (int level = 1; level <= spec.depth; ++level) {
        const long double child = parent * r;
        shift[static_cast<std::size_t>(level)] = parent - child;
        parent = child;
    }

    if (spec.depth > 0) {
        const double smallest_gap = spec.mu * static_cast<double>(parent / r);
        const double scale = std::max(std::abs(spec.origin), std::abs(spec.extent));
        if (smallest_gap < 8.0 * std::numeric_limits<double>::epsilon() * scale)
            throw ResolutionError("depth " + std::to_string(spec.depth) +
                                  " gaps are below double resolution for this base interval");
    }

    std::vector<double> lo(count);
    std::vector<double> hi(count);
    for (std::size_t i = 0; i < count; ++i) {
        long double a = spec.origin;
        for (int level = 1; level <= spec.depth; ++level)
            if ((i >> (spec.depth - level)) & 1U) a += shift[static_cast<std::size_t>(level)];
        lo[i] = static_cast<double>(a);
        hi[i] = static_cast<double>(a + parent);
    }
    hi.back() = spec.extent;
    std::vector<double> width(count, static_cast<double>(parent));
    return IntervalSet::from_arrays(std::move(lo), std::move(hi), std::move(width));
}

double covering_measure(const IntervalSet& set) { return kernels::sum(set.width()); }

double hausdorff_dimension(double mu) {
    if (!(mu > 0.0 && mu < 1.0)) throw ParameterError("mu must lie in (0, 1)");
    const double ln2 = std::log(2.0);
    return ln2 / (ln2 - std::log1p(-mu));
}

}  // namespace fractal
