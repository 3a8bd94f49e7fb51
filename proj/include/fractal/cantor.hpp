#pragma once

#include "fractal/error.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fractal {

/// Depth limit applied when FRACTAL_CALC_MAX_DEPTH is unset. A depth-24 set
/// holds 2^24 intervals (256 MiB of endpoint data).
inline constexpr int default_max_depth = 24;

/// Effective depth cap: FRACTAL_CALC_MAX_DEPTH if set to a valid integer,
/// otherwise default_max_depth.
int max_depth();

/// Generator parameters for a middle-mu Cantor set on [origin, extent].
struct CantorSpec {
    double mu = 0.2;
    int depth = 0;
    double origin = 0.0;
    double extent = 1.0;

    /// Throws ParameterError unless 0 < mu < 1, 0 <= depth <= max_depth()
    /// and origin < extent (both finite).
    void validate() const;

    double base_length() const { return extent - origin; }
    /// Scale factor of one generation, (1 - mu) / 2.
    double ratio() const { return 0.5 * (1.0 - mu); }
    /// Length of every interval at `level`.
    double interval_length(int level) const;
};

struct Interval {
    double a;
    double b;
};

/// Sorted, strictly disjoint closed intervals.
///
/// Widths are stored alongside the endpoints: for deep sets they are many
/// orders of magnitude below the endpoint magnitudes, and b - a recomputed
/// from rounded endpoints would carry that cancellation into measure and
/// mass sums. Membership and ordering use the endpoints.
class IntervalSet {
public:
    IntervalSet() = default;

    /// Builds a set from explicit intervals. Throws ParameterError if an
    /// interval is reversed or the list is not sorted and strictly disjoint.
    explicit IntervalSet(std::span<const Interval> intervals);

    /// Builds a set from parallel arrays; width[i] must approximate
    /// right[i] - left[i] and is what length sums use.
    static IntervalSet from_arrays(std::vector<double> left, std::vector<double> right,
                                   std::vector<double> width);

    std::size_t size() const { return left_.size(); }
    bool empty() const { return left_.empty(); }

    Interval operator[](std::size_t i) const { return {left_[i], right_[i]}; }
    std::span<const double> left() const { return left_; }
    std::span<const double> right() const { return right_; }
    std::span<const double> width() const { return width_; }

    double front() const { return left_.front(); }
    double back() const { return right_.back(); }

    /// Membership in the closed union; binary search.
    bool contains(double t) const;

    /// Index of the interval containing t, or size() if none.
    std::size_t find(double t) const;

    /// True iff some interval meets the open cell (lo, hi).
    bool meets_open(double lo, double hi) const;

    std::vector<Interval> intervals() const;

private:
    void check_sorted() const;

    std::vector<double> left_;
    std::vector<double> right_;
    std::vector<double> width_;
};

/// Depth-`spec.depth` realisation of the set: each interval [a, b] is
/// replaced by [a, a + r(b - a)] and [b - r(b - a), b], r = (1 - mu) / 2.
IntervalSet generate(const CantorSpec& spec);

/// Sum of interval lengths.
double covering_measure(const IntervalSet& set);

/// log 2 / (log 2 - log(1 - mu)).
double hausdorff_dimension(double mu);

}  // namespace fractal
