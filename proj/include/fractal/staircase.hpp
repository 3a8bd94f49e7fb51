#pragma once

#include "fractal/cantor.hpp"
#include "fractal/error.hpp"

#include <span>
#include <vector>

namespace fractal {

/// Gamma(alpha + 1), the weight carried by every mass term.
double gamma_factor(double alpha);

/// Throws ParameterError unless 0 < alpha <= 1.
void validate_order(double alpha);

/// Gamma(alpha+1) * sum (t_i - t_{i-1})^alpha over the cells of
/// `subdivision` that meet the set.
///
/// A cell is flagged when its interior meets the set. A cell that only
/// touches the set at an endpoint (a gap cell bounded by two set points)
/// carries no mass, which is the value the infimum over finer subdivisions
/// converges to.
double l_alpha_sum(const IntervalSet& set, double alpha, std::span<const double> subdivision);

struct MassEstimate {
    double alpha;
    double delta;  ///< max width of a set-carrying cell
    int depth;     ///< generation depth that realised delta
    double value;
};

/// Smallest depth whose intervals are no longer than delta. Throws
/// ResolutionError past max_depth().
int depth_for_resolution(const CantorSpec& spec, double delta);

/// Mass of the realised set inside [c1, c2]: subdivision points sit at every
/// gap endpoint, so each surviving interval (clipped to the window)
/// contributes Gamma(alpha+1) * length^alpha.
double mass_in_window(const IntervalSet& set, double alpha, double c1, double c2);

/// Approximates M^alpha_delta(C, c1, c2). The spec's depth is ignored; the
/// depth is chosen from delta.
MassEstimate estimate_mass(const CantorSpec& spec, double alpha, double c1, double c2, double delta);

/// Breakpoint table of the integral staircase S^alpha(t) anchored at t0.
struct StaircaseTable {
    double alpha = 1.0;
    double gamma = 1.0;  ///< Gamma(alpha + 1)
    double t0 = 0.0;
    CantorSpec spec;
    IntervalSet set;
    /// Interval endpoints (plus t0 when it falls strictly inside an
    /// interval), strictly increasing.
    std::vector<double> t;
    /// S at each breakpoint; non-decreasing, 0 at t0, equal across gaps.
    std::vector<double> s;

    double t_begin() const { return t.front(); }
    double t_end() const { return t.back(); }
    double s_min() const { return s.front(); }
    double s_max() const { return s.back(); }
};

StaircaseTable build_staircase(const CantorSpec& spec, double alpha, double t0);

/// Exact at breakpoints, linear inside an interval, constant across a gap.
/// Throws DomainError outside [t_begin, t_end].
double eval_staircase(const StaircaseTable& table, double t);

struct RatioPoint {
    double alpha;
    double ratio;
};

/// Raised when the ratio curve never crosses 1 on the grid.
class EstimationError : public Error {
public:
    EstimationError(const std::string& what, std::vector<RatioPoint> curve)
        : Error(what), curve_(std::move(curve)) {}
    const std::vector<RatioPoint>& curve() const noexcept { return curve_; }

private:
    std::vector<RatioPoint> curve_;
};

struct DimensionEstimate {
    double alpha;                   ///< crossing of M_delta2 / M_delta1 = 1
    int coarse_depth;               ///< depth realising delta1
    int fine_depth;                 ///< depth realising delta2
    std::vector<RatioPoint> curve;  ///< ratio sampled on the grid
};

/// Default alpha grid 0.01, 0.02, ..., 1.00.
std::vector<double> default_alpha_grid(double step = 0.01);

/// Locates the alpha where M_{delta2}/M_{delta1} crosses 1, bracketing on the
/// grid and refining by bisection. Requires delta2 < delta1.
DimensionEstimate gamma_dimension(const CantorSpec& spec, double delta1, double delta2,
                                  std::span<const double> alphas);

/// 1/Gamma(alpha+1) on the set, 0 elsewhere.
double characteristic(const IntervalSet& set, double alpha, double t);
double characteristic(const CantorSpec& spec, double alpha, double t);

}  // namespace fractal
