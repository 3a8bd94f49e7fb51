#pragma once

#include "fractal/staircase.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace fractal {

/// Samples of a function at set points, paired with the staircase they are
/// differentiated and integrated against.
class GridFunction {
public:
    using TablePtr = std::shared_ptr<const StaircaseTable>;

    /// Values at every breakpoint of `table` (in order).
    GridFunction(TablePtr table, std::vector<double> values);

    /// Values at chosen sample points; every point must belong to the set
    /// and the points must be strictly increasing.
    GridFunction(TablePtr table, std::vector<double> t, std::vector<double> values);

    /// f(t) at every breakpoint.
    static GridFunction sample(TablePtr table, const std::function<double(double)>& f);
    /// phi(S(t)) at every breakpoint.
    static GridFunction of_staircase(TablePtr table, const std::function<double(double)>& phi);

    const StaircaseTable& table() const { return *table_; }
    const TablePtr& table_ptr() const { return table_; }
    std::size_t size() const { return t_.size(); }
    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& s() const { return s_; }
    const std::vector<double>& values() const { return values_; }

    /// Index of the sample at exactly t, or size().
    std::size_t index_of(double t) const;

private:
    TablePtr table_;
    std::vector<double> t_;
    std::vector<double> s_;
    std::vector<double> values_;
};

/// Difference quotient in S at sample t: (f(t+) - f(t-)) / (S(t+) - S(t-))
/// where t- and t+ are the nearest samples with strictly smaller and larger
/// S. Falls back to a one-sided quotient at the ends. Returns 0 when t is not
/// in the set. Throws ParameterError if t is a set point but not a sample,
/// ResolutionError if no sample with a different S exists.
double fractal_derivative(const GridFunction& f, double t);

/// fractal_derivative at every sample.
GridFunction fractal_derivative(const GridFunction& f);

/// Left-endpoint Stieltjes sum of f against staircase increments over
/// [a, b]. f is held constant from each sample to the next. Returns 0 when
/// S(a) == S(b). Throws ResolutionError if [a, b] carries staircase mass but
/// holds fewer than two samples.
double fractal_integral(const GridFunction& f, double a, double b);

/// Running integral from the first sample, one value per sample.
std::vector<double> cumulative_integral(const GridFunction& f);

/// Numerical C^mu-limit test: every sample z != t with |z - t| < delta
/// satisfies |f(z) - limit| < eps. Throws ResolutionError when no sample
/// lies within delta.
bool c_limit_holds(const GridFunction& f, double t, double limit, double eps, double delta);

/// c_limit_holds with limit = f(t); t must be a sample.
bool c_continuous_at(const GridFunction& f, double t, double eps, double delta);

}  // namespace fractal
