#include "fractal/numeric.hpp"

#include "fractal/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace fractal::numeric {

double integrate(const std::function<double(double)>& f, double a, double b, int min_panels) {
    if (a == b) return 0.0;
    static constexpr std::array<double, 5> node = {
        0.0, -0.5384693101056830910363, 0.5384693101056830910363,
        -0.9061798459386639927976, 0.9061798459386639927976};
    static constexpr std::array<double, 5> weight = {
        0.5688888888888888888889, 0.4786286704993664680413, 0.4786286704993664680413,
        0.2369268850561890875143, 0.2369268850561890875143};
    const int panels = std::max(min_panels, static_cast<int>(std::ceil(std::abs(b - a) * 4.0)));
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        double panel = 0.0;
        for (std::size_t i = 0; i < node.size(); ++i) panel += weight[i] * f(mid + 0.5 * width * node[i]);
        total += 0.5 * width * panel;
    }
    return total;
}

double central_difference(const std::function<double(double)>& f, double x) {
    const double step = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(x));
    const double hi = x + step;
    const double lo = x - step;
    if (!(hi > lo)) throw NumericalError("finite-difference step underflows");
    const double d = (f(hi) - f(lo)) / (hi - lo);
    if (!std::isfinite(d)) throw NumericalError("finite-difference derivative is not finite");
    return d;
}

}  // namespace fractal::numeric
