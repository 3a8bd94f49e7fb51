#include "fractal/kernels.hpp"

#include <cmath>

namespace fractal::kernels::scalar {

namespace {

// Kahan-Babuska (Neumaier) accumulator.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace

double sum(std::span<const double> xs) {
    Accumulator acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

void pow_map(std::span<const double> x, double alpha, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x[i] > 0.0 ? std::pow(x[i], alpha) : 0.0;
}

double pow_sum(std::span<const double> x, double alpha) {
    Accumulator acc;
    for (double v : x)
        if (v > 0.0) acc.add(std::pow(v, alpha));
    return acc.value();
}

double stieltjes_sum(std::span<const double> f, std::span<const double> s) {
    Accumulator acc;
    for (std::size_t i = 0; i < f.size(); ++i) acc.add(f[i] * (s[i + 1] - s[i]));
    return acc.value();
}

}  // namespace fractal::kernels::scalar
