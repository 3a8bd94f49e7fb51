#include "fractal/models.hpp"

#include <cmath>

namespace fractal::models {

namespace {

double one(double) { return 1.0; }
double zero(double) { return 0.0; }

}  // namespace

ScalarField example1_field() {
    return [](double h) { return -h; };
}

LyapunovFunction example1_lyapunov() {
    LyapunovFunction L;
    L.value = [](double, double y, double) { return y * y; };
    L.d_y = [](double, double y, double) { return 2.0 * y; };
    L.d_z = [](double, double, double) { return 0.0; };
    L.d_tau = [](double, double, double) { return 0.0; };
    return L;
}

FdeSystem example2_system() {
    FdeSystem sys;
    sys.u = one;
    sys.v = one;
    sys.f = [](double y, double) { return y * y; };
    sys.h = [](double y) { return y; };
    sys.H = [](double y) { return 0.5 * y * y; };
    sys.dh = one;
    sys.dv = zero;
    return sys;
}

double example2_s_integral(double y) { return y * y * y / 3.0; }

LyapunovFunction example2_lyapunov() {
    LyapunovFunction L;
    L.value = [](double, double y, double z) {
        const double w = z + example2_s_integral(y);
        return 0.5 * y * y + 0.5 * w * w;
    };
    L.d_y = [](double, double y, double z) { return y + (z + example2_s_integral(y)) * y * y; };
    L.d_z = [](double, double y, double z) { return z + example2_s_integral(y); };
    L.d_tau = [](double, double, double) { return 0.0; };
    return L;
}

FdeSystem example3_system(double c) {
    if (!(c > 0.0)) throw ParameterError("oscillator constant must be positive");
    FdeSystem sys;
    sys.u = one;
    sys.v = [c](double) { return c; };
    sys.f = [](double, double) { return 0.0; };
    sys.h = [](double y) { return y; };
    sys.H = [](double y) { return 0.5 * y * y; };
    sys.dh = one;
    sys.dv = zero;
    return sys;
}

LyapunovFunction example3_lyapunov(double c) {
    LyapunovFunction L;
    L.value = [c](double, double y, double z) { return 0.5 * c * y * y + 0.5 * z * z; };
    L.d_y = [c](double, double y, double) { return c * y; };
    L.d_z = [](double, double, double z) { return z; };
    L.d_tau = [](double, double, double) { return 0.0; };
    return L;
}

FdeSystem theorem1_toy() {
    FdeSystem sys;
    sys.u = one;
    sys.v = one;
    sys.f = [](double, double) { return 1.0; };
    sys.h = [](double y) { return y; };
    sys.H = [](double y) { return 0.5 * y * y; };
    sys.dh = one;
    sys.dv = zero;
    return sys;
}

FdeSystem theorem2_toy() {
    FdeSystem sys = theorem1_toy();
    sys.q = [](double tau, double, double) { return std::exp(-tau); };
    sys.r1 = [](double tau) { return std::exp(-tau); };
    return sys;
}

}  // namespace fractal::models
