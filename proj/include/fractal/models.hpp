#pragma once

#include "fractal/fde.hpp"
#include "fractal/lyapunov.hpp"

// Built-in systems: the three worked examples and the two toy systems used
// to exercise the boundedness theorems.
namespace fractal::models {

/// D^alpha z = -z. Solutions are c exp(-S(t)).
ScalarField example1_field();
/// L = z^2 (the state sits in the y slot of a first-order Lyapunov function).
LyapunovFunction example1_lyapunov();

/// (D^alpha)^2 y + s(y) D^alpha y + h(y) = 0 with s(y) = y^2, h(y) = y.
/// Written as y' = z, z' = -s(y) z - h(y).
FdeSystem example2_system();
/// S(y) = y^3 / 3, the antiderivative of s.
double example2_s_integral(double y);
/// L1 = H(y) + w^2 / 2 in the Lienard variable w = z + S(y). Along the system
/// its derivative is -h(y) S(y).
LyapunovFunction example2_lyapunov();

/// Harmonic oscillator (D^alpha)^2 y + c y = 0.
FdeSystem example3_system(double c = 1.0);
/// L = c y^2 / 2 + z^2 / 2, conserved along solutions.
LyapunovFunction example3_lyapunov(double c = 1.0);

/// u = v = f = 1, h = y, q = 0, default constants.
FdeSystem theorem1_toy();
/// theorem1_toy with q = exp(-tau) and r1 = exp(-tau).
FdeSystem theorem2_toy();

}  // namespace fractal::models
