#pragma once

#include "fractal/error.hpp"
#include "fractal/staircase.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fractal {

/// Right-hand side g(h) of D^alpha h = g(h).
using ScalarField = std::function<double(double)>;

/// Constants appearing in the boundedness/convergence assumptions.
struct FdeConstants {
    double u0 = 1.0;
    double v0 = 1.0;
    double E = 1.0;
    double Q = 1.0;
    double lambda1 = 0.5;
    double lambda2 = 1.0;
    double eps0 = 0.1;
    double eps1 = 1.0;
    double eps2 = 0.1;
    double sigma = 0.5;
    /// Unset means Delta = E3 = E (lambda1 + eps0) / 2.
    std::optional<double> Delta;
    /// Additive constant of L0; the boundedness argument needs k >= 1/32.
    double k = 1.0 / 32.0;
};

/// Second alpha-order system in staircase time tau = S(t):
///   y' = z,  z' = -u(tau) f(y, z) z - v(tau) h(y) + q(tau, y, z).
struct FdeSystem {
    std::function<double(double)> u;
    std::function<double(double)> v;
    std::function<double(double, double)> f;
    std::function<double(double)> h;
    std::function<double(double, double, double)> q;

    // Optional closed forms; numerical fallbacks are used when empty.
    std::function<double(double)> H;   ///< integral of h from 0 to y
    std::function<double(double)> dh;  ///< derivative of h
    std::function<double(double)> dv;  ///< derivative of v in tau
    std::function<double(double)> r1;  ///< forcing bounds, default 0
    std::function<double(double)> r2;

    FdeConstants constants;

    double rhs_z(double tau, double y, double z) const;
    double potential(double y) const;      ///< H(y)
    double h_slope(double y) const;        ///< h'(y)
    double v_slope(double tau) const;      ///< v'(tau)
    double r1_at(double tau) const { return r1 ? r1(tau) : 0.0; }
    double r2_at(double tau) const { return r2 ? r2(tau) : 0.0; }
    double delta_constant() const;         ///< Delta or E3
};

enum class Scheme { rk4, euler };

struct TrajectorySample {
    double t;
    double tau;
    double y;
    double z;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::string solver;
    double dtau = 0.0;
    int depth = 0;

    /// State at staircase time tau by linear interpolation between samples.
    TrajectorySample at_tau(double tau) const;
    /// State at physical time t: tau = S(t), so the state is constant across
    /// gaps of the set.
    TrajectorySample at_time(const StaircaseTable& table, double t) const;
};

/// Raised when a state leaves the finite range or |y| + |z| > blow_up_bound.
/// Carries the trajectory up to the last accepted step.
class BlowUpError : public NumericalError {
public:
    BlowUpError(const std::string& what, Trajectory partial)
        : NumericalError(what), partial_(std::move(partial)) {}
    const Trajectory& partial() const noexcept { return partial_; }

private:
    Trajectory partial_;
};

inline constexpr double blow_up_bound = 1e12;

/// Smallest t with S(t) >= tau. Throws DomainError outside [s_min, s_max].
double warp_time(const StaircaseTable& table, double tau);

/// D^alpha h = g(h), h(t0) = h0, integrated in tau from 0 to S(t_end).
/// Samples carry y = h and z = g(h).
Trajectory solve_first_order(const ScalarField& g, const StaircaseTable& table, double h0,
                             double t_end, double dtau, Scheme scheme = Scheme::rk4);

/// The second-order system from (y0, z0) at t0 to t_end.
Trajectory solve_second_order(const FdeSystem& sys, const StaircaseTable& table, double y0,
                              double z0, double t_end, double dtau, Scheme scheme = Scheme::rk4);

/// Ordinary (alpha = 1, full interval) references where tau = t.
Trajectory solve_first_order_classical(const ScalarField& g, double h0, double t_end, double dt,
                                       Scheme scheme = Scheme::rk4);
Trajectory solve_second_order_classical(const FdeSystem& sys, double y0, double z0, double t_end,
                                        double dt, Scheme scheme = Scheme::rk4);

}  // namespace fractal
