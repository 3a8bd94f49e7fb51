#include "fractal/fde.hpp"

#include "fractal/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace fractal {

double FdeSystem::rhs_z(double tau, double y, double z) const {
    const double forcing = q ? q(tau, y, z) : 0.0;
    return -u(tau) * f(y, z) * z - v(tau) * h(y) + forcing;
}

double FdeSystem::potential(double y) const {
    if (H) return H(y);
    return numeric::integrate(h, 0.0, y);
}

double FdeSystem::h_slope(double y) const {
    if (dh) return dh(y);
    return numeric::central_difference(h, y);
}

double FdeSystem::v_slope(double tau) const {
    if (dv) return dv(tau);
    return numeric::central_difference(v, tau);
}

double FdeSystem::delta_constant() const {
    if (constants.Delta) return *constants.Delta;
    return constants.E * (constants.lambda1 + constants.eps0) / 2.0;
}

TrajectorySample Trajectory::at_tau(double tau) const {
    if (samples.empty()) throw DomainError("empty trajectory");
    if (tau <= samples.front().tau) return samples.front();
    if (tau >= samples.back().tau) return samples.back();
    auto it = std::lower_bound(samples.begin(), samples.end(), tau,
                               [](const TrajectorySample& s, double x) { return s.tau < x; });
    const TrajectorySample& hi = *it;
    if (hi.tau == tau) return hi;
    const TrajectorySample& lo = *(it - 1);
    const double w = (tau - lo.tau) / (hi.tau - lo.tau);
    return {lo.t + w * (hi.t - lo.t), tau, lo.y + w * (hi.y - lo.y), lo.z + w * (hi.z - lo.z)};
}

TrajectorySample Trajectory::at_time(const StaircaseTable& table, double t) const {
    TrajectorySample s = at_tau(eval_staircase(table, t));
    s.t = t;
    return s;
}

double warp_time(const StaircaseTable& table, double tau) {
    if (!(tau >= table.s_min() && tau <= table.s_max()))
        throw DomainError("tau = " + std::to_string(tau) + " lies outside the staircase range");
    const auto& s = table.s;
    const auto& t = table.t;
    auto it = std::lower_bound(s.begin(), s.end(), tau);
    const auto k = static_cast<std::size_t>(it - s.begin());
    if (s[k] == tau || k == 0) return t[k];
    // s[k-1] < tau < s[k]: a segment inside an interval.
    const double w = (tau - s[k - 1]) / (s[k] - s[k - 1]);
    return std::min(t[k], t[k - 1] + w * (t[k] - t[k - 1]));
}

namespace {

struct State {
    double y;
    double z;
};

// Derivative of the state with respect to tau.
using Rhs = std::function<State(double, State)>;

State step(const Rhs& rhs, double tau, State x, double h, Scheme scheme) {
    if (scheme == Scheme::euler) {
        const State k1 = rhs(tau, x);
        return {x.y + h * k1.y, x.z + h * k1.z};
    }
    const State k1 = rhs(tau, x);
    const State k2 = rhs(tau + 0.5 * h, {x.y + 0.5 * h * k1.y, x.z + 0.5 * h * k1.z});
    const State k3 = rhs(tau + 0.5 * h, {x.y + 0.5 * h * k2.y, x.z + 0.5 * h * k2.z});
    const State k4 = rhs(tau + h, {x.y + h * k3.y, x.z + h * k3.z});
    return {x.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            x.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
}

bool diverged(const TrajectorySample& s) {
    return !std::isfinite(s.y) || !std::isfinite(s.z) ||
           std::abs(s.y) + std::abs(s.z) > blow_up_bound;
}

// Integrates from tau = 0 to tau_end. `report` turns the internal state into
// the emitted (y, z) pair; `time_of` maps tau back to physical time.
Trajectory integrate(const Rhs& rhs, State x0, double tau_end, double dtau, Scheme scheme,
                     const std::function<double(double)>& time_of,
                     const std::function<State(double, State)>& report, int depth) {
    if (!(dtau > 0.0) || !std::isfinite(dtau)) throw ParameterError("dtau must be positive");
    if (!(tau_end >= 0.0)) throw ParameterError("t_end must not precede the anchor t0");

    Trajectory traj;
    traj.solver = scheme == Scheme::rk4 ? "rk4" : "euler";
    traj.dtau = dtau;
    traj.depth = depth;

    const auto steps = static_cast<std::size_t>(std::ceil(tau_end / dtau - 1e-9));
    traj.samples.reserve(steps + 1);

    auto emit = [&](double tau, State x) {
        const State r = report(tau, x);
        TrajectorySample s{time_of(tau), tau, r.y, r.z};
        if (diverged(s))
            throw BlowUpError("state diverged at tau = " + std::to_string(tau), std::move(traj));
        traj.samples.push_back(s);
    };

    State x = x0;
    emit(0.0, x);
    for (std::size_t k = 0; k < steps; ++k) {
        const double tau = static_cast<double>(k) * dtau;
        const double next = k + 1 == steps ? tau_end : static_cast<double>(k + 1) * dtau;
        x = step(rhs, tau, x, next - tau, scheme);
        emit(next, x);
    }
    return traj;
}

double tau_end_for(const StaircaseTable& table, double t_end) {
    if (!(t_end >= table.t0)) throw ParameterError("t_end must not precede the anchor t0");
    return eval_staircase(table, t_end);
}

}  // namespace

Trajectory solve_first_order(const ScalarField& g, const StaircaseTable& table, double h0,
                             double t_end, double dtau, Scheme scheme) {
    const double tau_end = tau_end_for(table, t_end);
    const Rhs rhs = [&](double, State x) { return State{g(x.y), 0.0}; };
    const auto report = [&](double, State x) { return State{x.y, g(x.y)}; };
    const auto time_of = [&](double tau) { return warp_time(table, tau); };
    return integrate(rhs, {h0, 0.0}, tau_end, dtau, scheme, time_of, report, table.spec.depth);
}

Trajectory solve_second_order(const FdeSystem& sys, const StaircaseTable& table, double y0,
                              double z0, double t_end, double dtau, Scheme scheme) {
    const double tau_end = tau_end_for(table, t_end);
    const Rhs rhs = [&](double tau, State x) { return State{x.z, sys.rhs_z(tau, x.y, x.z)}; };
    const auto report = [](double, State x) { return x; };
    const auto time_of = [&](double tau) { return warp_time(table, tau); };
    return integrate(rhs, {y0, z0}, tau_end, dtau, scheme, time_of, report, table.spec.depth);
}

Trajectory solve_first_order_classical(const ScalarField& g, double h0, double t_end, double dt,
                                       Scheme scheme) {
    const Rhs rhs = [&](double, State x) { return State{g(x.y), 0.0}; };
    const auto report = [&](double, State x) { return State{x.y, g(x.y)}; };
    const auto identity = [](double tau) { return tau; };
    return integrate(rhs, {h0, 0.0}, t_end, dt, scheme, identity, report, 0);
}

Trajectory solve_second_order_classical(const FdeSystem& sys, double y0, double z0, double t_end,
                                        double dt, Scheme scheme) {
    const Rhs rhs = [&](double tau, State x) { return State{x.z, sys.rhs_z(tau, x.y, x.z)}; };
    const auto report = [](double, State x) { return x; };
    const auto identity = [](double tau) { return tau; };
    return integrate(rhs, {y0, z0}, t_end, dt, scheme, identity, report, 0);
}

}  // namespace fractal
