#pragma once

#include "fractal/fde.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fractal {

/// Candidate Lyapunov function of (tau, y, z). Missing partials are taken by
/// central differences. For first-order fields the state sits in y and z is 0.
struct LyapunovFunction {
    std::function<double(double, double, double)> value;
    std::function<double(double, double, double)> d_y;
    std::function<double(double, double, double)> d_z;
    std::function<double(double, double, double)> d_tau;

    double operator()(double tau, double y, double z) const { return value(tau, y, z); }
    double grad_y(double tau, double y, double z) const;
    double grad_z(double tau, double y, double z) const;
    double grad_tau(double tau, double y, double z) const;
};

/// Chain rule along the tau-dynamics of the second-order system:
/// L_y y' + L_z z' + L_tau.
double lyapunov_derivative(const LyapunovFunction& L, const FdeSystem& sys, double tau, double y,
                           double z);

/// Along D^alpha h = g(h): L_y g(h) + L_tau.
double lyapunov_derivative(const LyapunovFunction& L, const ScalarField& g, double tau, double h);

enum class Stability {
    lyapunov_stable,
    asymptotically_stable,
    exponentially_stable,
    inconclusive,
    unstable_evidence,
};

std::string to_string(Stability s);

/// True when `s` implies `level` in the lattice
/// exponential => asymptotic => Lyapunov-stable. inconclusive and
/// unstable_evidence imply only themselves.
bool implies(Stability s, Stability level);

struct EpsDeltaWitness {
    double eps;
    std::optional<double> delta;  ///< largest delta on the grid that kept containment
    double max_deviation;         ///< sup |state - equilibrium| over the runs for delta
};

/// Fit of log |state - equilibrium| against tau over the latter half of the
/// horizon, recast in the exponential-stability form
///   |h(t) - h_e| <= kappa^alpha |h(0) - h_e| exp(-lambda alpha tau).
struct ExponentialFit {
    double rate_tau;   ///< decay rate in staircase time
    double lambda;     ///< rate_tau / alpha
    double kappa;      ///< smallest kappa making the bound hold on the run
    double r_squared;
};

struct StabilityOptions {
    std::vector<double> eps_grid = {1.0, 0.5, 0.25};
    std::vector<double> delta_grid = {0.5, 0.25, 0.1, 0.05, 0.01};
    double horizon = 20.0;  ///< in staircase time
    double dtau = 1e-3;
    double equilibrium_tolerance = 1e-9;
    /// Asymptotic decay: terminal distance <= decay_ratio * initial distance.
    double decay_ratio = 1e-3;
    double min_r_squared = 0.99;
};

struct StabilityReport {
    Stability classification = Stability::inconclusive;
    double alpha = 1.0;
    std::vector<EpsDeltaWitness> witnesses;
    std::optional<ExponentialFit> fit;
    double worst_terminal_ratio = 0.0;  ///< max terminal / initial distance
    std::vector<Trajectory> trajectories;
    std::string note;
};

/// Classifies the equilibrium h_e of D^alpha h = g(h) by simulation over the
/// eps/delta grids. Initial offsets lie strictly inside delta^alpha and
/// containment is tested against eps^alpha.
StabilityReport classify_stability(const ScalarField& g, const StaircaseTable& table,
                                   double equilibrium, const StabilityOptions& options = {});

/// Same for the equilibrium (y_e, 0) of the second-order system, with the
/// Euclidean distance in (y, z).
StabilityReport classify_stability(const FdeSystem& sys, const StaircaseTable& table,
                                   double equilibrium, const StabilityOptions& options = {});

/// One inequality checked over a grid or along trajectories. worst_margin is
/// the smallest signed slack found; pass iff it is non-negative (strict
/// inequalities use their own rule, recorded in `note`).
struct ConditionResult {
    std::string condition;
    bool pass = false;
    double worst_margin = 0.0;
    std::map<std::string, double> witness;
    std::string note;
};

struct AssumptionGrids {
    std::vector<double> tau;
    std::vector<double> y;
    std::vector<double> z;
    /// Expanding windows for the H -> infinity and convergent-integral
    /// trend tests.
    std::vector<double> windows = {10.0, 20.0, 40.0, 80.0, 160.0};
    double trend_tolerance = 1e-3;
    double potential_cutoff = 100.0;

    /// tau in [0, 20], y and z in [-5, 5].
    static AssumptionGrids defaults();
};

struct AssumptionReport {
    std::vector<ConditionResult> conditions;  ///< C1..C7 in order

    const ConditionResult& get(const std::string& name) const;
    /// True when every listed condition passes.
    bool passes(std::initializer_list<const char*> names) const;
    bool all_pass() const;
};

AssumptionReport check_assumptions(const FdeSystem& sys, double alpha,
                                   const AssumptionGrids& grids = AssumptionGrids::defaults());

struct VerificationOptions {
    std::vector<std::pair<double, double>> initial_states;  ///< empty: built-in set
    double horizon = 20.0;
    double dtau = 1e-3;
    int grid_points = 50;       ///< per axis for state-grid bounds
    double grid_radius = 2.0;
    double derivative_tolerance = 1e-10;
    double drift_tolerance = 1e-8;
    double convergence_threshold = 1e-2;
    /// Relative rounding allowance for inequalities that hold with equality
    /// on part of the grid.
    double rounding = 64.0 * 2.220446049250313e-16;
    AssumptionGrids grids = AssumptionGrids::defaults();
};

struct VerificationReport {
    std::string theorem;
    bool pass = false;
    AssumptionReport assumptions;
    std::vector<ConditionResult> checks;
    std::string note;

    const ConditionResult& get(const std::string& name) const;
};

/// L2 = H(y) + z^2 / (2 v(tau)).
LyapunovFunction theorem1_lyapunov(const FdeSystem& sys);
/// L0 = v(tau) H(y) + z^2 / 2 + k.
LyapunovFunction theorem2_lyapunov(const FdeSystem& sys);

/// Stability of the unforced system (q = 0) under C1-C4: D L2 <= 0 along
/// trajectories, no upward drift between steps, and
/// L2 >= min(lambda2, 1/(2 Q^alpha)) (y^2 + z^2) on a state grid.
/// Throws PreconditionError naming the first failing assumption.
VerificationReport verify_theorem1(const FdeSystem& sys, const StaircaseTable& table,
                                   const VerificationOptions& options = {});

/// Boundedness and convergence under C1-C7: the L0 sandwich, the bound on
/// D L0, decrease of the weighted function exp(-int zeta) L0, boundedness of
/// every run and |y|, |z| below the threshold at the horizon.
VerificationReport verify_theorem2(const FdeSystem& sys, const StaircaseTable& table,
                                   const VerificationOptions& options = {});

}  // namespace fractal
