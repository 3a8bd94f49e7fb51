#include "fractal/lyapunov.hpp"

#include "fractal/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fractal {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
// Subtracted from strict-positivity slacks so that a value of exactly zero
// reports a negative margin.
constexpr double strict = std::numeric_limits<double>::denorm_min();

double partial(const std::function<double(double)>& f, double x) {
    return numeric::central_difference(f, x);
}

}  // namespace

double LyapunovFunction::grad_y(double tau, double y, double z) const {
    if (d_y) return d_y(tau, y, z);
    return partial([&](double x) { return value(tau, x, z); }, y);
}

double LyapunovFunction::grad_z(double tau, double y, double z) const {
    if (d_z) return d_z(tau, y, z);
    return partial([&](double x) { return value(tau, y, x); }, z);
}

double LyapunovFunction::grad_tau(double tau, double y, double z) const {
    if (d_tau) return d_tau(tau, y, z);
    return partial([&](double x) { return value(x, y, z); }, tau);
}

double lyapunov_derivative(const LyapunovFunction& L, const FdeSystem& sys, double tau, double y,
                           double z) {
    const double dy = z;
    const double dz = sys.rhs_z(tau, y, z);
    return L.grad_y(tau, y, z) * dy + L.grad_z(tau, y, z) * dz + L.grad_tau(tau, y, z);
}

double lyapunov_derivative(const LyapunovFunction& L, const ScalarField& g, double tau, double h) {
    return L.grad_y(tau, h, 0.0) * g(h) + L.grad_tau(tau, h, 0.0);
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::lyapunov_stable: return "lyapunov-stable";
        case Stability::asymptotically_stable: return "asymptotically-stable";
        case Stability::exponentially_stable: return "exponentially-stable";
        case Stability::inconclusive: return "inconclusive";
        case Stability::unstable_evidence: return "unstable-evidence";
    }
    return "inconclusive";
}

bool implies(Stability s, Stability level) {
    const auto rank = [](Stability x) {
        switch (x) {
            case Stability::lyapunov_stable: return 1;
            case Stability::asymptotically_stable: return 2;
            case Stability::exponentially_stable: return 3;
            default: return 0;
        }
    };
    if (rank(level) == 0 || rank(s) == 0) return s == level;
    return rank(s) >= rank(level);
}

// ---------------------------------------------------------------------------
// Classification

namespace {

struct Run {
    Trajectory trajectory;
    double initial = 0.0;
    double max_deviation = 0.0;
    double terminal = 0.0;
    double midpoint = 0.0;
    bool blew_up = false;
};

struct RunSet {
    double delta;
    std::vector<Run> runs;
    double max_deviation = 0.0;
};

using Distance = std::function<double(const TrajectorySample&)>;

Run summarise(Trajectory traj, bool blew_up, double initial, const Distance& distance,
              double horizon) {
    Run run;
    run.initial = initial;
    run.blew_up = blew_up;
    for (const auto& s : traj.samples) run.max_deviation = std::max(run.max_deviation, distance(s));
    if (blew_up) run.max_deviation = inf;
    if (!traj.samples.empty()) {
        run.terminal = distance(traj.samples.back());
        run.midpoint = distance(traj.at_tau(0.5 * horizon));
    }
    run.trajectory = std::move(traj);
    return run;
}

std::optional<ExponentialFit> fit_decay(const Run& run, const Distance& distance, double horizon,
                                        double alpha) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& s : run.trajectory.samples) {
        if (s.tau < 0.5 * horizon) continue;
        const double d = distance(s);
        if (!(d > 1e-300) || !std::isfinite(d)) continue;
        const double x = s.tau;
        const double y = std::log(d);
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    if (n < 10) return std::nullopt;
    const double cov = sxy - sx * sy / n;
    const double var_x = sxx - sx * sx / n;
    const double var_y = syy - sy * sy / n;
    if (!(var_x > 0.0)) return std::nullopt;
    const double slope = cov / var_x;
    const double r2 = var_y > 0.0 ? (cov * cov) / (var_x * var_y) : 1.0;

    ExponentialFit fit{};
    fit.rate_tau = -slope;
    fit.lambda = fit.rate_tau / alpha;
    fit.r_squared = r2;
    double kappa_alpha = 0.0;
    for (const auto& s : run.trajectory.samples)
        kappa_alpha = std::max(kappa_alpha, distance(s) / (run.initial * std::exp(-fit.rate_tau * s.tau)));
    fit.kappa = std::pow(kappa_alpha, 1.0 / alpha);
    return fit;
}

using Simulate = std::function<Trajectory(double dy, double dz, double t_end)>;

StabilityReport classify(const Simulate& simulate, bool planar, const Distance& distance,
                         const StaircaseTable& table, const StabilityOptions& opt) {
    if (opt.eps_grid.empty() || opt.delta_grid.empty())
        throw ParameterError("eps and delta grids must be non-empty");
    if (!(opt.horizon > 0.0)) throw ParameterError("horizon must be positive");
    if (table.s_max() < opt.horizon)
        throw ParameterError("staircase reaches tau = " + std::to_string(table.s_max()) +
                             ", below the horizon " + std::to_string(opt.horizon));
    const double alpha = table.alpha;
    const double t_end = warp_time(table, opt.horizon);

    std::vector<double> deltas = opt.delta_grid;
    std::sort(deltas.begin(), deltas.end(), std::greater<>());

    std::vector<RunSet> sets;
    for (double delta : deltas) {
        if (!(delta > 0.0)) throw ParameterError("delta grid entries must be positive");
        RunSet rs{delta, {}, 0.0};
        const double radius = std::pow(delta, alpha);
        std::vector<std::pair<double, double>> offsets;
        for (double scale : {0.999, 0.5}) {
            if (planar) {
                for (int k = 0; k < 8; ++k) {
                    const double angle = k * std::numbers::pi / 4.0;
                    offsets.emplace_back(scale * radius * std::cos(angle), scale * radius * std::sin(angle));
                }
            } else {
                offsets.emplace_back(scale * radius, 0.0);
                offsets.emplace_back(-scale * radius, 0.0);
            }
        }
        for (auto [dy, dz] : offsets) {
            const double initial = std::hypot(dy, dz);
            Run run;
            try {
                run = summarise(simulate(dy, dz, t_end), false, initial, distance, opt.horizon);
            } catch (const BlowUpError& e) {
                run = summarise(e.partial(), true, initial, distance, opt.horizon);
            }
            rs.max_deviation = std::max(rs.max_deviation, run.max_deviation);
            rs.runs.push_back(std::move(run));
        }
        sets.push_back(std::move(rs));
    }

    StabilityReport report;
    report.alpha = alpha;
    report.note =
        "initial offsets < delta^alpha, containment < eps^alpha; the alpha powers rescale both "
        "thresholds monotonically. Verdicts are consistent with the simulated horizon, not proofs.";

    std::vector<const RunSet*> used;
    std::size_t contained = 0;
    for (double eps : opt.eps_grid) {
        const double bound = std::pow(eps, alpha);
        EpsDeltaWitness w{eps, std::nullopt, inf};
        for (const auto& rs : sets) {
            if (rs.max_deviation < bound) {
                w.delta = rs.delta;
                w.max_deviation = rs.max_deviation;
                used.push_back(&rs);
                ++contained;
                break;
            }
        }
        if (!w.delta) w.max_deviation = sets.back().max_deviation;
        report.witnesses.push_back(w);
    }

    if (contained == 0) {
        report.classification = Stability::unstable_evidence;
        return report;
    }
    if (contained < opt.eps_grid.size()) {
        report.classification = Stability::inconclusive;
        return report;
    }

    report.classification = Stability::lyapunov_stable;
    bool asymptotic = true;
    bool exponential = true;
    std::optional<ExponentialFit> weakest;
    for (const RunSet* rs : used) {
        for (const Run& run : rs->runs) {
            const double ratio = run.terminal / run.initial;
            report.worst_terminal_ratio = std::max(report.worst_terminal_ratio, ratio);
            if (!(ratio <= opt.decay_ratio && run.terminal <= run.midpoint)) asymptotic = false;
            const auto fit = fit_decay(run, distance, opt.horizon, alpha);
            if (!fit || fit->r_squared < opt.min_r_squared || !(fit->rate_tau > 0.0)) {
                exponential = false;
            } else if (!weakest || fit->rate_tau < weakest->rate_tau) {
                weakest = fit;
            }
        }
    }
    for (const RunSet* rs : used)
        for (const Run& run : rs->runs) report.trajectories.push_back(run.trajectory);

    if (asymptotic) {
        report.classification = Stability::asymptotically_stable;
        if (exponential && weakest) {
            report.classification = Stability::exponentially_stable;
            report.fit = weakest;
        }
    }
    return report;
}

}  // namespace

StabilityReport classify_stability(const ScalarField& g, const StaircaseTable& table,
                                   double equilibrium, const StabilityOptions& options) {
    if (!(std::abs(g(equilibrium)) <= options.equilibrium_tolerance))
        throw ParameterError("g(h_e) = " + std::to_string(g(equilibrium)) + " is not an equilibrium");
    const Simulate simulate = [&](double dy, double, double t_end) {
        return solve_first_order(g, table, equilibrium + dy, t_end, options.dtau);
    };
    const Distance distance = [equilibrium](const TrajectorySample& s) {
        return std::abs(s.y - equilibrium);
    };
    return classify(simulate, false, distance, table, options);
}

StabilityReport classify_stability(const FdeSystem& sys, const StaircaseTable& table,
                                   double equilibrium, const StabilityOptions& options) {
    const double residual = std::abs(sys.rhs_z(0.0, equilibrium, 0.0));
    if (!(residual <= options.equilibrium_tolerance))
        throw ParameterError("(y_e, 0) is not an equilibrium: residual " + std::to_string(residual));
    const Simulate simulate = [&](double dy, double dz, double t_end) {
        return solve_second_order(sys, table, equilibrium + dy, dz, t_end, options.dtau);
    };
    const Distance distance = [equilibrium](const TrajectorySample& s) {
        return std::hypot(s.y - equilibrium, s.z);
    };
    return classify(simulate, true, distance, table, options);
}

// ---------------------------------------------------------------------------
// Assumptions

namespace {

class Tracker {
public:
    explicit Tracker(std::string name) { result_.condition = std::move(name); result_.worst_margin = inf; }

    void offer(double margin, std::map<std::string, double> witness) {
        if (std::isnan(margin)) margin = -inf;
        if (margin < result_.worst_margin) {
            result_.worst_margin = margin;
            result_.witness = std::move(witness);
        }
    }

    ConditionResult finish(std::string note = {}) {
        result_.pass = result_.worst_margin >= 0.0;
        result_.note = std::move(note);
        return std::move(result_);
    }

private:
    ConditionResult result_;
};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
}

// Integral of f over [0, W] for each window W, with the last increment.
void trend_test(Tracker& t, const std::function<double(double)>& f, const AssumptionGrids& g,
                const char* label) {
    if (g.windows.empty()) return;
    std::vector<double> totals;
    for (double w : g.windows) totals.push_back(numeric::integrate(f, 0.0, w, static_cast<int>(4 * w)));
    const double last = totals.back();
    const double increment = totals.size() > 1 ? totals.back() - totals[totals.size() - 2] : 0.0;
    t.offer(g.trend_tolerance * std::max(1.0, std::abs(last)) - std::abs(increment),
            {{"window", g.windows.back()}, {std::string(label) + "_integral", last},
             {"last_increment", increment}});
}

}  // namespace

AssumptionGrids AssumptionGrids::defaults() {
    AssumptionGrids g;
    g.tau = linspace(0.0, 20.0, 81);
    g.y = linspace(-5.0, 5.0, 41);
    g.z = linspace(-5.0, 5.0, 41);
    return g;
}

const ConditionResult& AssumptionReport::get(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.condition == name) return c;
    throw ParameterError("no condition named " + name);
}

bool AssumptionReport::passes(std::initializer_list<const char*> names) const {
    for (const char* n : names)
        if (!get(n).pass) return false;
    return true;
}

bool AssumptionReport::all_pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

AssumptionReport check_assumptions(const FdeSystem& sys, double alpha, const AssumptionGrids& g) {
    validate_order(alpha);
    const FdeConstants& c = sys.constants;
    const auto p = [alpha](double x) { return std::pow(x, alpha); };
    AssumptionReport report;

    {
        Tracker t("C1");
        t.offer(p(c.u0) - 1.0, {{"u0^alpha", p(c.u0)}});
        t.offer(p(c.v0) - 1.0, {{"v0^alpha", p(c.v0)}});
        for (double tau : g.tau) {
            const double u = sys.u(tau);
            const double v = sys.v(tau);
            t.offer(u - p(c.u0), {{"tau", tau}, {"u", u}});
            t.offer(p(c.E) - u, {{"tau", tau}, {"u", u}});
            t.offer(v - p(c.v0), {{"tau", tau}, {"v", v}});
            t.offer(p(c.Q) - v, {{"tau", tau}, {"v", v}});
        }
        report.conditions.push_back(t.finish());
    }
    {
        Tracker t("C2");
        t.offer(std::min(c.lambda1, c.lambda2) - strict, {{"lambda1", c.lambda1}, {"lambda2", c.lambda2}});
        for (double y : g.y)
            for (double z : g.z) {
                const double f = sys.f(y, z);
                t.offer(f - p(c.eps0), {{"y", y}, {"z", z}, {"f", f}});
            }
        report.conditions.push_back(t.finish());
    }
    {
        Tracker t("C3");
        t.offer(0.0 - std::abs(sys.h(0.0)), {{"h(0)", sys.h(0.0)}});
        for (double y : g.y) {
            if (y != 0.0) {
                const double hs = sys.h(y) * (y > 0 ? 1.0 : -1.0);
                t.offer(hs - strict, {{"y", y}, {"h*sgn", hs}});
            }
            const double slope = sys.h_slope(y);
            t.offer(slope - c.lambda2, {{"y", y}, {"dh", slope}});
        }
        for (double side : {1.0, -1.0}) {
            double previous = 0.0;
            for (double w : g.windows) {
                const double H = sys.potential(side * w);
                t.offer(H - previous - strict, {{"y", side * w}, {"H", H}});
                previous = H;
            }
            if (!g.windows.empty())
                t.offer(previous - g.potential_cutoff, {{"y", side * g.windows.back()}, {"H", previous}});
        }
        report.conditions.push_back(t.finish("H -> infinity checked as a monotone trend past the cutoff"));
    }
    {
        Tracker t("C4");
        const auto zeta0 = [&](double tau) { return std::max(sys.v_slope(tau), 0.0); };
        trend_test(t, zeta0, g, "zeta0");
        if (!g.windows.empty()) {
            const double w = g.windows.back();
            const double dv = sys.v_slope(w);
            t.offer(g.trend_tolerance - std::abs(dv), {{"tau", w}, {"dv", dv}});
        }
        report.conditions.push_back(
            t.finish("zeta0 = max(D v, 0); finiteness of its integral is consistent with the window trend"));
    }
    {
        Tracker t("C5");
        const double delta = sys.delta_constant();
        const double sigma_p = p(c.sigma);
        t.offer(std::min(c.sigma, 1.0 - c.sigma), {{"sigma", c.sigma}});
        t.offer(std::min(delta, 1.0 - delta), {{"Delta", delta}});
        for (double tau : g.tau) {
            t.offer(sys.r1_at(tau), {{"tau", tau}, {"r1", sys.r1_at(tau)}});
            t.offer(sys.r2_at(tau), {{"tau", tau}, {"r2", sys.r2_at(tau)}});
        }
        trend_test(t, [&](double tau) { return sys.r1_at(tau); }, g, "r1");
        trend_test(t, [&](double tau) { return sys.r2_at(tau); }, g, "r2");
        std::vector<double> H(g.y.size());
        for (std::size_t i = 0; i < g.y.size(); ++i) H[i] = sys.potential(g.y[i]);
        for (double tau : g.tau) {
            const double r1 = sys.r1_at(tau);
            const double r2 = sys.r2_at(tau);
            for (std::size_t i = 0; i < g.y.size(); ++i)
                for (double z : g.z) {
                    const double q = sys.q ? sys.q(tau, g.y[i], z) : 0.0;
                    const double bound = r1 + r2 * std::pow(H[i] + z * z, sigma_p / 2.0) + p(delta) * std::abs(z);
                    t.offer(bound - std::abs(q), {{"tau", tau}, {"y", g.y[i]}, {"z", z}, {"q", q}});
                }
        }
        report.conditions.push_back(t.finish("Delta defaults to E3 = E (lambda1 + eps0) / 2"));
    }
    {
        Tracker t("C6");
        for (double y : g.y)
            for (double z : g.z) {
                const double slack = sys.f(y, z) - c.lambda1;
                t.offer(slack - p(c.eps0), {{"y", y}, {"z", z}, {"f-lambda1", slack}});
                t.offer(p(c.eps1) - slack, {{"y", y}, {"z", z}, {"f-lambda1", slack}});
            }
        report.conditions.push_back(t.finish());
    }
    {
        Tracker t("C7");
        for (double y : g.y) {
            const double gap = c.lambda2 - sys.h_slope(y);
            t.offer(gap, {{"y", y}, {"lambda2-dh", gap}});
            t.offer(p(c.eps2) - gap, {{"y", y}, {"lambda2-dh", gap}});
        }
        report.conditions.push_back(t.finish());
    }
    return report;
}

// ---------------------------------------------------------------------------
// Theorem checks

const ConditionResult& VerificationReport::get(const std::string& name) const {
    for (const auto& c : checks)
        if (c.condition == name) return c;
    throw ParameterError("no check named " + name);
}

LyapunovFunction theorem1_lyapunov(const FdeSystem& sys) {
    LyapunovFunction L;
    L.value = [&sys](double tau, double y, double z) { return sys.potential(y) + z * z / (2.0 * sys.v(tau)); };
    L.d_y = [&sys](double, double y, double) { return sys.h(y); };
    L.d_z = [&sys](double tau, double, double z) { return z / sys.v(tau); };
    L.d_tau = [&sys](double tau, double, double z) {
        const double v = sys.v(tau);
        return -z * z * sys.v_slope(tau) / (2.0 * v * v);
    };
    return L;
}

LyapunovFunction theorem2_lyapunov(const FdeSystem& sys) {
    LyapunovFunction L;
    L.value = [&sys](double tau, double y, double z) {
        return sys.v(tau) * sys.potential(y) + z * z / 2.0 + sys.constants.k;
    };
    L.d_y = [&sys](double tau, double y, double) { return sys.v(tau) * sys.h(y); };
    L.d_z = [](double, double, double z) { return z; };
    L.d_tau = [&sys](double tau, double y, double) { return sys.v_slope(tau) * sys.potential(y); };
    return L;
}

namespace {

std::vector<std::pair<double, double>> default_initial_states() {
    std::vector<std::pair<double, double>> out;
    for (double r : {0.5, 1.0, 1.5, 2.0})
        for (int k = 0; k < 8; ++k) {
            const double a = k * std::numbers::pi / 4.0 + 0.1;
            out.emplace_back(r * std::cos(a), r * std::sin(a));
        }
    return out;
}

void require(const AssumptionReport& a, std::initializer_list<const char*> names, const char* theorem) {
    for (const char* n : names) {
        const auto& c = a.get(n);
        if (!c.pass)
            throw PreconditionError(n, std::string(theorem) + " refused: assumption " + n +
                                           " fails (worst margin " + std::to_string(c.worst_margin) + ")");
    }
}

double horizon_end(const StaircaseTable& table, double horizon) {
    if (table.s_max() < horizon)
        throw ParameterError("staircase reaches tau = " + std::to_string(table.s_max()) +
                             ", below the horizon " + std::to_string(horizon));
    return warp_time(table, horizon);
}

// Tracks a margin with a rounding allowance scaled by `scale`.
class ToleranceTracker {
public:
    ToleranceTracker(std::string name, double rounding) : inner_(std::move(name)), rounding_(rounding) {}

    void offer(double margin, double scale, std::map<std::string, double> witness) {
        if (!(margin >= -rounding_ * std::max(1.0, std::abs(scale)))) ok_ = false;
        inner_.offer(margin, std::move(witness));
    }

    ConditionResult finish(std::string note) {
        ConditionResult r = inner_.finish(std::move(note));
        r.pass = ok_ && std::isfinite(r.worst_margin);
        return r;
    }

private:
    Tracker inner_;
    double rounding_;
    bool ok_ = true;
};

}  // namespace

VerificationReport verify_theorem1(const FdeSystem& sys, const StaircaseTable& table,
                                   const VerificationOptions& opt) {
    const double alpha = table.alpha;
    VerificationReport report;
    report.theorem = "theorem1";
    report.assumptions = check_assumptions(sys, alpha, opt.grids);
    require(report.assumptions, {"C1", "C2", "C3", "C4"}, "theorem1");

    FdeSystem unforced = sys;
    unforced.q = nullptr;
    const LyapunovFunction L2 = theorem1_lyapunov(unforced);
    const double t_end = horizon_end(table, opt.horizon);
    const auto states = opt.initial_states.empty() ? default_initial_states() : opt.initial_states;

    Tracker decrease("lyapunov_decrease");
    Tracker drift("discrete_drift");
    for (auto [y0, z0] : states) {
        const Trajectory traj = solve_second_order(unforced, table, y0, z0, t_end, opt.dtau);
        double previous = L2(traj.samples.front().tau, y0, z0);
        for (const auto& s : traj.samples) {
            const double d = lyapunov_derivative(L2, unforced, s.tau, s.y, s.z);
            decrease.offer(opt.derivative_tolerance - d, {{"tau", s.tau}, {"y", s.y}, {"z", s.z}, {"dL", d}});
            const double value = L2(s.tau, s.y, s.z);
            drift.offer(opt.drift_tolerance - (value - previous),
                        {{"tau", s.tau}, {"y0", y0}, {"z0", z0}, {"increase", value - previous}});
            previous = value;
        }
    }
    report.checks.push_back(decrease.finish("D L2 <= derivative_tolerance at every accepted step"));
    report.checks.push_back(drift.finish("L2(k+1) - L2(k) <= drift_tolerance"));

    const double lambda_bar = std::min(sys.constants.lambda2, 1.0 / (2.0 * std::pow(sys.constants.Q, alpha)));
    ToleranceTracker lower("quadratic_lower_bound", opt.rounding);
    const auto axis = linspace(-opt.grid_radius, opt.grid_radius, opt.grid_points);
    for (double tau : {0.0, 0.5 * opt.horizon, opt.horizon})
        for (double y : axis)
            for (double z : axis) {
                const double value = L2(tau, y, z);
                const double margin = value - lambda_bar * (y * y + z * z);
                lower.offer(margin, value, {{"tau", tau}, {"y", y}, {"z", z}, {"lambda_bar", lambda_bar}});
            }
    report.checks.push_back(lower.finish("L2 >= lambda_bar (y^2 + z^2), lambda_bar = min(lambda2, 1/(2 Q^alpha))"));

    Tracker origin("origin_value");
    for (double tau : {0.0, opt.horizon}) {
        const double v = L2(tau, 0.0, 0.0);
        origin.offer(0.0 - std::abs(v), {{"tau", tau}, {"L2", v}});
    }
    report.checks.push_back(origin.finish("L2(tau, 0, 0) = 0"));

    report.pass = std::all_of(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.pass; });
    report.note = "q set to 0; results are consistent with stability over the simulated horizon";
    return report;
}

VerificationReport verify_theorem2(const FdeSystem& sys, const StaircaseTable& table,
                                   const VerificationOptions& opt) {
    const double alpha = table.alpha;
    const FdeConstants& c = sys.constants;
    if (c.k < 1.0 / 32.0) throw ParameterError("k must be at least 1/32");

    VerificationReport report;
    report.theorem = "theorem2";
    report.assumptions = check_assumptions(sys, alpha, opt.grids);
    require(report.assumptions, {"C1", "C2", "C3", "C4", "C5", "C6", "C7"}, "theorem2");

    const double E1 = std::min(c.v0, 0.5);
    const double E2 = std::max(c.Q, 1.0);
    const double E3 = c.E * (c.lambda1 + c.eps0) / 2.0;
    const double E4 = 1.0 / E1;
    const double lower_k = std::pow(E1, 1.0 / alpha);
    const double upper_k = std::pow(E2, 1.0 / alpha);
    const double E3a = std::pow(E3, alpha);
    const double E4a = std::pow(E4, alpha);
    const double four_over_E1a = 4.0 / std::pow(E1, alpha);

    const LyapunovFunction L0 = theorem2_lyapunov(sys);
    const auto zeta0 = [&](double tau) { return std::max(sys.v_slope(tau), 0.0); };
    const auto zeta = [&](double tau) {
        return E4a * zeta0(tau) + four_over_E1a * (sys.r1_at(tau) + sys.r2_at(tau));
    };

    const double t_end = horizon_end(table, opt.horizon);
    const auto states = opt.initial_states.empty() ? default_initial_states() : opt.initial_states;

    ToleranceTracker lemma1_lower("lemma1_lower", opt.rounding);
    ToleranceTracker lemma1_upper("lemma1_upper", opt.rounding);
    ToleranceTracker lemma2("lemma2_bound", opt.rounding);
    ToleranceTracker weighted("weighted_decrease", opt.rounding);
    Tracker bounded("bounded");
    Tracker converged("convergence");
    double e5_estimate = inf;

    for (auto [y0, z0] : states) {
        Trajectory traj;
        bool blew_up = false;
        try {
            traj = solve_second_order(sys, table, y0, z0, t_end, opt.dtau);
        } catch (const BlowUpError& e) {
            traj = e.partial();
            blew_up = true;
        }

        double sup = 0.0;
        double Z = 0.0;  // integral of zeta from 0 to tau (trapezoid)
        double prev_tau = 0.0;
        double prev_zeta = zeta(0.0);
        for (const auto& s : traj.samples) {
            const double zt = zeta(s.tau);
            Z += 0.5 * (s.tau - prev_tau) * (zt + prev_zeta);
            prev_tau = s.tau;
            prev_zeta = zt;

            const double H = sys.potential(s.y);
            const double l0 = L0(s.tau, s.y, s.z);
            const double base = H + s.z * s.z + c.k;
            const std::map<std::string, double> where = {{"tau", s.tau}, {"y", s.y}, {"z", s.z}, {"y0", y0}, {"z0", z0}};
            lemma1_lower.offer(l0 - lower_k * base, l0, where);
            lemma1_upper.offer(upper_k * base - l0, l0, where);

            const double dl0 = lyapunov_derivative(L0, sys, s.tau, s.y, s.z);
            const double r1 = sys.r1_at(s.tau);
            const double r2 = sys.r2_at(s.tau);
            const double rhs = -E3a * s.z * s.z + (r1 + r2) * std::abs(s.z) + r2 * (H + s.z * s.z) +
                               E4a * zeta0(s.tau) * l0;
            lemma2.offer(rhs - dl0, std::max(std::abs(rhs), std::abs(dl0)), where);

            const double dl = std::exp(-Z) * (dl0 - zt * l0);
            weighted.offer(-dl, std::abs(dl0) + std::abs(zt * l0), where);
            if (std::abs(s.z) > 1e-6) e5_estimate = std::min(e5_estimate, -dl / (s.z * s.z));

            sup = std::max(sup, std::abs(s.y) + std::abs(s.z));
        }
        bounded.offer(blew_up ? -inf : blow_up_bound - sup, {{"y0", y0}, {"z0", z0}, {"sup_norm", sup}});
        const auto& last = traj.samples.back();
        const double terminal = std::max(std::abs(last.y), std::abs(last.z));
        converged.offer(blew_up ? -inf : opt.convergence_threshold - terminal,
                        {{"y0", y0}, {"z0", z0}, {"tau", last.tau}, {"y", last.y}, {"z", last.z}});
    }

    report.checks.push_back(lemma1_lower.finish("L0 >= E1^(1/alpha) (H + z^2 + k), E1 = min(v0, 1/2)"));
    report.checks.push_back(lemma1_upper.finish("L0 <= E2^(1/alpha) (H + z^2 + k), E2 = max(Q, 1)"));
    report.checks.push_back(lemma2.finish(
        "D L0 <= -E3^alpha z^2 + (r1 + r2)|z| + r2 (H + z^2) + E4^alpha zeta0 L0, E3 = E(lambda1 + eps0)/2, E4 = 1/E1"));
    ConditionResult w = weighted.finish("D [exp(-int zeta) L0] <= 0 along every run");
    w.witness["e5_alpha_estimate"] = e5_estimate;
    report.checks.push_back(std::move(w));
    report.checks.push_back(bounded.finish("no run exceeded the blow-up bound"));
    report.checks.push_back(converged.finish("max(|y|, |D y|) at the horizon below the threshold"));

    report.pass = std::all_of(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.pass; });
    report.note = "consistent with uniform boundedness and convergence over the simulated horizon; not a proof";
    return report;
}

}  // namespace fractal
