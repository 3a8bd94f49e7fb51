// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include "oracles.hpp"

#include "fractal/calculus.hpp"
#include "fractal/lyapunov.hpp"
#include "fractal/models.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace fractal;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Runs the CLI binary, returning exit status and captured stdout+stderr.
std::pair<int, std::string> shell(const std::string& args) {
    const std::string cmd = std::string(FRACTAL_CALC_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

StaircaseTable reaching(double tau_max, double alpha, int depth = 12) {
    const double extent = std::pow(1.02 * tau_max / oracle::gamma(alpha + 1.0), 1.0 / alpha);
    return build_staircase({0.2, depth, 0.0, extent}, alpha, 0.0);
}

Outcome dimension_reproduction() {
    const auto start = std::chrono::steady_clock::now();
    const auto [code, out] = shell("dimension --mu 0.2 --depth 16 --out acceptance_dimension.csv");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::remove("acceptance_dimension.csv");
    const auto pos = out.find("alpha = ");
    if (code != 0 || pos == std::string::npos) return {false, "command failed: " + out};
    const double a = std::stod(out.substr(pos + 8));
    const bool ok = std::abs(a - 0.75) <= 0.02 && seconds <= 5.0;
    return {ok, fmt("alpha=%.6f", a) + fmt(" runtime=%.3fs", seconds)};
}

Outcome mass_fixed_point() {
    double worst = 0.0, spread = 0.0;
    for (double mu : {0.2, 1.0 / 3.0, 0.5}) {
        const double a = hausdorff_dimension(mu);
        const double want = oracle::gamma(a + 1.0);
        double lo = INFINITY, hi = -INFINITY;
        for (int depth : {8, 12, 16}) {
            const double m = mass_in_window(generate({mu, depth}), a, 0.0, 1.0);
            worst = std::max(worst, std::abs(m - want) / want);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        spread = std::max(spread, (hi - lo) / want);
    }
    return {worst <= 1e-6 && spread <= 1e-6, fmt("max rel err=%.3e", worst) + fmt(" depth spread=%.3e", spread)};
}

Outcome example1_exactness() {
    const StaircaseTable st = build_staircase({0.2, 12}, hausdorff_dimension(0.2), 0.0);
    double worst = 0.0;
    for (double c : {1.0, 0.5}) {
        const Trajectory tr = solve_first_order(models::example1_field(), st, c, 1.0, 1e-3);
        const auto& last = tr.samples.back();
        const double exact = c * std::exp(-eval_staircase(st, last.t));
        worst = std::max(worst, std::abs(last.y - exact) / exact);
    }
    return {worst <= 1e-6, fmt("terminal rel err=%.3e", worst)};
}

Outcome example1_lyapunov_sign() {
    const auto L = models::example1_lyapunov();
    const auto g = models::example1_field();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> state(-10.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double z = state(rng);
        worst = std::max(worst, std::abs(lyapunov_derivative(L, g, 0.0, z) + 2.0 * z * z));
    }
    const StabilityReport r = classify_stability(g, reaching(20, hausdorff_dimension(0.2)), 0.0);
    const bool asym = implies(r.classification, Stability::asymptotically_stable);
    const double rate = r.fit ? r.fit->rate_tau : NAN;
    const bool ok = worst <= 1e-9 && asym && std::abs(rate - 1.0) <= 1e-2;
    return {ok, fmt("max |L*+2z^2|=%.3e", worst) + " class=" + to_string(r.classification) +
                    fmt(" tau-rate=%.6f", rate)};
}

Outcome example3_energy() {
    const double a = hausdorff_dimension(0.2);
    const StaircaseTable st = reaching(100, a);
    const FdeSystem sys = models::example3_system();
    const LyapunovFunction L = models::example3_lyapunov();
    const Trajectory tr = solve_second_order(sys, st, 1.0, 0.0, warp_time(st, 100.0), 1e-3);
    const double l0 = L(0.0, 1.0, 0.0);
    double per_tau = 0.0, total = 0.0;
    for (const auto& s : tr.samples) {
        const double drift = std::abs(L(s.tau, s.y, s.z) - l0) / l0;
        total = std::max(total, drift);
        if (s.tau >= 1.0) per_tau = std::max(per_tau, drift / s.tau);
    }
    const StabilityReport r = classify_stability(sys, reaching(20, a), 0.0);
    const bool ok = per_tau <= 1e-6 && tr.samples.back().tau >= 100.0 - 1e-9 &&
                    r.classification == Stability::lyapunov_stable;
    return {ok, fmt("drift/tau=%.3e", per_tau) + fmt(" max drift=%.3e", total) + " class=" +
                    to_string(r.classification)};
}

Outcome theorem1_suite() {
    const FdeSystem sys = models::theorem1_toy();
    const double a = hausdorff_dimension(0.2);
    const AssumptionReport pre = check_assumptions(sys, a);
    VerificationOptions opt;
    opt.grid_points = 50;
    const VerificationReport r = verify_theorem1(sys, reaching(20, a), opt);
    const auto& dec = r.get("lyapunov_decrease");
    const auto& quad = r.get("quadratic_lower_bound");
    const double max_d = dec.witness.count("dL") ? dec.witness.at("dL") : NAN;
    const bool ok = pre.passes({"C1", "C2", "C3", "C4"}) && dec.pass && max_d <= 1e-10 && quad.worst_margin >= 0.0;
    return {ok, fmt("max D L2=%.3e", max_d) + fmt(" quad margin=%.3e", quad.worst_margin)};
}

Outcome theorem2_suite() {
    const double a = hausdorff_dimension(0.2);
    const VerificationReport r = verify_theorem2(models::theorem2_toy(), reaching(20, a));
    double worst = INFINITY;
    for (const char* name : {"lemma1_lower", "lemma1_upper", "lemma2_bound"})
        worst = std::min(worst, r.get(name).worst_margin);
    const auto& conv = r.get("convergence");
    const bool ok = worst >= 0.0 && r.get("bounded").pass && conv.pass && conv.worst_margin >= 0.0;
    return {ok, fmt("lemma margin=%.3e", worst) + fmt(" convergence slack=%.3e", conv.worst_margin)};
}

Outcome calculus_ftc() {
    const double a = hausdorff_dimension(0.2);
    std::string detail;
    bool ok = true;
    for (int which = 0; which < 2; ++which) {
        const std::function<double(double)> phi = which == 0 ? std::function<double(double)>([](double s) { return s * s; })
                                                             : std::function<double(double)>([](double s) { return std::exp(s); });
        double prev = INFINITY, err = 0.0;
        for (int depth : {8, 12, 16}) {
            const auto st = std::make_shared<const StaircaseTable>(build_staircase({0.2, depth}, a, 0.0));
            const GridFunction g = GridFunction::of_staircase(st, phi);
            const double got = fractal_integral(fractal_derivative(g), 0.0, 1.0);
            const double want = phi(eval_staircase(*st, 1.0)) - phi(0.0);
            err = std::abs(got - want) / std::abs(want);
            if (!(err < prev)) ok = false;
            prev = err;
        }
        if (err > 1e-2) ok = false;
        detail += (which == 0 ? "S^2 err=" : " exp(S) err=") + fmt("%.3e", err);
    }
    return {ok, detail};
}

Outcome measure_limit() {
    const double m = covering_measure(generate({0.2, 20}));
    const double want = std::pow(0.8L, 20);
    const double rel = std::abs(m - want) / want;
    return {rel <= 1e-12, fmt("rel err=%.3e", rel)};
}

Outcome determinism() {
    const char* configs[] = {
        "cantor --mu 0.2 --depth 8",
        "dimension --mu 0.2",
        "staircase --mu 0.2 --alpha 0.7565",
        "chi --mu 0.2 --alpha 0.7565",
        "deriv --function 'exp(S)'",
        "integrate --function 'S^2'",
        "demo example1 --z0 1 --z0 0.5 --classical",
        "demo example3 --extent 20",
        "solve --system '{\"order\": 2, \"h\": \"y\", \"f\": \"1\", \"y0\": 1}'",
        "stability --system '{\"order\": 1, \"g\": \"-y\"}'",
    };
    int same = 0, total = 0;
    for (const char* c : configs) {
        std::string first;
        for (int run = 0; run < 2; ++run) {
            const auto [code, out] = shell(std::string(c) + " --out acceptance_det.out");
            if (code != 0) return {false, std::string("command failed: ") + c};
            const std::string bytes = slurp("acceptance_det.out");
            if (run == 0) first = bytes;
            else same += bytes == first && !bytes.empty();
        }
        ++total;
    }
    std::remove("acceptance_det.out");
    return {same == total, std::to_string(same) + "/" + std::to_string(total) + " configs byte-identical"};
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"dimension reproduction", dimension_reproduction},
        {"mass fixed point", mass_fixed_point},
        {"example 1 exactness", example1_exactness},
        {"lyapunov sign (example 1)", example1_lyapunov_sign},
        {"energy conservation (example 3)", example3_energy},
        {"theorem 1 property suite", theorem1_suite},
        {"theorem 2 property suite", theorem2_suite},
        {"calculus FTC", calculus_ftc},
        {"measure limit", measure_limit},
        {"determinism", determinism},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("criterion %2d %-34s %s  %s\n", index++, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    }
    return failures;
}
