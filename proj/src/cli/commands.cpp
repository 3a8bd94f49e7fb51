#include "fractal/calculus.hpp"
#include "fractal/cli.hpp"
#include "fractal/expr.hpp"
#include "fractal/lyapunov.hpp"
#include "fractal/models.hpp"
#include "fractal/system_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

namespace fractal::cli {

namespace {

using ojson = nlohmann::ordered_json;
using TablePtr = std::shared_ptr<const StaircaseTable>;

struct Options {
    double mu = 0.2;
    std::string alpha = "auto";
    std::optional<int> depth;
    double t0 = 0.0;
    double origin = 0.0;
    std::optional<double> extent;
    std::optional<double> t_end;
    double dtau = 1e-3;
    std::string out;
    std::string format = "csv";
    std::string system;
    bool classical = false;
    std::vector<double> y0;
    std::vector<double> z0;
    int samples = 1001;
    std::string function = "S^2";
    std::string example;
    double horizon = 20.0;
    bool verify = false;
};

// Thrown by a command after it has rendered partial output.
struct PartialFailure {
    std::string message;
};

struct Context {
    const Options& opt;
    std::ostream& msg;
    std::string data;
};

CantorSpec make_spec(const Options& o, int default_depth) {
    CantorSpec spec;
    spec.mu = o.mu;
    spec.depth = o.depth.value_or(default_depth);
    spec.origin = o.origin;
    spec.extent = o.extent.value_or(o.origin + 1.0);
    spec.validate();
    return spec;
}

double resolve_alpha(Context& ctx, const CantorSpec& spec) {
    const std::string& a = ctx.opt.alpha;
    if (a == "auto") {
        if (spec.depth < 2) throw ParameterError("--alpha auto needs --depth >= 2");
        const auto grid = default_alpha_grid();
        const auto est = gamma_dimension(spec, spec.interval_length(spec.depth / 2),
                                         spec.interval_length(spec.depth), grid);
        ctx.msg << "alpha (estimated) = " << format_number(est.alpha) << '\n';
        return est.alpha;
    }
    if (a == "hausdorff") return hausdorff_dimension(spec.mu);
    double value = 0.0;
    std::istringstream in(a);
    if (!(in >> value) || !in.eof()) throw ParameterError("--alpha must be a number, auto or hausdorff");
    validate_order(value);
    return value;
}

TablePtr make_table(const CantorSpec& spec, double alpha, double t0) {
    return std::make_shared<const StaircaseTable>(build_staircase(spec, alpha, t0));
}

std::vector<double> uniform_grid(double a, double b, int n) {
    if (n < 2) throw ParameterError("--samples must be at least 2");
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[i] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
    return t;
}

void emit(Context& ctx, const Table& table) {
    ctx.data = ctx.opt.format == "json" ? table.json() : table.csv();
}

// --- set and staircase commands --------------------------------------------

void cmd_cantor(Context& ctx) {
    const CantorSpec spec = make_spec(ctx.opt, 6);
    Table table{{"level", "index", "a", "b"}, {}};
    const int first = spec.depth == 0 ? 0 : 1;
    for (int level = first; level <= spec.depth; ++level) {
        CantorSpec s = spec;
        s.depth = level;
        const IntervalSet set = generate(s);
        for (std::size_t i = 0; i < set.size(); ++i)
            table.add({double(level), double(i), set[i].a, set[i].b});
    }
    emit(ctx, table);
}

void cmd_staircase(Context& ctx) {
    const CantorSpec spec = make_spec(ctx.opt, 12);
    const TablePtr st = make_table(spec, resolve_alpha(ctx, spec), ctx.opt.t0);
    Table table{{"t", "s"}, {}};
    for (double t : uniform_grid(spec.origin, spec.extent, ctx.opt.samples))
        table.add({t, eval_staircase(*st, t)});
    emit(ctx, table);
}

void cmd_chi(Context& ctx) {
    const CantorSpec spec = make_spec(ctx.opt, 12);
    const double alpha = resolve_alpha(ctx, spec);
    const IntervalSet set = generate(spec);
    Table table{{"t", "chi"}, {}};
    for (double t : uniform_grid(spec.origin, spec.extent, ctx.opt.samples))
        table.add({t, characteristic(set, alpha, t)});
    emit(ctx, table);
}

void cmd_dimension(Context& ctx) {
    const CantorSpec spec = make_spec(ctx.opt, 16);
    if (spec.depth < 2) throw ParameterError("dimension needs --depth >= 2");
    const auto grid = default_alpha_grid();
    const auto est = gamma_dimension(spec, spec.interval_length(spec.depth / 2),
                                     spec.interval_length(spec.depth), grid);
    if (ctx.opt.format == "json") {
        ojson doc;
        doc["alpha"] = est.alpha;
        doc["coarse_depth"] = est.coarse_depth;
        doc["fine_depth"] = est.fine_depth;
        doc["hausdorff_dimension"] = hausdorff_dimension(spec.mu);
        doc["curve"] = ojson::array();
        for (const auto& p : est.curve) doc["curve"].push_back({{"alpha", p.alpha}, {"ratio", p.ratio}});
        ctx.data = doc.dump(2) + "\n";
    } else {
        Table table{{"alpha", "ratio"}, {}};
        for (const auto& p : est.curve) table.add({p.alpha, p.ratio});
        emit(ctx, table);
    }
    ctx.msg << "alpha = " << format_number(est.alpha) << " (depths " << est.coarse_depth << "/"
            << est.fine_depth << ")\n";
}

// --- calculus commands ------------------------------------------------------

GridFunction sampled_function(Context& ctx, TablePtr& st) {
    const CantorSpec spec = make_spec(ctx.opt, 12);
    st = make_table(spec, resolve_alpha(ctx, spec), ctx.opt.t0);
    const Expression f = Expression::parse(ctx.opt.function, {"t", "S"});
    const StaircaseTable& table = *st;
    return GridFunction::sample(st, [&](double t) { return f({t, eval_staircase(table, t)}); });
}

void cmd_deriv(Context& ctx) {
    TablePtr st;
    const GridFunction f = sampled_function(ctx, st);
    const GridFunction d = fractal_derivative(f);
    Table table{{"t", "value"}, {}};
    for (std::size_t i = 0; i < d.size(); ++i) table.add({d.t()[i], d.values()[i]});
    emit(ctx, table);
}

void cmd_integrate(Context& ctx) {
    TablePtr st;
    const GridFunction f = sampled_function(ctx, st);
    const std::vector<double> running = cumulative_integral(f);
    Table table{{"t", "value"}, {}};
    for (std::size_t i = 0; i < f.size(); ++i) table.add({f.t()[i], running[i]});
    emit(ctx, table);
    ctx.msg << "integral = " << format_number(running.back()) << '\n';
}

// --- trajectories -------------------------------------------------------------

struct Curve {
    std::string label;
    std::function<Trajectory()> solve;
    std::function<double(const TrajectorySample&)> lyapunov;  // optional column
};

void run_curves(Context& ctx, const std::vector<Curve>& curves, bool with_lyapunov) {
    Table table{{"curve", "t", "tau", "y", "z"}, {}};
    if (with_lyapunov) table.columns.push_back("L");
    auto append = [&](const Curve& c, const Trajectory& traj) {
        for (const auto& s : traj.samples) {
            std::vector<Table::Cell> row = {c.label, s.t, s.tau, s.y, s.z};
            if (with_lyapunov) row.emplace_back(c.lyapunov ? c.lyapunov(s) : std::nan(""));
            table.add(std::move(row));
        }
    };
    for (const auto& c : curves) {
        try {
            append(c, c.solve());
        } catch (const BlowUpError& e) {
            append(c, e.partial());
            emit(ctx, table);
            throw PartialFailure{std::string("curve '") + c.label + "': " + e.what()};
        }
    }
    emit(ctx, table);
}

std::string label(const char* name, double value) { return std::string(name) + "=" + format_number(value); }

double end_time(const Options& o, const StaircaseTable& st) { return o.t_end.value_or(st.t_end()); }

// Classical runs start at t = 0; move them onto the anchor t0.
Trajectory shifted(Trajectory traj, double t0) {
    for (auto& s : traj.samples) s.t += t0;
    return traj;
}

void cmd_solve(Context& ctx) {
    const Options& o = ctx.opt;
    if (o.system.empty()) throw ParameterError("solve needs --system");
    const SystemDefinition def = load_system(o.system);
    const CantorSpec spec = make_spec(o, 12);
    const TablePtr st = make_table(spec, resolve_alpha(ctx, spec), o.t0);
    const double t_end = end_time(o, *st);

    std::vector<Curve> curves;
    if (def.order == 1) {
        const ScalarField g = def.field();
        const std::vector<double> starts = o.y0.empty() ? std::vector<double>{def.y0} : o.y0;
        for (double h0 : starts) {
            curves.push_back({label("y0", h0), [=] { return solve_first_order(g, *st, h0, t_end, o.dtau); }, {}});
            if (o.classical)
                curves.push_back({"classical " + label("y0", h0),
                                  [=] { return shifted(solve_first_order_classical(g, h0, t_end - o.t0, o.dtau), o.t0); },
                                  {}});
        }
    } else {
        const FdeSystem sys = def.system;
        const double y0 = o.y0.empty() ? def.y0 : o.y0.front();
        const std::vector<double> zs = o.z0.empty() ? std::vector<double>{def.z0} : o.z0;
        for (double z0 : zs) {
            curves.push_back({label("z0", z0), [=] { return solve_second_order(sys, *st, y0, z0, t_end, o.dtau); }, {}});
            if (o.classical)
                curves.push_back({"classical " + label("z0", z0),
                                  [=] { return shifted(solve_second_order_classical(sys, y0, z0, t_end - o.t0, o.dtau), o.t0); },
                                  {}});
        }
    }
    run_curves(ctx, curves, false);
}

void cmd_demo(Context& ctx) {
    const Options& o = ctx.opt;
    const CantorSpec spec = make_spec(o, 12);
    const TablePtr st = make_table(spec, resolve_alpha(ctx, spec), o.t0);
    const double t_end = end_time(o, *st);
    std::vector<Curve> curves;

    if (o.example == "example1") {
        const ScalarField g = models::example1_field();
        const LyapunovFunction L = models::example1_lyapunov();
        const auto l = [L](const TrajectorySample& s) { return L(s.tau, s.y, 0.0); };
        const std::vector<double> starts = o.z0.empty() ? std::vector<double>{1.0, 0.5} : o.z0;
        for (double c : starts) {
            curves.push_back({label("z0", c), [=] { return solve_first_order(g, *st, c, t_end, o.dtau); }, l});
            if (o.classical)
                curves.push_back({"classical " + label("z0", c),
                                  [=] { return shifted(solve_first_order_classical(g, c, t_end - o.t0, o.dtau), o.t0); },
                                  l});
        }
    } else if (o.example == "example2" || o.example == "example3") {
        const bool two = o.example == "example2";
        const FdeSystem sys = two ? models::example2_system() : models::example3_system();
        const LyapunovFunction L = two ? models::example2_lyapunov() : models::example3_lyapunov();
        const auto l = [L](const TrajectorySample& s) { return L(s.tau, s.y, s.z); };
        const double y0 = o.y0.empty() ? 1.0 : o.y0.front();
        const std::vector<double> zs = o.z0.empty() ? std::vector<double>{0.0} : o.z0;
        for (double z0 : zs) {
            curves.push_back({label("z0", z0), [=] { return solve_second_order(sys, *st, y0, z0, t_end, o.dtau); }, l});
            if (o.classical)
                curves.push_back({"classical " + label("z0", z0),
                                  [=] { return shifted(solve_second_order_classical(sys, y0, z0, t_end - o.t0, o.dtau), o.t0); },
                                  l});
        }
    } else {
        throw ParameterError("demo expects example1, example2 or example3");
    }
    run_curves(ctx, curves, true);
}

// --- stability ----------------------------------------------------------------

ojson condition_json(const ConditionResult& c) {
    ojson j;
    j["condition"] = c.condition;
    j["pass"] = c.pass;
    j["worst_margin"] = c.worst_margin;
    ojson w = ojson::object();
    for (const auto& [k, v] : c.witness) w[k] = v;
    j["witness"] = w;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

ojson verification_json(const std::function<VerificationReport()>& verify, const char* theorem) {
    ojson j;
    j["theorem"] = theorem;
    try {
        const VerificationReport r = verify();
        j["pass"] = r.pass;
        j["checks"] = ojson::array();
        for (const auto& c : r.checks) j["checks"].push_back(condition_json(c));
        j["note"] = r.note;
    } catch (const PreconditionError& e) {
        j["pass"] = false;
        j["refused"] = e.condition();
        j["note"] = e.what();
    }
    return j;
}

// Base interval long enough for S to cover the horizon.
CantorSpec stability_spec(Context& ctx, double& alpha) {
    const Options& o = ctx.opt;
    CantorSpec spec = make_spec(o, 12);
    alpha = resolve_alpha(ctx, spec);
    if (o.extent) return spec;
    const StaircaseTable unit = build_staircase(spec, alpha, o.t0);
    const double reach = unit.s_max();
    if (reach < o.horizon && reach > 0.0) {
        const double scale = std::pow(1.01 * o.horizon / reach, 1.0 / alpha);
        spec.extent = spec.origin + scale * (spec.extent - spec.origin);
        spec.validate();
    }
    return spec;
}

void cmd_stability(Context& ctx) {
    const Options& o = ctx.opt;
    if (o.system.empty()) throw ParameterError("stability needs --system");
    const SystemDefinition def = load_system(o.system);
    double alpha = 1.0;
    const CantorSpec spec = stability_spec(ctx, alpha);
    const StaircaseTable table = build_staircase(spec, alpha, o.t0);

    StabilityOptions so;
    so.horizon = o.horizon;
    so.dtau = o.dtau;
    // With --verify a forced second-order system (no equilibrium) still gets
    // its assumption and theorem reports.
    std::optional<StabilityReport> classified;
    std::string unclassified;
    try {
        classified = def.order == 1 ? classify_stability(def.field(), table, def.equilibrium, so)
                                    : classify_stability(def.system, table, def.equilibrium, so);
    } catch (const ParameterError& e) {
        if (!(o.verify && def.order == 2)) throw;
        unclassified = e.what();
    }
    const StabilityReport report = classified.value_or(StabilityReport{});

    if (o.format == "csv") {
        if (!classified) throw ParameterError(unclassified);
        Table t{{"eps", "delta", "max_deviation"}, {}};
        for (const auto& w : report.witnesses)
            t.add({w.eps, w.delta ? *w.delta : std::nan(""), w.max_deviation});
        emit(ctx, t);
        ctx.msg << "classification = " << to_string(report.classification) << '\n';
        return;
    }

    ojson doc;
    doc["order"] = def.order;
    doc["alpha"] = alpha;
    doc["depth"] = spec.depth;
    doc["extent"] = spec.extent;
    doc["equilibrium"] = def.equilibrium;
    doc["horizon"] = o.horizon;
    if (classified) doc["classification"] = to_string(report.classification);
    else doc["classification"] = nullptr, doc["classification_error"] = unclassified;
    doc["witnesses"] = ojson::array();
    for (const auto& w : report.witnesses) {
        ojson e;
        e["eps"] = w.eps;
        e["delta"] = w.delta ? ojson(*w.delta) : ojson(nullptr);
        e["max_deviation"] = w.max_deviation;
        doc["witnesses"].push_back(e);
    }
    if (report.fit) {
        doc["fit"] = {{"rate_tau", report.fit->rate_tau},
                      {"lambda", report.fit->lambda},
                      {"kappa", report.fit->kappa},
                      {"r_squared", report.fit->r_squared}};
    } else {
        doc["fit"] = nullptr;
    }
    doc["worst_terminal_ratio"] = report.worst_terminal_ratio;
    doc["trajectories"] = report.trajectories.size();
    doc["note"] = report.note;

    if (def.order == 2) {
        const AssumptionReport a = check_assumptions(def.system, alpha);
        doc["assumptions"] = ojson::array();
        for (const auto& c : a.conditions) doc["assumptions"].push_back(condition_json(c));
        if (o.verify) {
            VerificationOptions vo;
            vo.horizon = o.horizon;
            vo.dtau = o.dtau;
            doc["verification"] = ojson::array();
            doc["verification"].push_back(
                verification_json([&] { return verify_theorem1(def.system, table, vo); }, "theorem1"));
            doc["verification"].push_back(
                verification_json([&] { return verify_theorem2(def.system, table, vo); }, "theorem2"));
        }
    }
    ctx.data = doc.dump(2) + "\n";
}

// --- driver -------------------------------------------------------------------

void add_set_options(CLI::App* sub, Options& o) {
    sub->add_option("--mu", o.mu, "removed middle fraction, 0 < mu < 1")->capture_default_str();
    sub->add_option("--depth", o.depth, "generation depth");
    sub->add_option("--origin", o.origin, "left end of the base interval")->capture_default_str();
    sub->add_option("--extent", o.extent, "right end of the base interval (default origin + 1)");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void add_alpha_options(CLI::App* sub, Options& o) {
    sub->add_option("--alpha", o.alpha, "order: a number in (0, 1], auto (estimate) or hausdorff")
        ->capture_default_str();
    sub->add_option("--t0", o.t0, "staircase anchor")->capture_default_str();
}

void add_solver_options(CLI::App* sub, Options& o) {
    sub->add_option("--t-end", o.t_end, "final time (default: end of the set)");
    sub->add_option("--dtau", o.dtau, "step in staircase time")->capture_default_str();
    sub->add_flag("--classical", o.classical, "add the alpha = 1 reference curve");
    sub->add_option("--y0", o.y0, "initial value of y (repeatable for first-order systems)");
    sub->add_option("--z0", o.z0, "initial value of z (repeatable)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Fractal calculus on middle-mu Cantor sets"};
    app.require_subcommand(1);

    auto* cantor = app.add_subcommand("cantor", "interval endpoints per level");
    add_set_options(cantor, o);

    auto* staircase = app.add_subcommand("staircase", "staircase function S(t)");
    add_set_options(staircase, o);
    add_alpha_options(staircase, o);
    staircase->add_option("--samples", o.samples, "number of t samples")->capture_default_str();

    auto* dimension = app.add_subcommand("dimension", "gamma-dimension from the mass ratio");
    add_set_options(dimension, o);

    auto* chi = app.add_subcommand("chi", "characteristic function");
    add_set_options(chi, o);
    add_alpha_options(chi, o);
    chi->add_option("--samples", o.samples, "number of t samples")->capture_default_str();

    auto* deriv = app.add_subcommand("deriv", "fractal derivative of f(t, S) at every breakpoint");
    add_set_options(deriv, o);
    add_alpha_options(deriv, o);
    deriv->add_option("--function", o.function, "expression in t and S")->capture_default_str();

    auto* integrate = app.add_subcommand("integrate", "running fractal integral of f(t, S)");
    add_set_options(integrate, o);
    add_alpha_options(integrate, o);
    integrate->add_option("--function", o.function, "expression in t and S")->capture_default_str();

    auto* solve = app.add_subcommand("solve", "integrate a JSON system");
    add_set_options(solve, o);
    add_alpha_options(solve, o);
    add_solver_options(solve, o);
    solve->add_option("--system", o.system, "inline JSON or file path")->required();

    auto* stability = app.add_subcommand("stability", "classify the equilibrium of a JSON system");
    add_set_options(stability, o);
    add_alpha_options(stability, o);
    stability->add_option("--dtau", o.dtau, "step in staircase time")->capture_default_str();
    stability->add_option("--horizon", o.horizon, "horizon in staircase time")->capture_default_str();
    stability->add_option("--system", o.system, "inline JSON or file path")->required();
    stability->add_flag("--verify", o.verify, "also run the theorem checks (second order)");

    auto* demo = app.add_subcommand("demo", "built-in examples: example1, example2, example3");
    add_set_options(demo, o);
    add_alpha_options(demo, o);
    add_solver_options(demo, o);
    demo->add_option("example", o.example, "example1, example2 or example3")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }
    if (stability->parsed() && !stability->count("--format")) o.format = "json";

    std::ostringstream sink;
    std::ostream& msg = o.out.empty() ? err : out;
    Context ctx{o, msg, {}};
    int status = exit_ok;
    try {
        if (cantor->parsed()) cmd_cantor(ctx);
        else if (staircase->parsed()) cmd_staircase(ctx);
        else if (dimension->parsed()) cmd_dimension(ctx);
        else if (chi->parsed()) cmd_chi(ctx);
        else if (deriv->parsed()) cmd_deriv(ctx);
        else if (integrate->parsed()) cmd_integrate(ctx);
        else if (solve->parsed()) cmd_solve(ctx);
        else if (stability->parsed()) cmd_stability(ctx);
        else if (demo->parsed()) cmd_demo(ctx);
    } catch (const PartialFailure& e) {
        err << "error: " << e.message << " (partial output written)\n";
        status = exit_numerical;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    }

    if (o.out.empty()) {
        out << ctx.data;
    } else {
        std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot write '" << o.out << "'\n";
            return exit_usage;
        }
        file << ctx.data;
    }
    return status;
}

}  // namespace fractal::cli
