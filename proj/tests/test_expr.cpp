#include "gen.hpp"

#include "fractal/expr.hpp"
#include "fractal/system_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

using namespace fractal;

namespace {

double ev(const char* text) { return Expression::parse(text, {})(std::span<const double>{}); }

// Random expression together with a direct evaluator for it.
struct Sample {
    std::string text;
    std::function<double(double, double)> value;
};

Sample random_expr(gen::Gen& g, int depth) {
    if (depth == 0 || g.integer(0, 3) == 0) {
        switch (g.integer(0, 2)) {
            case 0: {
                const double c = std::round(g.uniform(0.0, 9.0) * 100.0) / 100.0;
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.2f", c);
                return {buf, [c](double, double) { return c; }};
            }
            case 1: return {"y", [](double y, double) { return y; }};
            default: return {"z", [](double, double z) { return z; }};
        }
    }
    const Sample a = random_expr(g, depth - 1);
    const Sample b = random_expr(g, depth - 1);
    switch (g.integer(0, 6)) {
        case 0: return {"(" + a.text + " + " + b.text + ")", [=](double y, double z) { return a.value(y, z) + b.value(y, z); }};
        case 1: return {"(" + a.text + " - " + b.text + ")", [=](double y, double z) { return a.value(y, z) - b.value(y, z); }};
        case 2: return {"(" + a.text + " * " + b.text + ")", [=](double y, double z) { return a.value(y, z) * b.value(y, z); }};
        case 3: return {"sin(" + a.text + ")", [=](double y, double z) { return std::sin(a.value(y, z)); }};
        case 4: return {"abs(" + a.text + ")", [=](double y, double z) { return std::abs(a.value(y, z)); }};
        case 5: return {"-" + a.text, [=](double y, double z) { return -a.value(y, z); }};
        default: return {"exp(-abs(" + a.text + "))", [=](double y, double z) { return std::exp(-std::abs(a.value(y, z))); }};
    }
}

}  // namespace

TEST_CASE("precedence and associativity") {
    CHECK(ev("1 + 2 * 3") == 7.0);
    CHECK(ev("(1 + 2) * 3") == 9.0);
    CHECK(ev("-2^2") == -4.0);
    CHECK(ev("2^3^2") == 512.0);
    CHECK(ev("2^-1") == 0.5);
    CHECK(ev("8 / 4 / 2") == 1.0);
    CHECK(ev("1 - 2 - 3") == -4.0);
    CHECK(ev("--3") == 3.0);
    CHECK(ev("1e-3 * 1000") == doctest::Approx(1.0));
    CHECK(ev(".5") == 0.5);
}

TEST_CASE("functions and constants") {
    CHECK(ev("pow(2, 10)") == 1024.0);
    CHECK(ev("exp(0)") == 1.0);
    CHECK(ev("log(e)") == doctest::Approx(1.0));
    CHECK(ev("sqrt(16)") == 4.0);
    CHECK(ev("sin(pi / 2)") == doctest::Approx(1.0));
    CHECK(ev("cos(0)") == 1.0);
    CHECK(ev("abs(-2.5)") == 2.5);
    CHECK(ev("sgn(-3)") == -1.0);
    CHECK(ev("sgn(0)") == 0.0);
    CHECK(ev("sgn(7)") == 1.0);
}

TEST_CASE("variables and the tau alias") {
    const Expression e = Expression::parse("\xCF\x84 * y + z", {"tau", "y", "z"});
    CHECK(e({2.0, 3.0, 1.0}) == 7.0);
    CHECK(e.uses("tau"));
    CHECK(e.uses("z"));
    const Expression f = Expression::parse("y^2", {"tau", "y", "z"});
    CHECK_FALSE(f.uses("tau"));
    CHECK(f.uses("y"));
    CHECK_THROWS_AS(f({1.0}), ParameterError);
    CHECK(Expression::parse("tau", {"tau"})({4.0}) == 4.0);
}

TEST_CASE("syntax errors carry a position") {
    for (const char* bad : {"1 +", "foo(1)", "x", "(1", "1 2", "pow(1)", "", "2 $ 3", "sin(1, 2)"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Expression::parse(bad, {"y"}), ParseError);
    }
    try {
        Expression::parse("1 + * 2", {});
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("random expressions evaluate like their direct form") {
    gen::for_all(300, 71, [](gen::Gen& g) {
        const Sample s = random_expr(g, 4);
        CAPTURE(s.text);
        const Expression e = Expression::parse(s.text, {"y", "z"});
        for (int k = 0; k < 5; ++k) {
            const double y = g.uniform(-3, 3), z = g.uniform(-3, 3);
            const double want = s.value(y, z);
            CHECK(std::abs(e({y, z}) - want) <= 1e-12 * (1 + std::abs(want)));
        }
    });
}

TEST_CASE("first-order system JSON") {
    const SystemDefinition d = parse_system(R"({"order": 1, "g": "-h", "y0": 2, "equilibrium": 0})");
    CHECK(d.order == 1);
    CHECK(d.y0 == 2.0);
    CHECK(d.field()(3.0) == -3.0);
    CHECK(parse_system(R"({"order": 1, "g": "-y^2"})").field()(2.0) == -4.0);
}

TEST_CASE("second-order system JSON") {
    const SystemDefinition d = parse_system(R"j({
        "order": 2, "u": "1 + tau", "v": 2, "f": "y*z", "h": "y^3", "q": "exp(-tau)*z",
        "H": "y^4/4", "dh": "3*y^2", "r1": "exp(-tau)", "y0": 0.5, "z0": -1,
        "constants": {"E": 2, "Q": 3, "lambda1": 0.25, "Delta": 0.4, "k": 0.05}})j");
    const FdeSystem& s = d.system;
    CHECK(s.u(2.0) == 3.0);
    CHECK(s.v(7.0) == 2.0);
    CHECK(s.f(2.0, 3.0) == 6.0);
    CHECK(s.h(2.0) == 8.0);
    CHECK(s.q(0.0, 1.0, 2.0) == 2.0);
    CHECK(s.potential(2.0) == 4.0);
    CHECK(s.h_slope(2.0) == 12.0);
    CHECK(s.r1_at(0.0) == 1.0);
    CHECK(s.r2_at(0.0) == 0.0);
    CHECK(s.constants.E == 2.0);
    CHECK(s.constants.lambda1 == 0.25);
    CHECK(s.delta_constant() == 0.4);
    CHECK(s.constants.k == 0.05);
    CHECK(d.y0 == 0.5);
    CHECK(d.z0 == -1.0);

    const SystemDefinition m = parse_system(R"({"h": "y"})");
    CHECK(m.order == 2);
    CHECK(m.system.u(5.0) == 1.0);
    CHECK(m.system.f(1.0, 1.0) == 0.0);
    CHECK_FALSE(m.system.q);
}

TEST_CASE("malformed system JSON") {
    for (const char* bad : {"{", "[]", R"({"order": 3, "h": "y"})", R"({"order": 2})", R"({"order": 1})",
                            R"({"h": "y", "constants": {"bogus": 1}})", R"({"h": "y +"})", R"({"h": true})",
                            R"({"h": "y", "y0": "one"})", R"({"order": "two", "h": "y"})"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_system(bad), ParameterError);
    }
}

TEST_CASE("systems load from files or inline text") {
    const std::string path = "test_expr_system.json";
    {
        std::ofstream out(path);
        out << R"({"order": 1, "g": "-y"})";
    }
    CHECK(load_system(path).order == 1);
    CHECK(load_system("  {\"order\": 1, \"g\": \"y\"}").field()(1.0) == 1.0);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_system("no/such/file.json"), ParameterError);
}
