#include "gen.hpp"
#include "oracles.hpp"

#include "fractal/cantor.hpp"

#include <cstdlib>

using namespace fractal;

TEST_CASE("first generation of the one-fifth set") {
    const IntervalSet set = generate({0.2, 1});
    REQUIRE(set.size() == 2);
    CHECK(set[0].a == 0.0);
    CHECK(set[0].b == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(set[1].a == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(set[1].b == 1.0);
}

TEST_CASE("depth zero is the base interval") {
    const IntervalSet set = generate({0.3, 0, -2.0, 5.0});
    REQUIRE(set.size() == 1);
    CHECK(set[0].a == -2.0);
    CHECK(set[0].b == 5.0);
    CHECK(covering_measure(set) == 7.0);
}

TEST_CASE("generation matches repeated splitting") {
    gen::for_all(60, 21, [](gen::Gen& g) {
        const double mu = g.uniform(0.05, 0.9);
        const int depth = g.integer(0, 10);
        const double a = g.uniform(-3.0, 3.0);
        const double b = a + g.log_uniform(1e-2, 1e3);
        const IntervalSet set = generate({mu, depth, a, b});
        const auto want = oracle::cantor(mu, depth, a, b);
        REQUIRE(set.size() == want.size());
        const double tol = 1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
        for (std::size_t i = 0; i < set.size(); ++i) {
            CHECK(std::abs(set[i].a - static_cast<double>(want[i].first)) <= tol);
            CHECK(std::abs(set[i].b - static_cast<double>(want[i].second)) <= tol);
        }
        CHECK(set.front() == a);
        CHECK(set.back() == b);
    });
}

TEST_CASE("structure: count, widths, nesting") {
    gen::for_all(40, 22, [](gen::Gen& g) {
        const double mu = g.uniform(0.01, 0.95);
        const int depth = g.integer(1, 12);
        CantorSpec spec{mu, depth, 0.0, g.uniform(0.5, 4.0)};
        const IntervalSet set = generate(spec);
        CHECK(set.size() == (std::size_t{1} << depth));
        const double w = spec.interval_length(depth);
        for (std::size_t i = 0; i < set.size(); ++i) {
            CHECK(gen::rel_err(set.width()[i], w) <= 1e-15);
            if (i > 0) CHECK(set[i - 1].b < set[i].a);
        }
        CantorSpec parent_spec = spec;
        parent_spec.depth = depth - 1;
        const IntervalSet parent = generate(parent_spec);
        for (std::size_t i = 0; i < set.size(); ++i) {
            const Interval p = parent[i / 2];
            CHECK(set[i].a >= p.a);
            CHECK(set[i].b <= p.b);
        }
    });
}

TEST_CASE("covering measure is (1 - mu)^m times the base length") {
    gen::for_all(50, 23, [](gen::Gen& g) {
        const double mu = g.uniform(0.01, 0.6);
        const int depth = g.integer(0, 16);
        const double L = g.uniform(0.1, 10.0);
        const double m = covering_measure(generate({mu, depth, 1.0, 1.0 + L}));
        CHECK(gen::rel_err(m, L * std::pow(1.0 - mu, depth)) <= 1e-13);
    });
}

TEST_CASE("hausdorff dimension") {
    CHECK(hausdorff_dimension(0.2) == doctest::Approx(0.7565).epsilon(1e-4));
    CHECK(hausdorff_dimension(1.0 / 3.0) == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-15));
    gen::for_all(100, 24, [](gen::Gen& g) {
        const double mu = g.uniform(1e-6, 1.0 - 1e-6);
        CHECK(gen::rel_err(hausdorff_dimension(mu), oracle::hausdorff(mu)) <= 1e-13);
    });
    CHECK_THROWS_AS(hausdorff_dimension(0.0), ParameterError);
    CHECK_THROWS_AS(hausdorff_dimension(1.0), ParameterError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(generate({0.0, 1}), ParameterError);
    CHECK_THROWS_AS(generate({1.0, 1}), ParameterError);
    CHECK_THROWS_AS(generate({0.2, -1}), ParameterError);
    CHECK_THROWS_AS(generate({0.2, 3, 1.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(generate({0.2, max_depth() + 1}), ParameterError);
}

TEST_CASE("depth cap from the environment") {
    ::setenv("FRACTAL_CALC_MAX_DEPTH", "5", 1);
    CHECK(max_depth() == 5);
    CHECK_THROWS_AS(generate({0.2, 6}), ParameterError);
    CHECK(generate({0.2, 5}).size() == 32);
    ::setenv("FRACTAL_CALC_MAX_DEPTH", "junk", 1);
    CHECK(max_depth() == default_max_depth);
    ::unsetenv("FRACTAL_CALC_MAX_DEPTH");
    CHECK(max_depth() == default_max_depth);
}

TEST_CASE("membership and lookup") {
    const IntervalSet set = generate({0.2, 2});
    CHECK(set.contains(0.0));
    CHECK(set.contains(1.0));
    CHECK_FALSE(set.contains(0.5));
    CHECK_FALSE(set.contains(-0.1));
    CHECK(set.find(0.5) == set.size());
    CHECK(set.find(0.0) == 0);
    CHECK(set.find(1.0) == set.size() - 1);
    CHECK(set.meets_open(0.39, 0.61));
    CHECK_FALSE(set.meets_open(0.4, 0.6));
    CHECK_FALSE(set.meets_open(0.41, 0.59));
}

TEST_CASE("explicit interval lists are checked") {
    const Interval ok[] = {{0.0, 1.0}, {2.0, 3.0}};
    CHECK(IntervalSet(ok).size() == 2);
    const Interval reversed[] = {{1.0, 0.0}};
    CHECK_THROWS_AS(IntervalSet{reversed}, ParameterError);
    const Interval overlap[] = {{0.0, 1.0}, {0.5, 2.0}};
    CHECK_THROWS_AS(IntervalSet{overlap}, ParameterError);
    const Interval touching[] = {{0.0, 1.0}, {1.0, 2.0}};
    CHECK_THROWS_AS(IntervalSet{touching}, ParameterError);
}

TEST_CASE("gaps below double resolution are refused") {
    CHECK_THROWS_AS(generate({0.999, 24, 1e6, 1e6 + 1.0}), ResolutionError);
}
