#include <doctest.h>

#include "fractal/cli.hpp"
#include "fractal/staircase.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using fractal::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fractal_calc");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("number format") {
    CHECK(fractal::cli::format_number(0.4) == "0.4");
    CHECK(fractal::cli::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(fractal::cli::format_number(1e-20) == "1e-20");
}

TEST_CASE("cantor rows") {
    const Result r = cli({"cantor", "--mu", "0.2", "--depth", "6"});
    CHECK(r.code == 0);
    const auto t = rows(r.out);
    CHECK(t.front() == std::vector<std::string>{"level", "index", "a", "b"});
    CHECK(t.size() == 1 + 126);
    CHECK(t[1] == std::vector<std::string>{"1", "0", "0", "0.4"});
    CHECK(t[2] == std::vector<std::string>{"1", "1", "0.6", "1"});

    const Result zero = cli({"cantor", "--depth", "0"});
    CHECK(rows(zero.out).size() == 2);
    CHECK(rows(zero.out)[1] == std::vector<std::string>{"0", "0", "0", "1"});
}

TEST_CASE("json output") {
    const Result r = cli({"cantor", "--depth", "1", "--format", "json"});
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.size() == 2);
    CHECK(doc[1]["a"].get<double>() == doctest::Approx(0.6));
    CHECK(cli({"cantor", "--format", "xml"}).code == 2);
}

TEST_CASE("dimension prints the estimate") {
    const Result r = cli({"dimension", "--mu", "0.2"});
    CHECK(r.code == 0);
    CHECK(rows(r.out).front() == std::vector<std::string>{"alpha", "ratio"});
    const auto pos = r.err.find("alpha = ");
    REQUIRE(pos != std::string::npos);
    const double a = std::stod(r.err.substr(pos + 8));
    CHECK(a >= 0.73);
    CHECK(a <= 0.77);
}

TEST_CASE("staircase column is monotone") {
    const Result r = cli({"staircase", "--mu", "0.2", "--alpha", "0.7565", "--samples", "301"});
    CHECK(r.code == 0);
    const auto t = rows(r.out);
    CHECK(t.size() == 302);
    double prev = -1.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double s = std::stod(t[i][1]);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("characteristic column is two-valued") {
    const Result r = cli({"chi", "--mu", "0.2", "--alpha", "0.7565"});
    CHECK(r.code == 0);
    std::set<std::string> values;
    for (std::size_t i = 1; i < rows(r.out).size(); ++i) values.insert(rows(r.out)[i][1]);
    CHECK(values.size() == 2);
    CHECK(values.count("0"));
    CHECK(values.count(fractal::cli::format_number(1.0 / fractal::gamma_factor(0.7565))));
}

TEST_CASE("derivative and integral commands") {
    const Result d = cli({"deriv", "--alpha", "0.7565", "--depth", "6", "--function", "S"});
    CHECK(d.code == 0);
    const auto dt = rows(d.out);
    CHECK(dt.size() == 1 + 128);
    for (std::size_t i = 1; i < dt.size(); ++i) CHECK(std::stod(dt[i][1]) == doctest::Approx(1.0));

    const Result in = cli({"integrate", "--alpha", "1", "--depth", "0", "--function", "1"});
    CHECK(in.code == 0);
    CHECK(rows(in.out).back()[1] == "1");
    CHECK(cli({"deriv", "--function", "q +"}).code == 2);
}

TEST_CASE("demo example 1 emits two decaying curves") {
    const Result r = cli({"demo", "example1", "--z0", "1", "--z0", "0.5", "--alpha", "hausdorff"});
    CHECK(r.code == 0);
    const auto t = rows(r.out);
    CHECK(t.front() == std::vector<std::string>{"curve", "t", "tau", "y", "z", "L"});
    std::map<std::string, std::vector<double>> curves;
    for (std::size_t i = 1; i < t.size(); ++i) curves[t[i][0]].push_back(std::stod(t[i][3]));
    REQUIRE(curves.size() == 2);
    for (const auto& [name, ys] : curves) {
        for (std::size_t i = 1; i < ys.size(); ++i) CHECK(ys[i] < ys[i - 1]);
    }
    CHECK(curves["z0=1"].front() == 1.0);
    CHECK(curves["z0=0.5"].front() == 0.5);

    const Result c = cli({"demo", "example1", "--classical", "--alpha", "hausdorff"});
    std::set<std::string> names;
    for (std::size_t i = 1; i < rows(c.out).size(); ++i) names.insert(rows(c.out)[i][0]);
    CHECK(names == std::set<std::string>{"z0=1", "z0=0.5", "classical z0=1", "classical z0=0.5"});
}

TEST_CASE("demo example 3 conserves L") {
    const Result r = cli({"demo", "example3", "--alpha", "hausdorff", "--extent", "20"});
    CHECK(r.code == 0);
    const auto t = rows(r.out);
    const double l0 = std::stod(t[1][5]);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(std::abs(std::stod(t[i][5]) - l0) <= 1e-6 * l0);
    CHECK(cli({"demo", "example9"}).code == 2);
}

TEST_CASE("solve command") {
    const Result r = cli({"solve", "--system", R"({"order": 2, "h": "y", "y0": 1, "z0": 0})", "--alpha", "1",
                          "--depth", "0", "--extent", "3.14159265358979"});
    CHECK(r.code == 0);
    const auto last = rows(r.out).back();
    CHECK(std::stod(last[3]) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("stability report schema") {
    const Result r = cli({"stability", "--system", R"({"order": 1, "g": "-y"})", "--alpha", "hausdorff"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["classification"] == "exponentially-stable");
    CHECK(doc["fit"]["rate_tau"].get<double>() == doctest::Approx(1.0).epsilon(1e-2));

    const Result v = cli({"stability", "--system",
                          R"j({"h": "y", "f": "1", "q": "exp(-tau)", "r1": "exp(-tau)", "H": "y^2/2", "dh": "1", "dv": "0"})j",
                          "--alpha", "hausdorff", "--verify", "--depth", "8"});
    CHECK(v.code == 0);
    const auto vd = nlohmann::json::parse(v.out);
    CHECK(vd["classification"].is_null());
    REQUIRE(vd["assumptions"].size() == 7);
    for (const auto& c : vd["assumptions"]) {
        CHECK(c.contains("condition"));
        CHECK(c["pass"].is_boolean());
        CHECK(c["worst_margin"].is_number());
        CHECK(c["witness"].is_object());
    }
    CHECK(vd["verification"][1]["theorem"] == "theorem2");
    CHECK(vd["verification"][1]["pass"] == true);
}

TEST_CASE("exit codes") {
    CHECK(cli({"cantor", "--mu", "1.5"}).code == 2);
    CHECK(cli({"cantor", "--depth", "99"}).code == 2);
    CHECK(cli({"nope"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"solve", "--system", "{ not json"}).code == 2);
    CHECK(cli({"stability", "--system", R"({"order": 1, "g": "1 - y"})"}).code == 2);
    CHECK(cli({"staircase", "--alpha", "1.5"}).code == 2);
    CHECK(cli({"staircase", "--alpha", "abc"}).code == 2);
    CHECK(cli({"cantor", "--help"}).code == 0);
}

TEST_CASE("blow-up writes partial output and exits 3") {
    const std::string path = "test_cli_blowup.csv";
    const Result r = cli({"solve", "--system", R"({"order": 1, "g": "y^2", "y0": 1})", "--alpha", "1", "--depth", "0",
                          "--extent", "2", "--out", path});
    CHECK(r.code == 3);
    const auto t = rows(slurp(path));
    CHECK(t.size() > 100);
    CHECK(std::stod(t.back()[2]) >= 0.99);
    CHECK(std::stod(t.back()[2]) <= 1.0 + 1e-9);
    std::remove(path.c_str());
}

TEST_CASE("identical configurations give identical files") {
    const std::vector<std::vector<std::string>> configs = {
        {"cantor", "--depth", "8"},
        {"dimension", "--mu", "0.3", "--depth", "12"},
        {"staircase", "--depth", "10"},
        {"demo", "example2", "--z0", "0.5", "--classical"},
        {"stability", "--system", R"({"order": 1, "g": "-y"})", "--format", "json"},
    };
    for (const auto& cfg : configs) {
        std::string first;
        for (int run = 0; run < 2; ++run) {
            auto args = cfg;
            args.push_back("--out");
            args.push_back("test_cli_det.out");
            REQUIRE(cli(args).code == 0);
            const std::string bytes = slurp("test_cli_det.out");
            if (run == 0) first = bytes;
            else CHECK(bytes == first);
        }
    }
    std::remove("test_cli_det.out");
}
