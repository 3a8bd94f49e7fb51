#include "fractal/system_io.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace fractal {

namespace {

using nlohmann::json;

std::string expression_text(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (v.is_number()) return v.dump();
    if (!v.is_string()) throw ParameterError(std::string("'") + key + "' must be a string or number");
    return v.get<std::string>();
}

Expression compile(const json& doc, const char* key, std::vector<std::string> vars) {
    try {
        return Expression::parse(expression_text(doc, key), std::move(vars));
    } catch (const ParseError& e) {
        throw ParseError(std::string("in '") + key + "': " + e.what(), e.position());
    }
}

double number(const json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    const json& v = doc.at(key);
    if (!v.is_number()) throw ParameterError(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

void read_constants(const json& doc, FdeConstants& c) {
    if (!doc.contains("constants")) return;
    const json& k = doc.at("constants");
    if (!k.is_object()) throw ParameterError("'constants' must be an object");
    static const std::set<std::string> known = {"u0",   "v0",   "E",    "Q",     "lambda1", "lambda2",
                                                "eps0", "eps1", "eps2", "sigma", "Delta",   "k"};
    for (const auto& [key, _] : k.items())
        if (!known.count(key)) throw ParameterError("unknown constant '" + key + "'");
    c.u0 = number(k, "u0", c.u0);
    c.v0 = number(k, "v0", c.v0);
    c.E = number(k, "E", c.E);
    c.Q = number(k, "Q", c.Q);
    c.lambda1 = number(k, "lambda1", c.lambda1);
    c.lambda2 = number(k, "lambda2", c.lambda2);
    c.eps0 = number(k, "eps0", c.eps0);
    c.eps1 = number(k, "eps1", c.eps1);
    c.eps2 = number(k, "eps2", c.eps2);
    c.sigma = number(k, "sigma", c.sigma);
    if (k.contains("Delta")) c.Delta = number(k, "Delta", 0.0);
    c.k = number(k, "k", c.k);
}

std::function<double(double)> of_tau(const Expression& e) {
    return [e](double tau) { return e({tau}); };
}

std::function<double(double)> of_y(const Expression& e) {
    return [e](double y) { return e({y}); };
}

}  // namespace

ScalarField SystemDefinition::field() const {
    if (order != 1) throw ParameterError("field() needs a first-order system");
    const Expression e = g;
    return [e](double h) { return e({h, h}); };
}

SystemDefinition parse_system(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("malformed system JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParameterError("system JSON must be an object");

    SystemDefinition def;
    try {
        def.order = doc.contains("order") ? doc.at("order").get<int>() : 2;
    } catch (const json::exception&) {
        throw ParameterError("'order' must be 1 or 2");
    }
    def.y0 = number(doc, "y0", def.y0);
    def.z0 = number(doc, "z0", def.z0);
    def.equilibrium = number(doc, "equilibrium", def.equilibrium);

    if (def.order == 1) {
        if (!doc.contains("g")) throw ParameterError("first-order system needs 'g'");
        def.g = compile(doc, "g", {"y", "h"});
        return def;
    }
    if (def.order != 2) throw ParameterError("'order' must be 1 or 2");
    if (!doc.contains("h")) throw ParameterError("second-order system needs 'h'");

    FdeSystem& s = def.system;
    const auto tau_fn = [&](const char* key, const char* fallback) -> std::function<double(double)> {
        if (!doc.contains(key)) {
            if (!fallback) return nullptr;
            return of_tau(Expression::parse(fallback, {"tau"}));
        }
        return of_tau(compile(doc, key, {"tau"}));
    };
    const auto y_fn = [&](const char* key) -> std::function<double(double)> {
        if (!doc.contains(key)) return nullptr;
        return of_y(compile(doc, key, {"y"}));
    };

    s.u = tau_fn("u", "1");
    s.v = tau_fn("v", "1");
    s.dv = tau_fn("dv", nullptr);
    s.r1 = tau_fn("r1", nullptr);
    s.r2 = tau_fn("r2", nullptr);
    s.h = y_fn("h");
    s.H = y_fn("H");
    s.dh = y_fn("dh");
    {
        const Expression f = doc.contains("f") ? compile(doc, "f", {"y", "z"}) : Expression::parse("0", {"y", "z"});
        s.f = [f](double y, double z) { return f({y, z}); };
    }
    if (doc.contains("q")) {
        const Expression q = compile(doc, "q", {"tau", "y", "z"});
        s.q = [q](double tau, double y, double z) { return q({tau, y, z}); };
    }
    read_constants(doc, s.constants);
    return def;
}

SystemDefinition load_system(const std::string& source) {
    std::size_t i = source.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && source[i] == '{') return parse_system(source);
    std::ifstream in(source);
    if (!in) throw ParameterError("cannot read system file '" + source + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_system(buffer.str());
}

}  // namespace fractal
