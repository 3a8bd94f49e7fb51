#include "fractal/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace fractal {

struct Expression::Node {
    enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };
    Kind kind = Kind::constant;
    double value = 0.0;
    std::size_t index = 0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

struct Function {
    std::string_view name;
    double (*fn)(double);
};

constexpr Function unary_functions[] = {
    {"exp", [](double x) { return std::exp(x); }},  {"log", [](double x) { return std::log(x); }},
    {"sqrt", [](double x) { return std::sqrt(x); }}, {"sin", [](double x) { return std::sin(x); }},
    {"cos", [](double x) { return std::cos(x); }},  {"abs", [](double x) { return std::abs(x); }},
    {"sgn", sgn},
};

NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) n = make(Node::Kind::add, n, term());
            else if (accept('-')) n = make(Node::Kind::sub, n, term());
            else return n;
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) n = make(Node::Kind::mul, n, unary());
            else if (accept('/')) n = make(Node::Kind::div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::Kind::negate, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Node::Kind::pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        if (accept('(')) {
            NodePtr n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        return name();
    }

    NodePtr number() {
        double v = 0.0;
        const char* begin = text_.data() + pos_;
        const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
        if (ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        auto n = std::make_shared<Node>();
        n->value = v;
        return n;
    }

    std::string identifier() {
        static constexpr std::string_view tau_utf8 = "\xCF\x84";
        if (text_.substr(pos_, tau_utf8.size()) == tau_utf8) {
            pos_ += tau_utf8.size();
            return "tau";
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return std::string(text_.substr(start, pos_ - start));
    }

    NodePtr name() {
        const std::size_t start = pos_;
        const std::string id = identifier();
        if (accept('(')) {
            NodePtr first = expr();
            if (id == "pow") {
                if (!accept(',')) fail("pow takes two arguments");
                NodePtr second = expr();
                if (!accept(')')) fail("expected ')'");
                return make(Node::Kind::pow, first, second);
            }
            if (!accept(')')) fail("expected ')'");
            for (const auto& f : unary_functions) {
                if (f.name == id) {
                    auto n = std::make_shared<Node>();
                    n->kind = Node::Kind::call;
                    n->fn = f.fn;
                    n->lhs = first;
                    return n;
                }
            }
            pos_ = start;
            fail("unknown function '" + id + "'");
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == id) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::variable;
                n->index = i;
                return n;
            }
        }
        auto n = std::make_shared<Node>();
        if (id == "pi") n->value = std::numbers::pi;
        else if (id == "e") n->value = std::numbers::e;
        else {
            pos_ = start;
            fail("unknown name '" + id + "'");
        }
        return n;
    }

    std::string_view text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

double eval(const Node& n, std::span<const double> x) {
    switch (n.kind) {
        case Node::Kind::constant: return n.value;
        case Node::Kind::variable: return x[n.index];
        case Node::Kind::negate: return -eval(*n.lhs, x);
        case Node::Kind::add: return eval(*n.lhs, x) + eval(*n.rhs, x);
        case Node::Kind::sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
        case Node::Kind::mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
        case Node::Kind::div: return eval(*n.lhs, x) / eval(*n.rhs, x);
        case Node::Kind::pow: return std::pow(eval(*n.lhs, x), eval(*n.rhs, x));
        case Node::Kind::call: return n.fn(eval(*n.lhs, x));
    }
    return 0.0;
}

bool references(const Node& n, std::size_t index) {
    if (n.kind == Node::Kind::variable) return n.index == index;
    return (n.lhs && references(*n.lhs, index)) || (n.rhs && references(*n.rhs, index));
}

}  // namespace

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
    Expression e;
    e.root_ = Parser(text, variables).parse();
    e.text_ = std::string(text);
    e.variables_ = std::move(variables);
    return e;
}

double Expression::operator()(std::span<const double> values) const {
    if (!root_) throw ParameterError("empty expression");
    if (values.size() != variables_.size())
        throw ParameterError("expression expects " + std::to_string(variables_.size()) + " values");
    return eval(*root_, values);
}

bool Expression::uses(std::string_view variable) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i] == variable) return root_ && references(*root_, i);
    return false;
}

}  // namespace fractal
