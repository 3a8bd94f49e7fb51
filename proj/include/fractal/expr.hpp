#pragma once

#include "fractal/error.hpp"

#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fractal {

/// Syntax error with the byte offset where parsing stopped.
class ParseError : public ParameterError {
public:
    ParseError(const std::string& what, std::size_t position)
        : ParameterError(what + " at offset " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Arithmetic expression over named variables.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Functions: pow, exp, log, sqrt, sin, cos, abs, sgn. Constants: pi, e.
/// The UTF-8 name "τ" is read as "tau". '^' is right-associative and binds
/// tighter than unary minus, so -2^2 = -4.
class Expression {
public:
    Expression() = default;

    static Expression parse(std::string_view text, std::vector<std::string> variables);

    /// Values in the order the variables were declared.
    double operator()(std::span<const double> values) const;
    double operator()(std::initializer_list<double> values) const {
        return (*this)(std::span<const double>(values.begin(), values.size()));
    }

    const std::string& text() const { return text_; }
    const std::vector<std::string>& variables() const { return variables_; }
    bool uses(std::string_view variable) const;
    bool empty() const { return !root_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    std::vector<std::string> variables_;
};

}  // namespace fractal
