#pragma once

#include <map>
#include <memory>
#include <string>

namespace logman::cli {

/// Arithmetic over r: + - * / ^, unary minus, parentheses, numbers, named
/// constants and the functions exp, log, sqrt, abs, sinh, cosh, tanh,
/// coth, step (1 for x >= 0, else 0), min(x,y), max(x,y). ^ is right
/// associative and binds tighter than unary minus, so -r^2 = -(r^2).
class Expression {
public:
    /// Throws ConfigError naming the position of the first syntax error or
    /// the first unknown identifier.
    static Expression parse(const std::string& text, const std::map<std::string, double>& constants);

    double operator()(double r) const;
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace logman::cli
