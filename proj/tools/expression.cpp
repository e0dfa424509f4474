#include "expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "logman/error.hpp"

namespace logman::cli {

struct Expression::Node {
    enum Kind { number, radius, negate, add, sub, mul, div, pow, call1, call2 } kind;
    double value = 0.0;
    double (*f1)(double) = nullptr;
    double (*f2)(double, double) = nullptr;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(double r) const {
        switch (kind) {
            case number: return value;
            case radius: return r;
            case negate: return -args[0]->eval(r);
            case add: return args[0]->eval(r) + args[1]->eval(r);
            case sub: return args[0]->eval(r) - args[1]->eval(r);
            case mul: return args[0]->eval(r) * args[1]->eval(r);
            case div: return args[0]->eval(r) / args[1]->eval(r);
            case pow: return std::pow(args[0]->eval(r), args[1]->eval(r));
            case call1: return f1(args[0]->eval(r));
            case call2: return f2(args[0]->eval(r), args[1]->eval(r));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

double coth(double x) { return 1.0 / std::tanh(x); }
double fabs_(double x) { return std::fabs(x); }
double step(double x) { return x >= 0.0 ? 1.0 : 0.0; }
double fmin_(double x, double y) { return std::fmin(x, y); }
double fmax_(double x, double y) { return std::fmax(x, y); }

struct Unary {
    const char* name;
    double (*f)(double);
};
struct Binary {
    const char* name;
    double (*f)(double, double);
};

const Unary unary_functions[] = {
    {"exp", [](double x) { return std::exp(x); }},   {"log", [](double x) { return std::log(x); }},
    {"sqrt", [](double x) { return std::sqrt(x); }}, {"abs", fabs_},
    {"sinh", [](double x) { return std::sinh(x); }}, {"cosh", [](double x) { return std::cosh(x); }},
    {"tanh", [](double x) { return std::tanh(x); }}, {"coth", coth},
    {"step", step},
};
const Binary binary_functions[] = {{"min", fmin_}, {"max", fmax_}};

class Parser {
public:
    Parser(const std::string& s, const std::map<std::string, double>& c) : s_(s), c_(c) {}

    NodePtr parse() {
        auto n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    const std::string& s_;
    const std::map<std::string, double>& c_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression \"" + s_ + "\" at column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char ch) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char ch) {
        if (!eat(ch)) fail(std::string("expected '") + ch + "'");
    }

    static NodePtr make(Expression::Node::Kind k, std::vector<NodePtr> args, double v = 0.0) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = k;
        n->value = v;
        n->args = std::move(args);
        return n;
    }

    NodePtr expr() {
        auto lhs = term();
        for (;;) {
            if (eat('+')) lhs = make(Expression::Node::add, {lhs, term()});
            else if (eat('-')) lhs = make(Expression::Node::sub, {lhs, term()});
            else return lhs;
        }
    }
    NodePtr term() {
        auto lhs = unary();
        for (;;) {
            if (eat('*')) lhs = make(Expression::Node::mul, {lhs, unary()});
            else if (eat('/')) lhs = make(Expression::Node::div, {lhs, unary()});
            else return lhs;
        }
    }
    NodePtr unary() {
        if (eat('-')) return make(Expression::Node::negate, {unary()});
        if (eat('+')) return unary();
        return power();
    }
    NodePtr power() {
        auto base = primary();
        if (eat('^')) return make(Expression::Node::pow, {base, unary()});
        return base;
    }
    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char ch = s_[pos_];
        if (eat('(')) {
            auto n = expr();
            expect(')');
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return make(Expression::Node::number, {}, v);
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(') return call(name, start);
            if (name == "r") return make(Expression::Node::radius, {});
            if (auto it = c_.find(name); it != c_.end()) return make(Expression::Node::number, {}, it->second);
            if (name == "pi") return make(Expression::Node::number, {}, std::numbers::pi);
            if (name == "e") return make(Expression::Node::number, {}, std::numbers::e);
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected '" + std::string(1, ch) + "'");
    }
    NodePtr call(const std::string& name, std::size_t start) {
        for (const auto& f : unary_functions) {
            if (name != f.name) continue;
            expect('(');
            auto n = std::make_shared<Expression::Node>();
            n->kind = Expression::Node::call1;
            n->f1 = f.f;
            n->args = {expr()};
            expect(')');
            return n;
        }
        for (const auto& f : binary_functions) {
            if (name != f.name) continue;
            expect('(');
            auto n = std::make_shared<Expression::Node>();
            n->kind = Expression::Node::call2;
            n->f2 = f.f;
            auto x = expr();
            expect(',');
            n->args = {x, expr()};
            expect(')');
            return n;
        }
        pos_ = start;
        fail("unknown function '" + name + "'");
    }
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::map<std::string, double>& constants) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text, constants).parse();
    return e;
}

double Expression::operator()(double r) const { return root_->eval(r); }

}  // namespace logman::cli
