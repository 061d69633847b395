#include "vch/expression.hpp"

#include "vch/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace vch {

struct Expression::Node {
    enum class Kind { constant, x, y, negate, add, sub, mul, div, pow, call };
    Kind kind = Kind::constant;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double x, double y) const {
        switch (kind) {
            case Kind::constant: return value;
            case Kind::x: return x;
            case Kind::y: return y;
            case Kind::negate: return -lhs->eval(x, y);
            case Kind::add: return lhs->eval(x, y) + rhs->eval(x, y);
            case Kind::sub: return lhs->eval(x, y) - rhs->eval(x, y);
            case Kind::mul: return lhs->eval(x, y) * rhs->eval(x, y);
            case Kind::div: return lhs->eval(x, y) / rhs->eval(x, y);
            case Kind::pow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
            case Kind::call: return fn(lhs->eval(x, y));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr constant(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
}

double (*lookup_function(std::string_view name))(double) {
    struct Entry {
        std::string_view name;
        double (*fn)(double);
    };
    static const Entry table[] = {
        {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
        {"tan", [](double v) { return std::tan(v); }},   {"tanh", [](double v) { return std::tanh(v); }},
        {"exp", [](double v) { return std::exp(v); }},   {"log", [](double v) { return std::log(v); }},
        {"sqrt", [](double v) { return std::sqrt(v); }}, {"abs", [](double v) { return std::abs(v); }},
    };
    for (const auto& e : table) {
        if (e.name == name) return e.fn;
    }
    return nullptr;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression '" + std::string(text_) + "': " + what + " at column " + std::to_string(pos_ + 1));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) n = make(Kind::add, n, term());
            else if (accept('-')) n = make(Kind::sub, n, term());
            else return n;
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) n = make(Kind::mul, n, unary());
            else if (accept('/')) n = make(Kind::div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::negate, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(text_.substr(pos_));
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - rest.c_str());
            return constant(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "x") return make(Kind::x);
            if (name == "y") return make(Kind::y);
            if (name == "pi") return constant(std::numbers::pi);
            if (name == "e") return constant(std::numbers::e);
            if (auto fn = lookup_function(name)) {
                if (!accept('(')) fail("expected '(' after " + std::string(name));
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::call;
                n->fn = fn;
                n->lhs = expr();
                if (!accept(')')) fail("expected ')'");
                return n;
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.source_ = std::string(text);
    return e;
}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

}  // namespace vch
