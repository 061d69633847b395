#ifndef VCH_EXPRESSION_HPP
#define VCH_EXPRESSION_HPP

#include <memory>
#include <string>
#include <string_view>

namespace vch {

/// Arithmetic expression over the coordinates x and y, used for initial data.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          (right-associative, -2^2 = -4)
///   primary := number | x | y | pi | e | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | tan | tanh | exp | log | sqrt | abs
///
/// Parse errors throw ConfigError with the offending column.
class Expression {
public:
    static Expression parse(std::string_view text);

    double operator()(double x, double y = 0.0) const;
    const std::string& source() const { return source_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

}  // namespace vch

#endif  // VCH_EXPRESSION_HPP
