#ifndef GMAP_EXPR_HPP
#define GMAP_EXPR_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmap/errors.hpp"

namespace gmap {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class UnaryOp { Neg, Sin, Cos, Tan, Sinh, Cosh, Exp, Ln, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Immutable arithmetic expression over chart coordinates x^0..x^{n-1}.
/// Nodes are shared; construction applies only safe local simplifications
/// (constant folding, 0*e, 1*e, e+0 and the like), so differentiation stays
/// closed in the same grammar without a full CAS.
class Expr {
public:
  enum class Kind { Constant, Variable, Unary, Binary };

  static ExprPtr constant(double value);
  static ExprPtr variable(int index);
  static ExprPtr unary(UnaryOp op, ExprPtr operand);
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

  Kind kind() const { return kind_; }
  double constant_value() const { return value_; }
  int variable_index() const { return index_; }
  UnaryOp unary_op() const { return unary_; }
  BinaryOp binary_op() const { return binary_; }
  const ExprPtr& left() const { return lhs_; }
  const ExprPtr& right() const { return rhs_; }
  const ExprPtr& operand() const { return lhs_; }

  bool is_constant(double v) const {
    return kind_ == Kind::Constant && value_ == v;
  }

  /// IEEE double value at a point; throws DomainError naming the offending
  /// subterm when the value leaves the real domain or is non-finite.
  double evaluate(std::span<const double> point) const;

  /// Render with minimal parentheses; reparsing yields an expression with
  /// identical pointwise values.
  std::string str() const;

private:
  Expr() = default;

  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  int index_ = 0;
  UnaryOp unary_ = UnaryOp::Neg;
  BinaryOp binary_ = BinaryOp::Add;
  ExprPtr lhs_, rhs_;
};

/// Exact partial derivative with respect to coordinate `coord`.
ExprPtr differentiate(const ExprPtr& e, int coord);

/// Parse an expression over the given ordered coordinate names.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := ('-')? power
///   power  := atom ('^' factor)?
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
/// where ident is a coordinate name or one of
/// sin, cos, tan, sinh, cosh, exp, ln, sqrt.
ExprPtr parse_expression(std::string_view text,
                         std::span<const std::string> coords);

} // namespace gmap

#endif
