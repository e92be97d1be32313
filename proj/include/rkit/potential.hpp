#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "rkit/errors.hpp"

namespace rkit {

// Syntax error in a potential expression. Line and column are 1-based.
class PotentialSyntaxError : public ConfigError {
 public:
  PotentialSyntaxError(int line, int column, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Expression tree over r: literals, + - * / ^, unary minus, exp(), parentheses.
// ^ is right-associative and binds tighter than unary minus, so -r^2 = -(r^2).
class PotentialExpr {
 public:
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Exp };

  struct Node {
    Kind kind;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  PotentialExpr();  // V = 0
  explicit PotentialExpr(std::shared_ptr<const Node> root);

  double operator()(double r) const;

  // Fully parenthesized, literals printed to round-trip exactly.
  std::string to_string() const;

  bool is_zero() const;
  const Node& root() const { return *root_; }

  friend bool operator==(const PotentialExpr& a, const PotentialExpr& b);

 private:
  std::shared_ptr<const Node> root_;
};

PotentialExpr parse_potential(std::string_view text);

// Checks V(r) is finite on a log grid over (0, range] and beyond, and that
// |V(r)| <= tail_tolerance for r in [range, 4 range]. Throws ConfigError.
void check_short_range(const PotentialExpr& v, double range = 40.0, double tail_tolerance = 1e-6);

}  // namespace rkit
