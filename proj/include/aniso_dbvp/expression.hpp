#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace adbvp {

/// Variables an expression may reference. `t` is an alias of `x`.
struct Variables {
  double k = 0.0;
  double x = 0.0;
};

/// Compiled arithmetic expression over k, x (alias t).
///
/// Grammar, lowest to highest precedence:
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?          (right-associative)
///   primary := number | name | name '(' args ')' | '(' sum ')'
///
/// Functions: exp ln abs sqrt atan sin cos (one argument), pow min max (two).
/// Constants: pi e.
class Expression {
 public:
  /// Throws ParseError with code syntax_error or unknown_identifier.
  static Expression parse(std::string_view src);

  double eval(const Variables& vars) const;
  double operator()(double k, double x = 0.0) const { return eval({k, x}); }

  bool uses_k() const noexcept { return uses_k_; }
  bool uses_x() const noexcept { return uses_x_; }
  const std::string& source() const noexcept { return source_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
  bool uses_k_ = false;
  bool uses_x_ = false;
};

}  // namespace adbvp
