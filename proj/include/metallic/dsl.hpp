#pragma once

// Scalar expressions over chart coordinates x0..x{n-1}.
//
// Grammar (EBNF):
//
//   expr    = term , { ( "+" | "-" ) , term } ;
//   term    = unary , { ( "*" | "/" ) , unary } ;
//   unary   = "-" , unary | power ;
//   power   = primary , [ "^" , unary ] ;          (* right associative *)
//   primary = number | symbol | call | "(" , expr , ")" ;
//   call    = function , "(" , expr , { "," , expr } , ")" ;
//   number  = digits , [ "." , [ digits ] ] , [ exponent ]
//           | "." , digits , [ exponent ] ;
//   symbol  = "x" , digits | "x" | "y" | "z" | "w" | "pi" | "e" ;
//   function = "sin" | "cos" | "tan" | "exp" | "ln" | "sqrt" | "sinh" | "cosh" ;
//
// `^` binds tighter than unary minus, so -x0^2 is -(x0^2) and 2^-1 is 0.5.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace mk::dsl {

enum class Op : std::uint8_t { Add, Sub, Mul, Div, Pow };
enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Ln, Sqrt, Sinh, Cosh };

struct Node;

/// Immutable expression tree. Copies share structure; safe to evaluate from
/// many threads.
class Expr {
 public:
  Expr() = default;

  static Expr literal(double v);
  static Expr coordinate(int index);
  static Expr constant_pi();
  static Expr constant_e();
  static Expr negate(Expr operand);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr call(Func f, Expr arg);

  bool empty() const noexcept { return !node_; }
  const Node& node() const { return *node_; }

  /// Largest coordinate index referenced, or -1.
  int max_coordinate() const;

  double eval(std::span<const double> point) const;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  enum class Kind : std::uint8_t { Literal, Coordinate, Pi, E, Neg, Binary, Call };
  Kind kind = Kind::Literal;
  double value = 0.0;
  int index = 0;
  Op op = Op::Add;
  Func func = Func::Sin;
  Expr lhs;
  Expr rhs;
};

Expr parse(std::string_view input);

/// Fully parenthesized text with round-trippable literals.
std::string render(const Expr& e);

const char* func_name(Func f);

}  // namespace mk::dsl
