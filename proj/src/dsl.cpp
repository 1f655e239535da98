#include "metallic/dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <vector>

#include "metallic/errors.hpp"

namespace mk::dsl {

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 8> kFunctions{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"exp", Func::Exp},
    {"ln", Func::Ln},
    {"sqrt", Func::Sqrt},
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
}};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions)
    if (n == name) return f;
  return std::nullopt;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;  // 1-based
  std::string_view text;
  double number = 0.0;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

[[noreturn]] void fail(std::size_t offset, const std::string& expected, const std::string& found) {
  throw ParseError(offset, expected,
                   "expected " + expected + " at offset " + std::to_string(offset) + ", found " + found);
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : src_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (true) {
      while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t' || src_[i] == '\r' || src_[i] == '\n')) ++i;
      if (i >= src_.size()) {
        out.push_back({Tok::End, src_.size() + 1, {}});
        return out;
      }
      const char c = src_[i];
      const std::size_t off = i + 1;
      auto single = [&](Tok t) {
        out.push_back({t, off, src_.substr(i, 1)});
        ++i;
      };
      switch (c) {
        case '+': single(Tok::Plus); continue;
        case '-': single(Tok::Minus); continue;
        case '*': single(Tok::Star); continue;
        case '/': single(Tok::Slash); continue;
        case '^': single(Tok::Caret); continue;
        case '(': single(Tok::LParen); continue;
        case ')': single(Tok::RParen); continue;
        case ',': single(Tok::Comma); continue;
        default: break;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t j = i;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        if (j < src_.size() && src_[j] == '.') {
          ++j;
          while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        }
        if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
          if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
            while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
            j = k;
          }
        }
        const std::string_view text = src_.substr(i, j - i);
        double v = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
          fail(off, "number", "'" + std::string(text) + "'");
        out.push_back({Tok::Number, off, text, v});
        i = j;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
        out.push_back({Tok::Ident, off, src_.substr(i, j - i)});
        i = j;
        continue;
      }
      fail(off, "expression", "'" + std::string(1, c) + "'");
    }
  }

 private:
  std::string_view src_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().kind != Tok::End) fail(peek().offset, "operator or end of input", found(peek()));
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok t) {
    if (peek().kind != t) return false;
    ++pos_;
    return true;
  }
  static std::string found(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + std::string(t.text) + "'";
  }
  void expect(Tok t) {
    if (peek().kind != t) fail(peek().offset, describe(t), found(peek()));
    ++pos_;
  }

  Expr expr() {
    Expr lhs = term();
    while (true) {
      if (accept(Tok::Plus)) lhs = Expr::binary(Op::Add, lhs, term());
      else if (accept(Tok::Minus)) lhs = Expr::binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    while (true) {
      if (accept(Tok::Star)) lhs = Expr::binary(Op::Mul, lhs, unary());
      else if (accept(Tok::Slash)) lhs = Expr::binary(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  Expr unary() {
    if (accept(Tok::Minus)) return Expr::negate(unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept(Tok::Caret)) return Expr::binary(Op::Pow, base, unary());
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        next();
        return Expr::literal(t.number);
      case Tok::LParen: {
        next();
        Expr inner = expr();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Ident:
        next();
        return symbol(t);
      default:
        fail(t.offset, "number, symbol or '('", found(t));
    }
  }

  Expr symbol(const Token& t) {
    const std::string_view name = t.text;
    if (auto f = lookup_function(name)) {
      if (peek().kind != Tok::LParen) fail(peek().offset, "'(' after function " + std::string(name), found(peek()));
      next();
      std::vector<Expr> args;
      if (peek().kind != Tok::RParen) {
        args.push_back(expr());
        while (accept(Tok::Comma)) args.push_back(expr());
      }
      expect(Tok::RParen);
      if (args.size() != 1)
        throw ParseError(t.offset, "1 argument",
                         "function " + std::string(name) + " takes 1 argument, got " + std::to_string(args.size()) +
                             " at offset " + std::to_string(t.offset));
      return Expr::call(*f, args.front());
    }
    if (name == "pi") return Expr::constant_pi();
    if (name == "e") return Expr::constant_e();
    if (name == "x") return Expr::coordinate(0);
    if (name == "y") return Expr::coordinate(1);
    if (name == "z") return Expr::coordinate(2);
    if (name == "w") return Expr::coordinate(3);
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      int idx = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      return Expr::coordinate(idx);
    }
    throw ParseError(t.offset, "known symbol",
                     "unknown symbol '" + std::string(name) + "' at offset " + std::to_string(t.offset));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string fmt_literal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0 || (v == 0 && std::signbit(v))) return "(" + s + ")";
  return s;
}

const char* op_text(Op op) {
  switch (op) {
    case Op::Add: return " + ";
    case Op::Sub: return " - ";
    case Op::Mul: return " * ";
    case Op::Div: return " / ";
    case Op::Pow: return " ^ ";
  }
  return "?";
}

double eval_node(const Node& n, std::span<const double> x);

[[noreturn]] void domain(const Node& n, const std::string& why) {
  // Rebuild an Expr view of the node for the message.
  Expr e;
  switch (n.kind) {
    case Node::Kind::Binary: e = Expr::binary(n.op, n.lhs, n.rhs); break;
    case Node::Kind::Call: e = Expr::call(n.func, n.lhs); break;
    default: break;
  }
  const std::string sub = e.empty() ? std::string("?") : render(e);
  throw DomainError(sub, why + " in " + sub);
}

double eval_node(const Node& n, std::span<const double> x) {
  switch (n.kind) {
    case Node::Kind::Literal: return n.value;
    case Node::Kind::Coordinate:
      if (static_cast<std::size_t>(n.index) >= x.size())
        throw Error("coordinate x" + std::to_string(n.index) + " outside point of dimension " +
                    std::to_string(x.size()));
      return x[static_cast<std::size_t>(n.index)];
    case Node::Kind::Pi: return std::numbers::pi;
    case Node::Kind::E: return std::numbers::e;
    case Node::Kind::Neg: return -eval_node(n.lhs.node(), x);
    case Node::Kind::Binary: {
      const double a = eval_node(n.lhs.node(), x);
      const double b = eval_node(n.rhs.node(), x);
      switch (n.op) {
        case Op::Add: return a + b;
        case Op::Sub: return a - b;
        case Op::Mul: return a * b;
        case Op::Div:
          if (b == 0.0) domain(n, "division by zero");
          return a / b;
        case Op::Pow:
          if (a > 0.0) return std::pow(a, b);
          if (std::trunc(b) != b) domain(n, "non-integer power of non-positive base");
          if (a == 0.0 && b < 0.0) domain(n, "division by zero");
          return std::pow(a, b);
      }
      break;
    }
    case Node::Kind::Call: {
      const double a = eval_node(n.lhs.node(), x);
      switch (n.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: return std::tan(a);
        case Func::Exp: return std::exp(a);
        case Func::Ln:
          if (a <= 0.0) domain(n, "logarithm of non-positive value");
          return std::log(a);
        case Func::Sqrt:
          if (a < 0.0) domain(n, "square root of negative value");
          return std::sqrt(a);
        case Func::Sinh: return std::sinh(a);
        case Func::Cosh: return std::cosh(a);
      }
      break;
    }
  }
  return 0.0;
}

int max_coord(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Coordinate: return n.index;
    case Node::Kind::Neg:
    case Node::Kind::Call: return max_coord(n.lhs.node());
    case Node::Kind::Binary: return std::max(max_coord(n.lhs.node()), max_coord(n.rhs.node()));
    default: return -1;
  }
}

void render_into(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Literal: out += fmt_literal(n.value); return;
    case Node::Kind::Coordinate: out += "x" + std::to_string(n.index); return;
    case Node::Kind::Pi: out += "pi"; return;
    case Node::Kind::E: out += "e"; return;
    case Node::Kind::Neg:
      out += "(-";
      render_into(n.lhs.node(), out);
      out += ")";
      return;
    case Node::Kind::Binary:
      out += "(";
      render_into(n.lhs.node(), out);
      out += op_text(n.op);
      render_into(n.rhs.node(), out);
      out += ")";
      return;
    case Node::Kind::Call:
      out += func_name(n.func);
      out += "(";
      render_into(n.lhs.node(), out);
      out += ")";
      return;
  }
}

}  // namespace

Expr Expr::literal(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Literal;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::coordinate(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Coordinate;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::constant_pi() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Pi;
  return Expr(std::move(n));
}

Expr Expr::constant_e() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::E;
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Neg;
  n->lhs = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Call;
  n->func = f;
  n->lhs = std::move(arg);
  return Expr(std::move(n));
}

int Expr::max_coordinate() const { return node_ ? max_coord(*node_) : -1; }

double Expr::eval(std::span<const double> point) const {
  if (!node_) throw Error("evaluating an empty expression");
  return eval_node(*node_, point);
}

Expr parse(std::string_view input) {
  Lexer lex(input);
  Parser p(lex.run());
  return p.parse_all();
}

std::string render(const Expr& e) {
  std::string out;
  if (!e.empty()) render_into(e.node(), out);
  return out;
}

const char* func_name(Func f) {
  for (const auto& [n, fn] : kFunctions)
    if (fn == f) return n.data();
  return "?";
}

}  // namespace mk::dsl
