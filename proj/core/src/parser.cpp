#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>
#include <string>

#include "mhdflow/error.hpp"
#include "mhdflow/expr.hpp"

namespace mhdflow {
namespace {

std::optional<UnaryOp> unary_function(std::string_view name) {
  if (name == "sin") return UnaryOp::sin;
  if (name == "cos") return UnaryOp::cos;
  if (name == "tan") return UnaryOp::tan;
  if (name == "sinh") return UnaryOp::sinh;
  if (name == "cosh") return UnaryOp::cosh;
  if (name == "tanh") return UnaryOp::tanh;
  if (name == "exp") return UnaryOp::exp;
  if (name == "log") return UnaryOp::log;
  if (name == "sqrt") return UnaryOp::sqrt;
  if (name == "atan") return UnaryOp::atan;
  return std::nullopt;
}

// Recursive descent over
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident | ident '(' args ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip_space();
    if (pos_ < text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
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

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "', got end of input", pos_);
    if (text_[pos_] != c) throw ParseError(std::string("expected '") + c + "', got '" + text_[pos_] + "'", pos_);
    ++pos_;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(UnaryOp::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::binary(BinaryOp::pow, base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc{} || res.ptr != text_.data() + pos_)
      throw ParseError("malformed number '" + std::string(text_.substr(start, pos_ - start)) + "'", start);
    return Expr::constant(value);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    skip_space();
    const bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (!call) {
      if (name == "pi") return Expr::constant(std::numbers::pi);
      if (name == "e") return Expr::constant(std::numbers::e);
      return Expr::variable(name);
    }
    ++pos_;
    if (name == "atan2") {
      Expr y = expr();
      expect(',');
      Expr x = expr();
      expect(')');
      return Expr::binary(BinaryOp::atan2, y, x);
    }
    const auto op = unary_function(name);
    if (!op) throw ParseError("unknown function '" + name + "'", start);
    Expr arg = expr();
    expect(')');
    return Expr::unary(*op, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace mhdflow
