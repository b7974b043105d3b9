#pragma once

#include <cctype>
#include <functional>
#include <string>
#include <string_view>

#include "soscert/errors.hpp"
#include "soscert/rational.hpp"

namespace soscert::detail {

// Recursive-descent parser for sums of products of rationals, symbols and powers:
//   expr    = ['+'|'-'] term (('+'|'-') term)*
//   term    = factor (('*'|'/') factor)*
//   factor  = primary ['^' digits]
//   primary = digits | symbol | '(' expr ')'
// Division is only allowed by rational constants. `Value` needs + - *; constants,
// symbols, scaling and powers come from caller-supplied callbacks.
template <class Value>
class ExprParser {
 public:
  using Constant = std::function<Value(const Rational&)>;
  using Resolve = std::function<Value(std::string_view)>;
  using Scale = std::function<Value(const Value&, const Rational&)>;
  using Power = std::function<Value(const Value&, unsigned)>;
  using AsRational = std::function<bool(const Value&, Rational&)>;

  ExprParser(std::string_view text, Constant constant, Resolve resolve, Scale scale, Power power,
             AsRational as_rational)
      : text_(text),
        constant_(std::move(constant)),
        resolve_(std::move(resolve)),
        scale_(std::move(scale)),
        power_(std::move(power)),
        as_rational_(std::move(as_rational)) {}

  Value parse() {
    Value v = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw InputError(why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value expr() {
    bool negate = false;
    if (eat('-')) {
      negate = true;
    } else {
      eat('+');
    }
    Value acc = term();
    if (negate) acc = scale_(acc, Rational(-1));
    for (;;) {
      if (eat('+')) {
        acc = acc + term();
      } else if (eat('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Value term() {
    Value acc = factor();
    for (;;) {
      if (eat('*')) {
        acc = acc * factor();
      } else if (eat('/')) {
        Value d = factor();
        Rational q;
        if (!as_rational_(d, q)) fail("division by a non-constant");
        if (sgn(q) == 0) fail("division by zero");
        acc = scale_(acc, Rational(1) / q);
      } else {
        return acc;
      }
    }
  }

  Value factor() {
    Value base = primary();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (e > 1000) fail("exponent too large");
      base = power_(base, static_cast<unsigned>(e));
    }
    return base;
  }

  Value primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return constant_(Rational(Integer(std::string(text_.substr(start, pos_ - start)), 10)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      return resolve_(text_.substr(start, pos_ - start));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Constant constant_;
  Resolve resolve_;
  Scale scale_;
  Power power_;
  AsRational as_rational_;
};

}  // namespace soscert::detail
