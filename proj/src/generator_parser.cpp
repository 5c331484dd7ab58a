#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>

#include "nullfield/funcspace.hpp"

namespace nullfield {

namespace {

constexpr int kMaxPower = 64;

// Recursive descent over
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := primary ['^' integer]
//   primary := number ['i'] | 'i' | z1 | z2 | zb1 | zb2
//            | 'exp' '(' expr ')' | '(' expr ')'
class Parser {
public:
  explicit Parser(std::string_view text) : s_(text) {}

  Generator parse() {
    Generator g = expr();
    skip_ws();
    if (pos_ != s_.size()) {
      fail("unexpected trailing input");
    }
    return g;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("generator parse error at position " + std::to_string(pos_) +
                                ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(std::string("expected '") + c + "'");
    }
  }

  Generator expr() {
    skip_ws();
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    Generator acc = term();
    if (negate) {
      acc = acc * Complex(-1.0);
    }
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc + term() * Complex(-1.0);
      } else {
        return acc;
      }
    }
  }

  Generator term() {
    Generator acc = factor();
    while (accept('*')) {
      acc = acc * factor();
    }
    return acc;
  }

  Generator factor() {
    Generator base = primary();
    if (!accept('^')) {
      return base;
    }
    skip_ws();
    int n = 0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec != std::errc() || ptr == first) {
      fail("expected a non-negative integer exponent");
    }
    if (n < 0 || n > kMaxPower) {
      fail("exponent out of range");
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    Generator out = Generator::constant(1.0);
    for (int k = 0; k < n; ++k) {
      out = out * base;
    }
    return out;
  }

  Generator primary() {
    skip_ws();
    if (pos_ >= s_.size()) {
      fail("unexpected end of input");
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (accept('(')) {
      Generator inner = expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) {
        ++end;
      }
      const std::string_view word = s_.substr(pos_, end - pos_);
      if (word == "i") {
        pos_ = end;
        return Generator::constant(Complex(0.0, 1.0));
      }
      if (word == "z1" || word == "z2" || word == "zb1" || word == "zb2") {
        pos_ = end;
        const WirtingerVar v = word == "z1"    ? WirtingerVar::z1
                               : word == "z2"  ? WirtingerVar::z2
                               : word == "zb1" ? WirtingerVar::zb1
                                               : WirtingerVar::zb2;
        return Generator(MixedPoly::variable(v));
      }
      if (word == "exp") {
        pos_ = end;
        expect('(');
        const Generator arg = expr();
        expect(')');
        if (!arg.is_polynomial()) {
          fail("exp() argument must be a polynomial");
        }
        return Generator(ExpWrapped{arg.as_polynomial()});
      }
      fail("unknown identifier '" + std::string(word) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Generator number() {
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) {
        ++end;
      }
    };
    digits();
    if (end < s_.size() && s_[end] == '.') {
      ++end;
      digits();
    }
    if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
      std::size_t save = end;
      ++end;
      if (end < s_.size() && (s_[end] == '+' || s_[end] == '-')) {
        ++end;
      }
      const std::size_t before = end;
      digits();
      if (end == before) {
        end = save;
      }
    }
    const std::string literal(s_.substr(pos_, end - pos_));
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(literal, &used);
      if (used != literal.size()) {
        fail("malformed number");
      }
    } catch (const std::logic_error&) {
      fail("malformed number '" + literal + "'");
    }
    pos_ = end;
    // "2i" is an imaginary literal; "2*i" also works through term().
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return Generator::constant(Complex(0.0, value));
    }
    return Generator::constant(Complex(value, 0.0));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

} // namespace

Generator parse_generator(std::string_view text) { return Parser(text).parse(); }

} // namespace nullfield
