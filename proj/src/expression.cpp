#include "instanton/expression.hpp"

#include <cctype>

namespace instanton::rep {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Character parse() {
    Character c = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ExpressionError(pos_, "unexpected '" + std::string(1, src_[pos_]) + "'");
    return c;
  }

 private:
  Character expr() {
    Character c = factor();
    while (true) {
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '*') {
        ++pos_;
        c = c * factor();
      } else {
        return c;
      }
    }
  }

  Character factor() {
    skip_ws();
    if (pos_ >= src_.size()) throw ExpressionError(pos_, "expected a factor, found end of input");
    if (src_[pos_] == '(') {
      ++pos_;
      Character c = expr();
      expect(')');
      return c;
    }
    const std::size_t start = pos_;
    std::string name;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) name += src_[pos_++];
    if (name.empty()) throw ExpressionError(start, "expected a factor, found '" + std::string(1, src_[pos_]) + "'");
    if (name == "S" || name == "V") {
      expect('(');
      const int m = integer();
      expect(')');
      const Character s = Character::irreducible(m);
      return name == "S" ? s : Character::irreducible(1) * s;
    }
    if (name == "Sym2" || name == "Wedge2" || name == "Lambda2" || name == "Dual") {
      expect('(');
      Character inner = expr();
      expect(')');
      if (name == "Sym2") return inner.sym2();
      if (name == "Dual") return inner.dual();
      return inner.wedge2();
    }
    throw ExpressionError(start, "unknown factor '" + name + "'");
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    long long value = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      value = value * 10 + (src_[pos_++] - '0');
      if (value > 10000) throw ExpressionError(start, "degree too large");
    }
    if (pos_ == start) throw ExpressionError(pos_, "expected a nonnegative integer");
    return static_cast<int>(value);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= src_.size()) throw ExpressionError(pos_, std::string("expected '") + c + "', found end of input");
    if (src_[pos_] != c)
      throw ExpressionError(pos_, std::string("expected '") + c + "', found '" + src_[pos_] + "'");
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Character expression_character(std::string_view expr) { return Parser(expr).parse(); }

}  // namespace instanton::rep
