#include "lbjet/parser.hpp"

#include <cctype>
#include <vector>

namespace lbjet {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : s_(text), sig_(sig) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  struct Factor {
    Expr base;
    int exp = 1;
  };

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  bool at_digit() const { return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])); }

  long integer() {
    skip();
    if (!at_digit()) fail("expected integer");
    long v = 0;
    while (at_digit()) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > 1000000000L) fail("integer too large");
    }
    return v;
  }

  Expr expr() {
    skip();
    bool neg = false;
    if (eat('-')) {
      neg = true;
    } else {
      eat('+');
    }
    Expr acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Factor f = factor();
    Expr acc = f.base.pow(f.exp);
    for (;;) {
      skip();
      std::size_t at = pos_;
      if (eat('*')) {
        Factor g = factor();
        acc *= g.base.pow(g.exp);
      } else if (eat('/')) {
        Factor g = factor();
        if (g.base.is_structurally_zero()) fail_at("division by zero", at);
        // Invert before raising so a repeated factor stays one factor.
        acc *= Expr(g.base.rf().inverse().pow(g.exp));
      } else {
        return acc;
      }
    }
  }

  Factor factor() {
    Factor f{atom(), 1};
    if (eat('^')) {
      bool neg = eat('-');
      long k = integer();
      if (k > 10000) fail("exponent too large");
      f.exp = neg ? -static_cast<int>(k) : static_cast<int>(k);
      if (f.exp < 0 && f.base.is_structurally_zero()) fail("division by zero");
    }
    return f;
  }

  Expr number() {
    mpz_class num = 0;
    while (at_digit()) num = num * 10 + (s_[pos_++] - '0');
    mpz_class den = 1;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      if (!at_digit()) fail("expected digit after decimal point");
      while (at_digit()) {
        num = num * 10 + (s_[pos_++] - '0');
        den *= 10;
      }
    }
    Rational q(num, den);
    q.canonicalize();
    return Expr(q);
  }

  Expr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unexpected character '") + c + "'");

    std::size_t start = pos_;
    std::size_t letters_end = pos_;
    while (letters_end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[letters_end]))) ++letters_end;
    std::string letters(s_.substr(start, letters_end - start));
    std::size_t word_end = letters_end;
    while (word_end < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[word_end])) || s_[word_end] == '_')) {
      ++word_end;
    }
    std::string word(s_.substr(start, word_end - start));
    bool digits_follow = letters_end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[letters_end]));

    if (letters == "x" && digits_follow && !sig_.symbols.count(word)) {
      pos_ = letters_end;
      long i = integer();
      if (i < 1 || static_cast<std::size_t>(i) > sig_.n) fail_at("base variable " + word + " outside signature", start);
      return Expr::base(static_cast<int>(i));
    }
    if (letters == "u" && digits_follow && !sig_.symbols.count(word)) {
      pos_ = letters_end;
      long comp = integer();
      expect('[');
      std::vector<int> alpha;
      alpha.push_back(static_cast<int>(integer()));
      while (eat(',')) alpha.push_back(static_cast<int>(integer()));
      expect(']');
      if (comp < 1 || comp > sig_.m) fail_at("jet component " + std::to_string(comp) + " outside signature", start);
      if (alpha.size() != sig_.n) fail_at("jet multiindex has wrong dimension", start);
      return Expr::jet(static_cast<int>(comp), MultiIndex(std::move(alpha)));
    }
    static const std::pair<const char*, FuncKind> funcs[] = {{"sin", FuncKind::Sin},
                                                             {"cos", FuncKind::Cos},
                                                             {"exp", FuncKind::Exp},
                                                             {"ln", FuncKind::Ln},
                                                             {"sqrt", FuncKind::Sqrt}};
    for (const auto& [name, kind] : funcs) {
      if (word == name) {
        pos_ = word_end;
        skip();
        if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '(' after " + word);
        ++pos_;
        Expr arg = expr();
        expect(')');
        return Expr::func(kind, arg);
      }
    }
    if (sig_.symbols.count(word)) {
      pos_ = word_end;
      return Expr::symbol(word);
    }
    fail_at("unknown identifier '" + word + "'", start);
  }

  std::string_view s_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  return p.run();
}

}  // namespace lbjet
