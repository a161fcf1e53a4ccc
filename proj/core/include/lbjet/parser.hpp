#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lbjet/expr.hpp"

namespace lbjet {

/// Jet-space signature (n, m) plus the named symbols a parse may use.
struct Signature {
  std::size_t n = 1;
  int m = 1;
  std::set<std::string> symbols;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' ['-'] int)?
///   atom   := number | 'x'int | 'u'int'['int(','int)*']' | func '(' expr ')' | symbol | '(' expr ')'
/// Numbers may carry a decimal part, which is read exactly.
Expr parse(std::string_view text, const Signature& sig);

}  // namespace lbjet
