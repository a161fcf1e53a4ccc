#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbjet/expo2_check.hpp"
#include "lbjet/lb_field.hpp"

namespace lbjet::cli {

/// Malformed spec file; `line` is 1-based (0 when not tied to a line).
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& what, int line = 0) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Flat key = value file. Values may be double-quoted; `;` and newlines both
/// end an entry; `#` starts a comment outside quotes.
///
///   n = 1
///   m = 2
///   xi1 = "0"
///   eta0_1 = "u2[1]/u1[1]"
///   eta0_2 = "(u2[1]/u1[1])^2/2"
///
/// A file with phi1..phim instead of xi/eta0 describes candidate eps0 functions.
struct FieldSpecFile {
  enum class Kind { Field, Phi };

  Kind kind = Kind::Field;
  std::size_t n = 1;
  int m = 1;
  std::vector<std::string> xi, eta0, phi;
  std::string name;
  std::string origin;
  /// "x, y0_1, y0_2, y1_1, y1_2" for the n = 1, m = 2 checks.
  std::optional<std::string> point;
  /// Source line of each key, for error messages.
  std::map<std::string, int> key_lines;

  static FieldSpecFile parse(const std::string& text);
  static FieldSpecFile load(const std::string& path);

  /// Parses every expression; errors carry the key and the offset.
  LBField field() const;
  std::vector<Expr> phis() const;
  std::optional<JetPoint> jet_point() const;

  std::string to_text() const;
};

/// Raw file contents.
std::string read_file(const std::string& path);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace lbjet::cli
