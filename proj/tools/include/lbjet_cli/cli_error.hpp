#pragma once

#include <stdexcept>

namespace lbjet::cli {

/// Bad flags or arguments; reported on stderr with exit code 3.
class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lbjet::cli
