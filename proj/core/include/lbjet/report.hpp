#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lbjet/expr.hpp"

namespace lbjet {

/// An operation was called outside its stated precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Verdict { Pass, Fail, Unknown, Skipped };
enum class ProofMode { Symbolic, Sampled };

const char* to_string(Verdict v);
const char* to_string(ProofMode m);

/// One named check. `residual` is the largest numeric residual seen (0 for
/// purely symbolic checks); `witness` names the first failing item.
struct CheckEntry {
  std::string name;
  Verdict verdict = Verdict::Pass;
  ProofMode mode = ProofMode::Symbolic;
  double residual = 0.0;
  std::string witness;
  std::vector<std::string> details;

  bool passed() const { return verdict == Verdict::Pass; }
};

struct CheckReport {
  std::vector<CheckEntry> entries;

  void add(CheckEntry e) { entries.push_back(std::move(e)); }
  /// Fail dominates Unknown dominates Pass; skipped entries are ignored.
  Verdict overall() const;
  const CheckEntry* find(const std::string& name) const;
};

/// Folds a stream of zero tests into one entry: any nonzero fails, otherwise
/// any unknown leaves the verdict unknown (flagged as sampled evidence).
class ZeroTally {
 public:
  ZeroTally(std::string name, ZeroTestOptions opts = {}) : opts_(opts) { entry_.name = std::move(name); }

  /// Returns the status so callers can react to individual items.
  ZeroStatus expect_zero(const Expr& e, const std::string& label);
  void note(std::string line) { entry_.details.push_back(std::move(line)); }
  const CheckEntry& entry() const { return entry_; }
  CheckEntry take() { return std::move(entry_); }

 private:
  ZeroTestOptions opts_;
  CheckEntry entry_;
};

}  // namespace lbjet
