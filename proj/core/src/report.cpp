#include "lbjet/report.hpp"

namespace lbjet {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Unknown:
      return "unknown";
    case Verdict::Skipped:
      return "skipped";
  }
  return "?";
}

const char* to_string(ProofMode m) { return m == ProofMode::Symbolic ? "symbolic" : "sampled"; }

Verdict CheckReport::overall() const {
  Verdict v = Verdict::Pass;
  for (const auto& e : entries) {
    if (e.verdict == Verdict::Fail) return Verdict::Fail;
    if (e.verdict == Verdict::Unknown) v = Verdict::Unknown;
  }
  return v;
}

const CheckEntry* CheckReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

ZeroStatus ZeroTally::expect_zero(const Expr& e, const std::string& label) {
  ZeroStatus z = is_zero(e, opts_);
  if (z == ZeroStatus::ProvablyZero) return z;
  if (z == ZeroStatus::ProvablyNonzero) {
    if (entry_.verdict != Verdict::Fail) entry_.witness = label;
    entry_.verdict = Verdict::Fail;
    entry_.details.push_back(label + ": nonzero residual " + e.to_string());
  } else {
    entry_.mode = ProofMode::Sampled;
    if (entry_.verdict == Verdict::Pass) {
      entry_.verdict = Verdict::Unknown;
      entry_.witness = label;
    }
    entry_.details.push_back(label + ": zero test inconclusive");
  }
  return z;
}

}  // namespace lbjet
