#pragma once

// Deterministic sampling helpers. Everything goes through mt19937_64 bit
// output directly so that sequences do not depend on the standard library's
// distribution implementations.

#include <cstdint>
#include <random>

#include "lbjet/poly.hpp"

namespace lbjet {

using SampleRng = std::mt19937_64;

/// Uniform in [0, 1).
inline double uniform01(SampleRng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform in [lo, hi).
inline double uniform(SampleRng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Integer in [lo, hi].
inline std::int64_t uniform_int(SampleRng& rng, std::int64_t lo, std::int64_t hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

/// p/q in [-bound, bound] with q in [1, max_den].
inline Rational random_rational(SampleRng& rng, std::int64_t max_den = 1000, std::int64_t bound = 4) {
  std::int64_t q = uniform_int(rng, 1, max_den);
  std::int64_t p = uniform_int(rng, -bound * q, bound * q);
  Rational r(static_cast<long>(p), static_cast<unsigned long>(q));
  r.canonicalize();
  return r;
}

/// Rational in [lo, hi] with denominator `den`.
inline Rational random_rational_in(SampleRng& rng, long lo, long hi, long den = 1000) {
  std::int64_t p = uniform_int(rng, lo * den, hi * den);
  Rational r(static_cast<long>(p), static_cast<unsigned long>(den));
  r.canonicalize();
  return r;
}

}  // namespace lbjet
