#pragma once

#include <atomic>
#include <stdexcept>
#include <string>

namespace qzv {

// Error taxonomy. Everything thrown by the library derives from qzv::error.
//  - domain_error:      mathematically invalid input (non-admissible index, [0], ...)
//  - config_error:      incompatible contexts / truncation specs / bad options
//  - truncation_error:  an operation needs more truncation orders than available
//  - summability_error: a series summation failed to terminate under truncation
//  - assertion_error:   an internal structural invariant failed (a bug, never
//                       expected to fire on valid input)
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct domain_error : error {
  using error::error;
};
struct config_error : error {
  using error::error;
};
struct truncation_error : error {
  using error::error;
};
struct summability_error : error {
  using error::error;
};
struct assertion_error : error {
  using error::error;
};

// Counters for structural invariant checks, so test drivers can report both
// "how many invariants were exercised" and "none fired".
namespace stats {
inline std::atomic<long long>& invariants_checked() {
  static std::atomic<long long> n{0};
  return n;
}
inline std::atomic<long long>& invariants_failed() {
  static std::atomic<long long> n{0};
  return n;
}
}  // namespace stats

// Structural invariant check: counted, throwing. Use for conditions that are
// theorems about the computation (exact divisibility, vanishing tails,
// Laurent-floor bounds) rather than user-input validation.
inline void structural_check(bool ok, const std::string& what) {
  stats::invariants_checked().fetch_add(1, std::memory_order_relaxed);
  if (!ok) {
    stats::invariants_failed().fetch_add(1, std::memory_order_relaxed);
    throw assertion_error("structural invariant violated: " + what);
  }
}

}  // namespace qzv
