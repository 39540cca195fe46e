#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>

#include <mpfr.h>

#include "deplab/errors.hpp"

namespace deplab::config {

namespace detail {

inline std::atomic<mpfr_prec_t>& precision_slot() {
  static std::atomic<mpfr_prec_t> slot{256};
  return slot;
}

inline std::atomic<long>& tolerance_slot() {
  static std::atomic<long> slot{100};
  return slot;
}

inline std::int64_t initial_expansion_cap() {
  // The environment variable is consulted once, lazily, on first use; later
  // changes go through set_expansion_cap.
  if (const char* env = std::getenv("DEPLAB_CAP_EXPANSION")) {
    char* end = nullptr;
    const long long parsed = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) return parsed;
  }
  return 1'000'000;
}

inline std::atomic<std::int64_t>& expansion_cap_slot() {
  static std::atomic<std::int64_t> slot{initial_expansion_cap()};
  return slot;
}

inline std::atomic<int>& enumeration_cap_slot() {
  static std::atomic<int> slot{6};
  return slot;
}

inline std::atomic<int>& threads_slot() {
  static std::atomic<int> slot{0};  // 0 = use hardware concurrency
  return slot;
}

}  // namespace detail

// Working precision, in bits, for floating-point scalars.  Floor of 128.
inline mpfr_prec_t precision() { return detail::precision_slot().load(); }

inline void set_precision(mpfr_prec_t bits) {
  if (bits < 128) throw usage_error("precision must be at least 128 bits");
  detail::precision_slot().store(bits);
}

// Comparison tolerance for floating-point scalars is 2^-tolerance_log2().
inline long tolerance_log2() { return detail::tolerance_slot().load(); }

inline void set_tolerance_log2(long bits) {
  if (bits < 1) throw usage_error("tolerance exponent must be positive");
  detail::tolerance_slot().store(bits);
}

// Cap on the number of colorings expanded when converting a coloring model to
// an explicit distribution.  Overridable via the DEPLAB_CAP_EXPANSION
// environment variable (read once) or set_expansion_cap.
inline std::int64_t expansion_cap() { return detail::expansion_cap_slot().load(); }

inline void set_expansion_cap(std::int64_t cap) {
  if (cap < 1) throw usage_error("expansion cap must be positive");
  detail::expansion_cap_slot().store(cap);
}

// Cap on the vertex count for full enumeration of all graphs on n vertices
// (2^(n(n-1)/2) graphs).  Default 6; raise deliberately.
inline int enumeration_cap() { return detail::enumeration_cap_slot().load(); }

inline void set_enumeration_cap(int n) {
  if (n < 1 || n > 16) throw usage_error("enumeration cap must be in [1,16]");
  detail::enumeration_cap_slot().store(n);
}

// Worker-thread count for sampling loops.  Affects wall time only, never
// results.  Zero means "use hardware concurrency".
inline int threads() {
  const int configured = detail::threads_slot().load();
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

inline void set_threads(int count) {
  if (count < 0) throw usage_error("thread count must be non-negative");
  detail::threads_slot().store(count);
}

}  // namespace deplab::config
