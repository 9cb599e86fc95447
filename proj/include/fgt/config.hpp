#pragma once

#include <atomic>
#include <cstddef>

namespace fgt {

// Runtime limits. Several algorithms are exhaustive by design; these bounds
// turn silent blowups into explicit CapacityErrors.
struct Limits {
  // Largest group whose elements may be listed exhaustively.
  unsigned long long enumeration_bound = 20000;
  // Largest ambient group for full subgroup enumeration.
  unsigned long long subgroup_bound = 256;
  // Largest combined degree for direct products.
  unsigned degree_cap = 64;
  // Campaign guards: instances per (group, theorem), lemma parameter pool
  // size, and sampled triples per group for the subgroup-triple identity.
  std::size_t campaign_instance_cap = 50000;
  std::size_t pool_cap = 128;
  std::size_t triple_cap = 150;
};

inline Limits& limits() {
  static Limits l;
  return l;
}

// Restores the previous limits on scope exit. Test helper.
class ScopedLimits {
public:
  ScopedLimits() : saved_(limits()) {}
  ~ScopedLimits() { limits() = saved_; }
  ScopedLimits(const ScopedLimits&) = delete;
  ScopedLimits& operator=(const ScopedLimits&) = delete;

private:
  Limits saved_;
};

// Instrumentation counters. pi_core_evals counts full evaluations of the
// chief-pair scan; cache hits of any kind do not bump it.
struct Stats {
  std::atomic<unsigned long long> pi_core_evals{0};
  std::atomic<unsigned long long> disk_cache_hits{0};
  std::atomic<unsigned long long> disk_cache_writes{0};

  void reset() {
    pi_core_evals = 0;
    disk_cache_hits = 0;
    disk_cache_writes = 0;
  }
};

inline Stats& stats() {
  static Stats s;
  return s;
}

} // namespace fgt
