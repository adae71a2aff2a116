#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "downcross/kernels.hpp"

namespace downcross {

// Exact absorption quantities of the first-passage time
//   stop := min{ n >= 1 : X_n >= h }
// for a chain with the given kernel started at `start` (0 <= start <= h).
// States {0..h-1} are transient; for Pi, state 0 is additionally absorbing
// and certifies stop = infinity.
struct HittingSolution {
  Kernel kernel;
  std::int64_t h = 0;
  std::int64_t start = 0;

  double p_never = 0.0;    // P(stop = infinity); nonzero only for Pi
  double p_exact_h = 0.0;  // P(X_stop = h)
  double e_time = 0.0;     // E[stop]; valid only when e_time_valid
  bool e_time_valid = false;

  // u -> P(X_stop = u) for u >= h, enumerated until the remaining stop-value
  // mass drops below 1e-12; the remainder is reported, never dropped.
  std::vector<std::pair<std::int64_t, double>> overshoot_pmf;
  double truncated_mass = 0.0;
};

// Dense linear solve over the transient states.  Requires 1 <= h <= 1024 and
// 0 <= start <= h.  Expected-time queries are rejected (e_time_valid = false)
// when p_never > 0.
HittingSolution solve_hitting(Kernel k, std::int64_t h, std::int64_t start);

}  // namespace downcross
