#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "downcross/kernels.hpp"
#include "downcross/rng.hpp"

namespace downcross {

// First passage to level >= h (sigma/tau families, checked at n >= 1) or
// first drop to <= u (theta', checked at n >= 0).
enum class StopKind { SigmaH, TauH, TauPrimeH, ThetaPrimeU };

enum class StopStatus { Stopped, Infinite, Capped };

struct StopOutcome {
  StopStatus status = StopStatus::Capped;
  std::int64_t time = 0;                  // meaningful only when Stopped
  std::optional<std::int64_t> value;      // chain value at the stopping time
};

enum class ChainEnd { Extinct, Horizon, Stopped, Cap };

struct ChainTrajectory {
  Kernel kernel = Kernel::Pi;
  std::int64_t start = 0;
  std::vector<std::int64_t> states;  // states[n] = X_n, states[0] = start
  ChainEnd terminated_by = ChainEnd::Cap;
};

// Runs the chain until the stopping rule fires, extinction certifies
// sigma = infinity (Pi kernel only), or the step cap binds.
// `param` is h for the level rules and u for ThetaPrimeU.
StopOutcome run_stop(Kernel k, std::int64_t start, StopKind stop, std::int64_t param,
                     std::int64_t cap, SplitMix64& rng, ChainTrajectory* trajectory = nullptr);

// Runs the chain for exactly `horizon` steps (B/D event input).
ChainTrajectory run_horizon(Kernel k, std::int64_t start, std::int64_t horizon, SplitMix64& rng);

// Runs a Pi chain from `start` to extinction; Cap if it outlives cap steps.
ChainTrajectory run_to_extinction(std::int64_t start, std::int64_t cap, SplitMix64& rng);

// One realization of the patched site profile whose law equals the
// downcrossing local-time profile at the inverse local time T_D(x,h):
// Delta for x <= -1 (R/Y/Y' pieces), Gamma for x >= 0 (Z/Y/Y' pieces),
// with the x = -1 and x = 0 boundary modifications.
struct PatchedProfile {
  int x = 0;
  std::int64_t h = 0;
  std::int64_t y_min = 0;  // values[k] = profile at site y_min + k
  std::vector<std::int64_t> values;
  bool capped = false;

  // segment boundary replays for the patching-consistency checks
  std::int64_t coupling_start = 0;  // Y'_0, equals R_{-x-1} resp. Z_x (h / h-1 at the boundary cases)
  std::int64_t coupling_site_value = 0;  // profile value at the site Y'_0 overlays (y = -1 resp. y = 0)

  std::int64_t at(std::int64_t y) const {
    if (y < y_min || y >= y_min + static_cast<std::int64_t>(values.size())) return 0;
    return values[static_cast<std::size_t>(y - y_min)];
  }
};

PatchedProfile build_profile(int x, std::int64_t h, std::int64_t cap, SplitMix64& rng);

// Event families over chain trajectories: the level-h tie events.
//   A / APrime / C / CPrime: over the whole trajectory (must end Extinct),
//     max_{n>=1} X_n <= h and #{n>=1 : X_n = h} = p.
//   B / D: over n in [1, horizon] only.
enum class EventFamily { A, APrime, B, C, CPrime, D };

const char* event_family_name(EventFamily f);

enum class EventCheck { True, False, Rejected };

EventCheck detect_event(const ChainTrajectory& t, EventFamily family, std::int64_t h,
                        std::int64_t p, std::int64_t horizon = -1);

}  // namespace downcross
