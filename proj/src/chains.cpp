#include "downcross/chains.hpp"

#include <algorithm>
#include <stdexcept>

namespace downcross {

StopOutcome run_stop(Kernel k, std::int64_t start, StopKind stop, std::int64_t param,
                     std::int64_t cap, SplitMix64& rng, ChainTrajectory* trajectory) {
  if (cap < 1) throw std::invalid_argument("run_stop: cap must be >= 1");
  if ((stop == StopKind::SigmaH) && k != Kernel::Pi)
    throw std::invalid_argument("run_stop: sigma is defined for Pi chains only");

  ChainTrajectory local;
  ChainTrajectory& traj = trajectory ? *trajectory : local;
  traj.kernel = k;
  traj.start = start;
  traj.states.assign(1, start);

  StopOutcome out;
  if (stop == StopKind::ThetaPrimeU && start <= param) {  // theta' is checked at n = 0
    out.status = StopStatus::Stopped;
    out.time = 0;
    out.value = start;
    traj.terminated_by = ChainEnd::Stopped;
    return out;
  }

  std::int64_t state = start;
  for (std::int64_t n = 1; n <= cap; ++n) {
    state = sample_step(k, state, rng);
    traj.states.push_back(state);
    const bool hit = (stop == StopKind::ThetaPrimeU) ? (state <= param) : (state >= param);
    if (hit) {
      out.status = StopStatus::Stopped;
      out.time = n;
      out.value = state;
      traj.terminated_by = ChainEnd::Stopped;
      return out;
    }
    if (k == Kernel::Pi && state == 0) {
      // absorbed below the level: the level is never reached
      out.status = StopStatus::Infinite;
      traj.terminated_by = ChainEnd::Extinct;
      return out;
    }
  }
  out.status = StopStatus::Capped;
  traj.terminated_by = ChainEnd::Cap;
  return out;
}

ChainTrajectory run_horizon(Kernel k, std::int64_t start, std::int64_t horizon, SplitMix64& rng) {
  ChainTrajectory traj;
  traj.kernel = k;
  traj.start = start;
  traj.states.assign(1, start);
  std::int64_t state = start;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    state = sample_step(k, state, rng);
    traj.states.push_back(state);
  }
  traj.terminated_by = ChainEnd::Horizon;
  return traj;
}

ChainTrajectory run_to_extinction(std::int64_t start, std::int64_t cap, SplitMix64& rng) {
  ChainTrajectory traj;
  traj.kernel = Kernel::Pi;
  traj.start = start;
  traj.states.assign(1, start);
  std::int64_t state = start;
  for (std::int64_t n = 1; n <= cap; ++n) {
    if (state == 0) break;
    state = sample_step(Kernel::Pi, state, rng);
    traj.states.push_back(state);
  }
  traj.terminated_by = (state == 0) ? ChainEnd::Extinct : ChainEnd::Cap;
  return traj;
}

PatchedProfile build_profile(int x, std::int64_t h, std::int64_t cap, SplitMix64& rng) {
  if (h < 1) throw std::invalid_argument("build_profile: h must be >= 1");
  PatchedProfile prof;
  prof.x = x;
  prof.h = h;

  if (x <= -1) {
    // R piece over y = x..-1, then Y' rightward from R_{-x-1}, Y leftward from h-1.
    ChainTrajectory r = run_horizon(Kernel::RhoStar, h, -static_cast<std::int64_t>(x) - 1, rng);
    ChainTrajectory yp = run_to_extinction(r.states.back(), cap, rng);
    ChainTrajectory yl = run_to_extinction(h - 1, cap, rng);
    prof.capped = (yp.terminated_by == ChainEnd::Cap) || (yl.terminated_by == ChainEnd::Cap);
    prof.coupling_start = yp.states.front();
    prof.coupling_site_value = r.states.back();

    const std::int64_t left = static_cast<std::int64_t>(yl.states.size()) - 1;  // sites x-1 .. x-left
    const std::int64_t right = static_cast<std::int64_t>(yp.states.size()) - 1;  // sites -1 .. -1+right
    prof.y_min = x - left;
    prof.values.assign(static_cast<std::size_t>((-1 + right) - prof.y_min + 1), 0);
    auto set = [&](std::int64_t y, std::int64_t v) {
      prof.values[static_cast<std::size_t>(y - prof.y_min)] = v;
    };
    for (std::int64_t n = 1; n < static_cast<std::int64_t>(yl.states.size()); ++n)
      set(x - n, yl.states[static_cast<std::size_t>(n)]);
    for (std::int64_t n = 0; n < static_cast<std::int64_t>(r.states.size()); ++n)
      set(x + n, r.states[static_cast<std::size_t>(n)]);
    for (std::int64_t n = 0; n < static_cast<std::int64_t>(yp.states.size()); ++n)
      set(-1 + n, yp.states[static_cast<std::size_t>(n)]);
  } else {
    // Z piece over y = x-1..0, Y rightward from h at y = x, Y' leftward from Z_x.
    // For x = 0 there is no Z piece and Y' starts from h-1, covering y <= -1.
    ChainTrajectory z = run_horizon(Kernel::Rho, h - 1, x, rng);
    ChainTrajectory yp = run_to_extinction(z.states.back(), cap, rng);
    ChainTrajectory yr = run_to_extinction(h, cap, rng);
    prof.capped = (yp.terminated_by == ChainEnd::Cap) || (yr.terminated_by == ChainEnd::Cap);
    prof.coupling_start = yp.states.front();
    prof.coupling_site_value = (x >= 1) ? z.states.back() : yp.states.front();

    const std::int64_t left = static_cast<std::int64_t>(yp.states.size()) - 1;  // y' covers 0 .. -left
    const std::int64_t right = static_cast<std::int64_t>(yr.states.size()) - 1;
    prof.y_min = -left;
    prof.values.assign(static_cast<std::size_t>((x + right) - prof.y_min + 1), 0);
    auto set = [&](std::int64_t y, std::int64_t v) {
      prof.values[static_cast<std::size_t>(y - prof.y_min)] = v;
    };
    for (std::int64_t n = 0; n < static_cast<std::int64_t>(yp.states.size()); ++n) {
      const std::int64_t y = -n;
      if (x == 0 && y == 0) continue;  // y = 0 belongs to the Y piece (value h)
      set(y, yp.states[static_cast<std::size_t>(n)]);
    }
    for (std::int64_t n = 1; n < static_cast<std::int64_t>(z.states.size()); ++n)
      set(x - n, z.states[static_cast<std::size_t>(n)]);
    for (std::int64_t n = 0; n < static_cast<std::int64_t>(yr.states.size()); ++n)
      set(x + n, yr.states[static_cast<std::size_t>(n)]);
  }
  return prof;
}

const char* event_family_name(EventFamily f) {
  switch (f) {
    case EventFamily::A: return "A";
    case EventFamily::APrime: return "A'";
    case EventFamily::B: return "B";
    case EventFamily::C: return "C";
    case EventFamily::CPrime: return "C'";
    case EventFamily::D: return "D";
  }
  return "?";
}

EventCheck detect_event(const ChainTrajectory& t, EventFamily family, std::int64_t h,
                        std::int64_t p, std::int64_t horizon) {
  const bool finite_window = (family == EventFamily::B || family == EventFamily::D);
  std::int64_t last = static_cast<std::int64_t>(t.states.size()) - 1;
  if (finite_window) {
    if (horizon < 0) throw std::invalid_argument("detect_event: B/D need a horizon");
    if (horizon > last) return EventCheck::Rejected;  // trajectory too short
    last = horizon;
  } else {
    if (t.terminated_by != ChainEnd::Extinct) return EventCheck::Rejected;
  }
  std::int64_t hits = 0;
  for (std::int64_t n = 1; n <= last; ++n) {
    const std::int64_t v = t.states[static_cast<std::size_t>(n)];
    if (v > h) return EventCheck::False;
    if (v == h) ++hits;
  }
  return hits == p ? EventCheck::True : EventCheck::False;
}

}  // namespace downcross
