#include "downcross/walk.hpp"

#include <algorithm>
#include <stdexcept>

namespace downcross {

namespace {
constexpr int kInitialHalfRange = 1 << 10;
}

WalkLedger::WalkLedger()
    : offset_(kInitialHalfRange),
      up_(2 * kInitialHalfRange, 0),
      down_(2 * kInitialHalfRange, 0) {}

std::int64_t WalkLedger::up(int x) const {
  const std::int64_t idx = static_cast<std::int64_t>(x) + offset_;
  if (idx < 0 || idx >= static_cast<std::int64_t>(up_.size())) return 0;
  return up_[static_cast<std::size_t>(idx)];
}

std::int64_t WalkLedger::down(int x) const {
  const std::int64_t idx = static_cast<std::int64_t>(x) + offset_;
  if (idx < 0 || idx >= static_cast<std::int64_t>(down_.size())) return 0;
  return down_[static_cast<std::size_t>(idx)];
}

void WalkLedger::ensure_site(int x) {
  std::int64_t idx = static_cast<std::int64_t>(x) + offset_;
  if (idx >= 1 && idx + 1 < static_cast<std::int64_t>(up_.size())) return;
  std::size_t half = up_.size();
  while (static_cast<std::int64_t>(half) < std::abs(static_cast<std::int64_t>(x)) + 2) half *= 2;
  std::vector<std::int32_t> new_up(2 * half, 0), new_down(2 * half, 0);
  const std::int64_t new_offset = static_cast<std::int64_t>(half);
  for (std::size_t i = 0; i < up_.size(); ++i) {
    new_up[static_cast<std::size_t>(i - offset_ + new_offset)] = up_[i];
    new_down[static_cast<std::size_t>(i - offset_ + new_offset)] = down_[i];
  }
  up_ = std::move(new_up);
  down_ = std::move(new_down);
  offset_ = static_cast<int>(new_offset);
}

WalkLedger::Crossing WalkLedger::apply(int step) {
  if (step != 1 && step != -1) throw std::invalid_argument("WalkLedger::apply: step must be +/-1");
  const int site = position_ + step;
  ensure_site(site);
  const std::size_t idx = static_cast<std::size_t>(site + offset_);
  if (step == 1)
    ++up_[idx];
  else
    ++down_[idx];
  position_ = site;
  min_site_ = std::min(min_site_, site);
  max_site_ = std::max(max_site_, site);
  ++n_;
  return Crossing{site, step == -1};
}

std::int64_t WalkLedger::recount_total() const {
  std::int64_t total = 0;
  for (int x = min_site_; x <= max_site_; ++x) total += up(x) + down(x);
  return total;
}

const char* favorite_statistic_name(FavoriteStatistic s) {
  switch (s) {
    case FavoriteStatistic::Down: return "down";
    case FavoriteStatistic::Site: return "site";
    case FavoriteStatistic::Edge: return "edge";
    case FavoriteStatistic::OneSide: return "oneside";
  }
  return "?";
}

bool FavoriteTracker::contains(int idx) const {
  return std::find(argmax_.begin(), argmax_.end(), idx) != argmax_.end();
}

FavoriteTracker::Change FavoriteTracker::observe(int idx, std::int64_t prev_value,
                                                 std::int64_t new_value) {
  if (new_value == prev_value) return Change::None;  // the other counter was larger (OneSide)
  if (new_value > max_) {
    max_ = new_value;
    argmax_.clear();
    argmax_.push_back(idx);
    return Change::Reset;
  }
  if (new_value == max_) {
    argmax_.push_back(idx);
    return Change::Pushed;
  }
  return Change::None;
}

namespace {

struct StepObservation {
  FavoriteTracker::Change change = FavoriteTracker::Change::None;
  int index = 0;
};

// Feeds one applied step to a tracker.  prev_* are the counters before the
// step; the crossing tells which one moved.
StepObservation observe_step(FavoriteTracker& tracker, const WalkLedger& ledger,
                             const WalkLedger::Crossing& c, std::int64_t prev_up,
                             std::int64_t prev_down, std::int64_t prev_edge) {
  StepObservation out;
  switch (tracker.statistic()) {
    case FavoriteStatistic::Down:
      if (!c.downcross) return out;
      out.index = c.site;
      out.change = tracker.observe(c.site, prev_down, ledger.down(c.site));
      return out;
    case FavoriteStatistic::Site:
      out.index = c.site;
      out.change = tracker.observe(c.site, prev_up + prev_down, ledger.site_local_time(c.site));
      return out;
    case FavoriteStatistic::Edge: {
      const int edge = c.downcross ? c.site + 1 : c.site;
      out.index = edge;
      out.change = tracker.observe(edge, prev_edge, ledger.edge_local_time(edge));
      return out;
    }
    case FavoriteStatistic::OneSide: {
      out.index = c.site;
      const std::int64_t prev = std::max(prev_up, prev_down);
      const std::int64_t now = std::max(ledger.up(c.site), ledger.down(c.site));
      out.change = tracker.observe(c.site, prev, now);
      return out;
    }
  }
  return out;
}

}  // namespace

std::optional<EventRecord> advance(WalkLedger& ledger, std::span<FavoriteTracker> trackers,
                                   int step) {
  const int site = ledger.position() + step;
  const std::int64_t prev_up = ledger.up(site);
  const std::int64_t prev_down = ledger.down(site);
  const int edge = (step == -1) ? site + 1 : site;
  const std::int64_t prev_edge = ledger.edge_local_time(edge);

  const WalkLedger::Crossing c = ledger.apply(step);

  std::optional<EventRecord> event;
  for (FavoriteTracker& tracker : trackers) {
    const StepObservation obs = observe_step(tracker, ledger, c, prev_up, prev_down, prev_edge);
    if (tracker.statistic() == FavoriteStatistic::Down && c.downcross &&
        obs.change != FavoriteTracker::Change::None) {
      event = EventRecord{ledger.steps(), c.site, static_cast<int>(tracker.argmax().size())};
    }
  }
  return event;
}

std::optional<EventRecord> advance(WalkLedger& ledger, std::span<FavoriteTracker> trackers,
                                   SplitMix64& rng) {
  return advance(ledger, trackers, rng.fair_step());
}

std::pair<std::int64_t, std::vector<int>> brute_force_argmax(const WalkLedger& ledger,
                                                             FavoriteStatistic s) {
  std::int64_t best = 0;
  std::vector<int> argmax;
  const int lo = ledger.min_site();
  const int hi = ledger.max_site() + (s == FavoriteStatistic::Edge ? 1 : 0);
  for (int x = lo; x <= hi; ++x) {
    std::int64_t v = 0;
    switch (s) {
      case FavoriteStatistic::Down: v = ledger.down(x); break;
      case FavoriteStatistic::Site: v = ledger.site_local_time(x); break;
      case FavoriteStatistic::Edge: v = ledger.edge_local_time(x); break;
      case FavoriteStatistic::OneSide: v = std::max(ledger.up(x), ledger.down(x)); break;
    }
    if (v == 0) continue;  // zero max keeps the empty-set convention
    if (v > best) {
      best = v;
      argmax.assign(1, x);
    } else if (v == best) {
      argmax.push_back(x);
    }
  }
  return {best, argmax};
}

bool check_prop_1_2(const WalkLedger& ledger) {
  auto [down_max, down_argmax] = brute_force_argmax(ledger, FavoriteStatistic::Down);
  if (down_max == 0) return true;
  auto [edge_max, edge_argmax] = brute_force_argmax(ledger, FavoriteStatistic::Edge);
  for (int e : edge_argmax)
    if (std::find(down_argmax.begin(), down_argmax.end(), e - 1) == down_argmax.end())
      return false;
  return true;
}

InverseTimeResult inverse_down_time(int x, std::int64_t k, std::int64_t step_cap,
                                    SplitMix64& rng) {
  if (k < 1 || step_cap < 1)
    throw std::invalid_argument("inverse_down_time: k and step_cap must be >= 1");
  InverseTimeResult res;
  for (std::int64_t n = 1; n <= step_cap; ++n) {
    const WalkLedger::Crossing c = res.ledger.apply(rng.fair_step());
    if (c.downcross && c.site == x && res.ledger.down(x) == k) {
      res.time = n;
      return res;
    }
  }
  res.truncated = true;
  return res;
}

ProfileSample downcross_profile(int x, std::int64_t h, int window_lo, int window_hi,
                                std::int64_t step_cap, SplitMix64& rng) {
  if (!(window_lo <= x && x <= window_hi))
    throw std::invalid_argument("downcross_profile: window must contain x");
  ProfileSample out;
  InverseTimeResult res = inverse_down_time(x, h, step_cap, rng);
  if (res.truncated) {
    out.truncated = true;
    return out;
  }
  out.values.reserve(static_cast<std::size_t>(window_hi - window_lo + 1));
  for (int y = window_lo; y <= window_hi; ++y) out.values.push_back(res.ledger.down(y));
  for (int y = res.ledger.min_site(); y < window_lo; ++y)
    if (res.ledger.down(y) > 0) out.outside_window_support = true;
  for (int y = window_hi + 1; y <= res.ledger.max_site(); ++y)
    if (res.ledger.down(y) > 0) out.outside_window_support = true;
  return out;
}

FEventReport count_f_events(std::int64_t steps, std::uint64_t seed, std::int64_t check_interval,
                            bool keep_events) {
  if (steps < 1) throw std::invalid_argument("count_f_events: steps must be >= 1");
  FEventReport report;
  report.steps = steps;
  report.seed = seed;

  SplitMix64 rng(seed);
  WalkLedger ledger;
  std::vector<FavoriteTracker> trackers;
  trackers.emplace_back(FavoriteStatistic::Down);
  trackers.emplace_back(FavoriteStatistic::Site);
  trackers.emplace_back(FavoriteStatistic::Edge);
  trackers.emplace_back(FavoriteStatistic::OneSide);
  FavoriteTracker& down_tracker = trackers[0];
  FavoriteTracker& edge_tracker = trackers[2];

  bool prop12_ok = true;
  auto full_recheck = [&]() {
    if (down_tracker.max_value() == 0) return true;
    for (int e : edge_tracker.argmax())
      if (!down_tracker.contains(e - 1)) return false;
    return true;
  };

  for (std::int64_t n = 1; n <= steps; ++n) {
    const int step = rng.fair_step();
    const int site = ledger.position() + step;
    const std::int64_t prev_up = ledger.up(site);
    const std::int64_t prev_down = ledger.down(site);
    const int edge = (step == -1) ? site + 1 : site;
    const std::int64_t prev_edge = ledger.edge_local_time(edge);

    const WalkLedger::Crossing c = ledger.apply(step);

    FavoriteTracker::Change down_change = FavoriteTracker::Change::None;
    FavoriteTracker::Change edge_change = FavoriteTracker::Change::None;
    for (FavoriteTracker& tracker : trackers) {
      const StepObservation obs = observe_step(tracker, ledger, c, prev_up, prev_down, prev_edge);
      if (tracker.statistic() == FavoriteStatistic::Down) down_change = obs.change;
      if (tracker.statistic() == FavoriteStatistic::Edge) edge_change = obs.change;
    }

    if (c.downcross && down_change != FavoriteTracker::Change::None) {
      const int r = static_cast<int>(down_tracker.argmax().size());
      ++report.f_counts[r];
      if (r == 4) ++report.d_counts[c.site];
      if (keep_events) report.events.push_back(EventRecord{n, c.site, r});
    }

    // Favorite-edge / favorite-downcrossing-site containment.  Only set
    // changes can flip the verdict: a shrink of either set or a stale-false
    // verdict forces a full recheck; a lone edge push needs just the new edge.
    if (down_change == FavoriteTracker::Change::Reset ||
        edge_change == FavoriteTracker::Change::Reset ||
        (down_change == FavoriteTracker::Change::Pushed && !prop12_ok)) {
      prop12_ok = full_recheck();
    } else if (edge_change == FavoriteTracker::Change::Pushed) {
      const bool kd_empty = down_tracker.max_value() == 0;
      prop12_ok = prop12_ok && (kd_empty || down_tracker.contains(edge - 1));
    }
    if (!prop12_ok) ++report.prop12_violations;

    if (check_interval > 0 && (n % check_interval == 0 || n == steps)) {
      ++report.conservation_checks;
      if (ledger.recount_total() != n) ++report.conservation_failures;
      // signed edge balance at a probe site (x >= 1):
      // xi_U(x) - xi_D(x-1) = 1 iff S_n >= x
      const int probe = std::max(1, (ledger.max_site() + 1) / 2);
      const std::int64_t diff = ledger.up(probe) - ledger.down(probe - 1);
      const std::int64_t want = ledger.position() >= probe ? 1 : 0;
      if (diff != want) ++report.edge_balance_failures;
    }
  }
  report.final_position = ledger.position();
  return report;
}

}  // namespace downcross
