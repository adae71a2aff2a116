#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "downcross/rng.hpp"

namespace downcross {

// Crossing counts of one walk realization.  Sparse-map semantics (counters
// default to 0 everywhere); stored as a recentered dense pair of arrays since
// the visited range grows like sqrt(n).
class WalkLedger {
 public:
  WalkLedger();

  std::int64_t steps() const { return n_; }
  int position() const { return position_; }
  int min_site() const { return min_site_; }
  int max_site() const { return max_site_; }

  std::int64_t up(int x) const;    // xi_U(x, n)
  std::int64_t down(int x) const;  // xi_D(x, n)
  std::int64_t site_local_time(int x) const { return up(x) + down(x); }
  // edge x spans x-1..x: L(x,n) = xi_U(x,n) + xi_D(x-1,n), derived, never stored
  std::int64_t edge_local_time(int x) const { return up(x) + down(x - 1); }

  struct Crossing {
    int site;         // site arrived at
    bool downcross;   // step was position-1
  };
  Crossing apply(int step);  // step in {+1, -1}

  // Sum of all crossing counters recomputed from storage; equals steps().
  std::int64_t recount_total() const;

 private:
  void ensure_site(int x);

  std::int64_t n_ = 0;
  int position_ = 0;
  int min_site_ = 0, max_site_ = 0;
  int offset_ = 0;
  std::vector<std::int32_t> up_, down_;
};

enum class FavoriteStatistic { Down, Site, Edge, OneSide };

const char* favorite_statistic_name(FavoriteStatistic s);

// Incrementally maintained (max value, argmax set) of one crossing statistic.
// Counters never decrease, so the argmax can only change at the index whose
// counter was just incremented; a site enters the set at a given max at most
// once, so plain push-backs stay duplicate-free.
class FavoriteTracker {
 public:
  enum class Change { None, Pushed, Reset };

  explicit FavoriteTracker(FavoriteStatistic s) : statistic_(s) {}

  FavoriteStatistic statistic() const { return statistic_; }
  std::int64_t max_value() const { return max_; }
  const std::vector<int>& argmax() const { return argmax_; }
  bool contains(int idx) const;

  Change observe(int idx, std::int64_t prev_value, std::int64_t new_value);

 private:
  FavoriteStatistic statistic_;
  std::int64_t max_ = 0;
  std::vector<int> argmax_;
};

// A new favorite downcrossing site appearing at time n on site x, tied with
// r-1 others (r = #K_D(n)).
struct EventRecord {
  std::int64_t n = 0;
  int x = 0;
  int r = 0;
};

// One walk step: updates the ledger and every tracker in O(1) and reports the
// f(r) event when the step is a downcrossing landing on a favorite
// downcrossing site (requires a Down tracker in the list to be observable).
std::optional<EventRecord> advance(WalkLedger& ledger, std::span<FavoriteTracker> trackers,
                                   int step);
std::optional<EventRecord> advance(WalkLedger& ledger, std::span<FavoriteTracker> trackers,
                                   SplitMix64& rng);

// Reference recomputation of (max, argmax) by scanning the ledger.
std::pair<std::int64_t, std::vector<int>> brute_force_argmax(const WalkLedger& ledger,
                                                             FavoriteStatistic s);

// For every favorite edge x, site x-1 is a favorite downcrossing site.
// Vacuously true while no downcrossing has happened (empty K_D convention).
bool check_prop_1_2(const WalkLedger& ledger);

struct InverseTimeResult {
  bool truncated = false;
  std::int64_t time = 0;  // T_D(x,k) when not truncated
  WalkLedger ledger;
};

// Runs a fresh walk until xi_D(x, n) = k, or step_cap binds (flagged, not an
// error; callers report truncation rates).
InverseTimeResult inverse_down_time(int x, std::int64_t k, std::int64_t step_cap,
                                    SplitMix64& rng);

struct ProfileSample {
  bool truncated = false;
  std::vector<std::int64_t> values;  // xi_D(y, T_D(x,h)) for y = window_lo..window_hi
  bool outside_window_support = false;
};

ProfileSample downcross_profile(int x, std::int64_t h, int window_lo, int window_hi,
                                std::int64_t step_cap, SplitMix64& rng);

struct FEventReport {
  std::int64_t steps = 0;
  std::uint64_t seed = 0;
  std::map<int, std::int64_t> f_counts;  // r -> event count
  std::map<int, std::int64_t> d_counts;  // x -> count of r = 4 events at x
  std::vector<EventRecord> events;
  std::int64_t prop12_violations = 0;
  std::int64_t conservation_checks = 0;
  std::int64_t conservation_failures = 0;
  std::int64_t edge_balance_failures = 0;
  int final_position = 0;
};

// Full instrumented run: all four trackers, f(r)/d(x) tallies, the favorite
// edge/downcrossing-site containment checked at every step, and periodic
// ledger sweeps.  Deterministic given the seed.
FEventReport count_f_events(std::int64_t steps, std::uint64_t seed,
                            std::int64_t check_interval = 10000, bool keep_events = true);

}  // namespace downcross
