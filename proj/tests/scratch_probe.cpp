// Temporary development probe; replaced by the real test suites.
#include <chrono>
#include <cstdio>

#include "downcross/harness.hpp"
#include "downcross/walk.hpp"

using namespace downcross;

static double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int main() {
  // long-run walk timing + f(3) census for a few seeds
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const double t0 = now_s();
    FEventReport rep = count_f_events(100'000'000, seed, 10'000, false);
    const double t1 = now_s();
    std::printf("seed=%llu 1e8 steps: %.1fs  prop12_viol=%lld cons_fail=%lld edge_fail=%lld  f:",
                (unsigned long long)seed, t1 - t0, (long long)rep.prop12_violations,
                (long long)rep.conservation_failures, (long long)rep.edge_balance_failures);
    for (const auto& [r, c] : rep.f_counts) std::printf(" f(%d)=%lld", r, (long long)c);
    std::printf("\n");
    std::fflush(stdout);
  }

  // tiecheck MC at moderate N to gauge agreement + cost
  {
    RunConfig cfg;
    cfg.command = "tiecheck";
    cfg.x = 1;
    cfg.h = 2;
    cfg.r_total = 2;
    cfg.replicas = 100'000;
    cfg.step_cap = 1'000'000;
    cfg.master_seed = 7;
    const double t0 = now_s();
    RunReport rep = cmd_tiecheck(cfg);
    const double t1 = now_s();
    std::printf("tiecheck(1,2,2) N=1e5: %.1fs  %s\n", t1 - t0,
                rep.to_json(false)["gates"].dump(2).c_str());
  }
  {
    RunConfig cfg;
    cfg.command = "tiecheck";
    cfg.x = -2;
    cfg.h = 2;
    cfg.r_total = 2;
    cfg.replicas = 100'000;
    cfg.step_cap = 1'000'000;
    cfg.master_seed = 7;
    const double t0 = now_s();
    RunReport rep = cmd_tiecheck(cfg);
    const double t1 = now_s();
    std::printf("tiecheck(-2,2,2) N=1e5: %.1fs  %s\n", t1 - t0,
                rep.to_json(false)["gates"].dump(2).c_str());
  }

  // rayknight at moderate N
  for (int pass = 0; pass < 2; ++pass) {
    RunConfig cfg;
    cfg.command = "rayknight";
    cfg.x = 1;
    cfg.h = 2;
    cfg.replicas = 50'000;
    cfg.step_cap = 1'000'000;
    cfg.master_seed = 11;
    cfg.negative_control = pass == 1;
    const double t0 = now_s();
    RunReport rep = cmd_rayknight(cfg);
    const double t1 = now_s();
    std::printf("rayknight(1,2)%s N=5e4/side: %.1fs gates=%s trunc=%lld capped=%lld\n",
                pass ? " NEG" : "", t1 - t0, rep.to_json(false)["gates"].dump(2).c_str(),
                (long long)rep.truncation["walk_truncated"],
                (long long)rep.truncation["profile_capped"]);
  }
  return 0;
}
