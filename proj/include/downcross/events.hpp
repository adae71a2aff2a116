#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "downcross/chains.hpp"

namespace downcross {

// Exact probabilities of the level-h tie events.
//
// A-type families (A, A', C, C'): Pi chain run to extinction,
//   P(max_{n>=1} Y_n <= h, #{n>=1 : Y_n = h} = p | Y_0 = start).
// B/D families: finite window n in [1, horizon] of the RhoStar resp. Rho
//   chain, jointly with the endpoint value X_horizon = l.
struct EventProbTable {
  EventFamily family = EventFamily::A;
  std::int64_t h = 0;
  std::int64_t start = 0;
  std::int64_t horizon = -1;  // B/D only

  std::vector<double> probs;  // probs[p], p = 0..p_max
  Eigen::MatrixXd joint;      // B/D: joint(p, l) = P(event_p and endpoint = l), l = 0..h

  double exceed_mass = 0.0;     // P(some indexed value > h)
  double truncated_mass = 0.0;  // event mass with more than p_max visits
};

// Exact DP; requires h <= 64 and p_max <= 4 (non-binding caps at desk scale),
// horizon >= 0 for B/D.
EventProbTable event_probs(EventFamily family, std::int64_t h, int p_max, std::int64_t start,
                           std::int64_t horizon = -1);

// P(x is a favorite downcrossing site at T_D(x,h) with exactly r_total sites
// tied), assembled from the event tables of the Delta (x <= -1) or Gamma
// (x >= 0) patching.
struct TieProbability {
  int x = 0;
  std::int64_t h = 0;
  int r_total = 0;
  double value = 0.0;         // P(x in K_D(T_D(x,h)), #K_D = r_total)
  double p_x_favorite = 0.0;  // P(x in K_D(T_D(x,h))) = sum over all r_total
};

TieProbability tie_probability(int x, std::int64_t h, int r_total);

// All r_total = 1..r_max at once plus the shared total, for partition checks.
struct TieTable {
  int x = 0;
  std::int64_t h = 0;
  std::vector<double> by_r_total;  // index r_total - 1
  double p_x_favorite = 0.0;
};

TieTable tie_probability_table(int x, std::int64_t h, int r_max);

}  // namespace downcross
