#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace downcross {

// Exhaustive enumeration of all 2^n equiprobable n-step paths.  Every
// probability is the stored count over 2^n, so the tables are exact dyadic
// rationals.
struct EnumerationReport {
  int n = 0;

  // r -> #paths with exactly r favorite downcrossing sites at time n
  // (r = 0 is the empty-set convention before any downcrossing).
  std::vector<std::int64_t> tie_count_paths;

  // r -> total number of f(r) events over all paths and times <= n.
  std::vector<std::int64_t> f_event_counts;

  // (site y, count k) -> #paths with xi_D(y,n) = k.
  std::map<std::pair<int, int>, std::int64_t> marginal_counts;

  // per-path identity sum_x d(x) = f(4)-event count held on every path
  bool d_identity_ok = false;

  std::int64_t denominator() const { return std::int64_t{1} << n; }
};

// Refuses n > 24 (2^24 paths is the desk-scale ceiling).
EnumerationReport enumerate_walks(int n);

// pmf of the sum of i independent geometric(mean 1) variables on 0..j_max,
// by iterated convolution.  Independent certificate for the Pi closed form.
Eigen::VectorXd convolution_pmf(int i, int j_max);

}  // namespace downcross
