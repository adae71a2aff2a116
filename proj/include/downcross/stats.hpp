#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace downcross {

// Frequency table of an integer-valued sample.
struct SampleSummary {
  std::int64_t n = 0;
  std::map<std::int64_t, std::int64_t> counts;

  void add(std::int64_t value, std::int64_t count = 1) {
    counts[value] += count;
    n += count;
  }
};

// Rounded pseudo-sample of size n drawn deterministically from an exact pmf
// over 0..len-1 (largest-remainder rounding, total preserved).
SampleSummary summary_from_pmf(const Eigen::VectorXd& pmf, std::int64_t n);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int pooled_categories = 0;
  bool skipped = false;  // degenerate: one category left after pooling
};

// Two-sample chi-square on the union support.  Categories are pooled
// greedily from the tail (and then leftward) until every expected count is
// at least min_expected on both sides.  Pooling preserves totals.
ChiSquareResult chi_square_two_sample(const SampleSummary& a, const SampleSummary& b,
                                      double min_expected = 5.0);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval at the z-sigma level.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 3.0);

struct SlopeFit {
  std::vector<std::pair<double, double>> points;  // (log h, log value)
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

// OLS on (log h, log value); needs >= 3 points, all values > 0.
SlopeFit loglog_slope(const std::vector<std::pair<double, double>>& h_to_value);

// Regularized upper incomplete gamma Q(a, x) (chi-square upper tail).
double gamma_q(double a, double x);

}  // namespace downcross
