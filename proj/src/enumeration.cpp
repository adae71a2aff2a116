#include "downcross/enumeration.hpp"

#include <algorithm>
#include <stdexcept>

namespace downcross {

EnumerationReport enumerate_walks(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_walks: n must be >= 1");
  if (n > 24) throw std::invalid_argument("enumerate_walks: n > 24 refused (2^n paths)");

  EnumerationReport report;
  report.n = n;
  report.tie_count_paths.assign(static_cast<std::size_t>(n) + 1, 0);
  report.f_event_counts.assign(static_cast<std::size_t>(n) + 1, 0);
  report.d_identity_ok = true;

  const int width = 2 * n + 1;  // sites -n..n, offset n
  const int max_k = n / 2 + 1;
  std::vector<std::int32_t> down(static_cast<std::size_t>(width), 0);
  std::vector<std::int64_t> marginals(static_cast<std::size_t>(width) * (max_k + 1), 0);
  std::vector<std::int64_t> d_counts(static_cast<std::size_t>(width), 0);

  const std::int64_t paths = std::int64_t{1} << n;
  for (std::int64_t mask = 0; mask < paths; ++mask) {
    std::fill(down.begin(), down.end(), 0);
    std::fill(d_counts.begin(), d_counts.end(), 0);
    int pos = 0;
    std::int32_t max_down = 0;
    int ties = 0;
    std::int64_t f4_events = 0;

    for (int step = 0; step < n; ++step) {
      if ((mask >> step) & 1) {
        ++pos;  // upcrossing: no downcross counter moves
        continue;
      }
      --pos;  // downcrossing of the site arrived at
      const int idx = pos + n;
      const std::int32_t c = ++down[static_cast<std::size_t>(idx)];
      if (c > max_down) {
        max_down = c;
        ties = 1;
      } else if (c == max_down) {
        ++ties;
      } else {
        continue;  // below the maximum: no event
      }
      ++report.f_event_counts[static_cast<std::size_t>(ties)];
      if (ties == 4) {
        ++f4_events;
        ++d_counts[static_cast<std::size_t>(idx)];
      }
    }

    ++report.tie_count_paths[static_cast<std::size_t>(max_down == 0 ? 0 : ties)];
    std::int64_t d_sum = 0;
    for (int i = 0; i < width; ++i) d_sum += d_counts[static_cast<std::size_t>(i)];
    if (d_sum != f4_events) report.d_identity_ok = false;
    for (int i = 0; i < width; ++i) {
      const std::int32_t k = down[static_cast<std::size_t>(i)];
      ++marginals[static_cast<std::size_t>(i) * (max_k + 1) + static_cast<std::size_t>(k)];
    }
  }

  for (int i = 0; i < width; ++i)
    for (int k = 0; k <= max_k; ++k) {
      const std::int64_t c = marginals[static_cast<std::size_t>(i) * (max_k + 1) + k];
      if (c > 0) report.marginal_counts[{i - n, k}] = c;
    }
  return report;
}

Eigen::VectorXd convolution_pmf(int i, int j_max) {
  if (i < 1) throw std::invalid_argument("convolution_pmf: i must be >= 1");
  Eigen::VectorXd geometric(j_max + 1);
  for (int j = 0; j <= j_max; ++j) geometric(j) = std::pow(2.0, -(j + 1));
  Eigen::VectorXd acc = geometric;
  for (int fold = 2; fold <= i; ++fold) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(j_max + 1);
    for (int j = 0; j <= j_max; ++j)
      for (int m = 0; m <= j; ++m) next(j) += acc(m) * geometric(j - m);
    acc = std::move(next);
  }
  return acc;
}

}  // namespace downcross
