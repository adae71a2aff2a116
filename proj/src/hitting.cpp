#include "downcross/hitting.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace downcross {

HittingSolution solve_hitting(Kernel k, std::int64_t h, std::int64_t start) {
  if (h < 1 || h > 1024) throw std::invalid_argument("solve_hitting: h must be in [1, 1024]");
  if (start < 0 || start > h) throw std::invalid_argument("solve_hitting: start must be in [0, h]");

  HittingSolution sol;
  sol.kernel = k;
  sol.h = h;
  sol.start = start;

  const std::int64_t t_lo = (k == Kernel::Pi) ? 1 : 0;  // transient states t_lo..h-1
  const std::int64_t m = h - t_lo;

  // Rows of the kernel for all states we ever leave from, j = 0..h.
  Eigen::MatrixXd rows(h + 1, h + 1);
  for (std::int64_t i = 0; i <= h; ++i) rows.row(i) = kernel_row(k, i, h).transpose();

  // Expected visits v(j) to transient j at times >= 1, starting from `start`.
  Eigen::VectorXd visits = Eigen::VectorXd::Zero(std::max<std::int64_t>(m, 1));
  if (m > 0) {
    Eigen::MatrixXd iq = Eigen::MatrixXd::Identity(m, m);
    for (std::int64_t a = 0; a < m; ++a)
      for (std::int64_t b = 0; b < m; ++b) iq(a, b) -= rows(a + t_lo, b + t_lo);
    Eigen::VectorXd entry(m);
    for (std::int64_t b = 0; b < m; ++b) entry(b) = rows(start, b + t_lo);
    visits = iq.transpose().partialPivLu().solve(entry);
  }

  auto stop_mass_at = [&](std::int64_t u) {
    double p = kernel_prob(k, start, u);
    for (std::int64_t j = 0; j < m; ++j) p += visits(j) * kernel_prob(k, j + t_lo, u);
    return p;
  };
  auto stop_tail_at = [&](std::int64_t u) {
    double p = kernel_tail(k, start, u);
    for (std::int64_t j = 0; j < m; ++j) p += visits(j) * kernel_tail(k, j + t_lo, u);
    return p;
  };

  if (k == Kernel::Pi) {
    sol.p_never = kernel_prob(k, start, 0);
    for (std::int64_t j = 0; j < m; ++j) sol.p_never += visits(j) * kernel_prob(k, j + t_lo, 0);
  }

  sol.p_exact_h = stop_mass_at(h);

  if (sol.p_never == 0.0) {
    sol.e_time = 1.0 + visits.sum();
    sol.e_time_valid = true;
  } else {
    sol.e_time = std::numeric_limits<double>::quiet_NaN();
    sol.e_time_valid = false;
  }

  // Overshoot law, enumerated until the running tail certifies < 1e-12 left.
  double tail = stop_tail_at(h);
  for (std::int64_t u = h;; ++u) {
    const double p = stop_mass_at(u);
    sol.overshoot_pmf.emplace_back(u, p);
    tail -= p;
    if (tail < 1e-12) {
      sol.truncated_mass = stop_tail_at(u + 1);
      break;
    }
    if (u > h + 100000) {  // unreachable for sane inputs
      sol.truncated_mass = stop_tail_at(u + 1);
      break;
    }
  }
  return sol;
}

}  // namespace downcross
