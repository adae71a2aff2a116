#include "downcross/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace downcross {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;
constexpr int kLogFactCache = 1 << 16;

// log(n!) with a cached table for the common range.
double log_factorial(std::int64_t n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactCache);
    t[0] = 0.0;
    for (int i = 1; i < kLogFactCache; ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (n < kLogFactCache) return table[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

// pi(i,j) for i >= 1, j >= 0: 2^{-i-j} (i+j-1)! / ((i-1)! j!).
double pi_positive(std::int64_t i, std::int64_t j) {
  const double lg = -static_cast<double>(i + j) * kLn2 + log_factorial(i + j - 1) -
                    log_factorial(i - 1) - log_factorial(j);
  return std::exp(lg);
}

double pi_prob(std::int64_t i, std::int64_t j) {
  if (i < 0 || j < 0) return 0.0;
  if (i == 0) return j == 0 ? 1.0 : 0.0;
  return pi_positive(i, j);
}

// P(pi step from i lands >= h), summed upward with the row ratio.
double pi_tail(std::int64_t i, std::int64_t h) {
  if (h <= 0) return 1.0;
  if (i == 0) return 0.0;
  double term = pi_positive(i, h);
  double total = term;
  for (std::int64_t j = h;; ++j) {
    term *= static_cast<double>(i + j) / (2.0 * static_cast<double>(j + 1));
    total += term;
    if (term < total * 1e-18 + 1e-300) break;
  }
  return total;
}

}  // namespace

const char* kernel_name(Kernel k) {
  switch (k) {
    case Kernel::Pi: return "pi";
    case Kernel::Rho: return "rho";
    case Kernel::RhoStar: return "rho_star";
  }
  return "?";
}

double kernel_prob(Kernel k, std::int64_t i, std::int64_t j) {
  if (i < 0 || j < 0) return 0.0;
  switch (k) {
    case Kernel::Pi: return pi_prob(i, j);
    case Kernel::Rho: return pi_prob(i + 1, j);
    case Kernel::RhoStar: return pi_prob(i, j - 1);
  }
  return 0.0;
}

double kernel_tail(Kernel k, std::int64_t i, std::int64_t h) {
  if (i < 0) throw std::invalid_argument("kernel_tail: negative state");
  switch (k) {
    case Kernel::Pi: return i == 0 ? (h <= 0 ? 1.0 : 0.0) : pi_tail(i, h);
    case Kernel::Rho: return pi_tail(i + 1, h);
    case Kernel::RhoStar:
      if (i == 0) return h <= 1 ? 1.0 : 0.0;  // forced jump to 1
      return h <= 1 ? 1.0 : pi_tail(i, h - 1);
  }
  return 0.0;
}

double kernel_mean_exact(Kernel k, std::int64_t i) {
  switch (k) {
    case Kernel::Pi: return static_cast<double>(i);
    case Kernel::Rho:
    case Kernel::RhoStar: return static_cast<double>(i + 1);
  }
  return 0.0;
}

double kernel_mean_numeric(Kernel k, std::int64_t i) {
  double total = 0.0;
  double mass = 0.0;
  for (std::int64_t j = 0;; ++j) {
    const double p = kernel_prob(k, i, j);
    total += p * static_cast<double>(j);
    mass += p;
    // past the mode, remaining mean mass is bounded by tail * max tail value;
    // stop once the tail cannot move the sum at the 1e-12 level.
    if (j > 2 * i + 64) {
      const double tail = kernel_tail(k, i, j + 1);
      if (tail * static_cast<double>(4 * j) < 1e-13) break;
    }
  }
  return total;
}

Eigen::VectorXd kernel_row(Kernel k, std::int64_t i, std::int64_t j_max) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(j_max + 1);
  std::int64_t base_i = i;
  std::int64_t shift = 0;  // row(j) = pi(base_i, j - shift)
  switch (k) {
    case Kernel::Pi: break;
    case Kernel::Rho: base_i = i + 1; break;
    case Kernel::RhoStar: shift = 1; break;
  }
  if (base_i == 0) {
    if (shift <= j_max) row(shift) = 1.0;
    return row;
  }
  double p = pi_positive(base_i, 0);
  for (std::int64_t j = shift; j <= j_max; ++j) {
    row(j) = p;
    p *= static_cast<double>(base_i + (j - shift)) / (2.0 * static_cast<double>(j - shift + 1));
  }
  return row;
}

std::int64_t sample_step(Kernel k, std::int64_t i, SplitMix64& rng) {
  std::int64_t parents = i;
  std::int64_t extra = 0;
  switch (k) {
    case Kernel::Pi: break;
    case Kernel::Rho: parents = i + 1; break;
    case Kernel::RhoStar: extra = 1; break;
  }
  std::int64_t total = extra;
  for (std::int64_t p = 0; p < parents; ++p) total += rng.geometric_mean1();
  return total;
}

std::int64_t sample_step_inverse(Kernel k, std::int64_t i, SplitMix64& rng) {
  std::int64_t base_i = i;
  std::int64_t shift = 0;
  switch (k) {
    case Kernel::Pi: break;
    case Kernel::Rho: base_i = i + 1; break;
    case Kernel::RhoStar: shift = 1; break;
  }
  if (base_i == 0) return shift;
  if (base_i > 512) return sample_step(k, i, rng);  // row head underflows, use the sum
  const double u = rng.uniform01();
  double p = pi_positive(base_i, 0);
  double cdf = p;
  std::int64_t j = 0;
  while (cdf <= u) {
    p *= static_cast<double>(base_i + j) / (2.0 * static_cast<double>(j + 1));
    ++j;
    cdf += p;
    if (p < 1e-320) break;  // u in the extreme tail; j is the last representable state
  }
  return j + shift;
}

}  // namespace downcross
