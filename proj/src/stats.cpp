#include "downcross/stats.hpp"

#include <unsupported/Eigen/SpecialFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace downcross {

SampleSummary summary_from_pmf(const Eigen::VectorXd& pmf, std::int64_t n) {
  SampleSummary s;
  std::vector<std::pair<double, std::int64_t>> remainders;  // (-fraction, value)
  std::int64_t assigned = 0;
  for (Eigen::Index j = 0; j < pmf.size(); ++j) {
    const double target = pmf(j) * static_cast<double>(n);
    const std::int64_t base = static_cast<std::int64_t>(std::floor(target));
    if (base > 0) s.add(j, base);
    assigned += base;
    remainders.emplace_back(-(target - static_cast<double>(base)), j);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t k = 0; assigned < n && k < remainders.size(); ++k, ++assigned)
    s.add(remainders[k].second, 1);
  return s;
}

double gamma_q(double a, double x) {
  Eigen::ArrayXd aa(1), xx(1);
  aa << a;
  xx << x;
  return Eigen::igammac(aa, xx)(0);
}

ChiSquareResult chi_square_two_sample(const SampleSummary& a, const SampleSummary& b,
                                      double min_expected) {
  if (a.n <= 0 || b.n <= 0)
    throw std::invalid_argument("chi_square_two_sample: empty sample");

  // union support, ascending
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> merged;
  for (const auto& [v, c] : a.counts) merged[v].first += c;
  for (const auto& [v, c] : b.counts) merged[v].second += c;

  std::vector<std::pair<double, double>> cats;
  cats.reserve(merged.size());
  for (const auto& [v, ab] : merged)
    cats.emplace_back(static_cast<double>(ab.first), static_cast<double>(ab.second));

  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n);
  const double total = na + nb;
  auto ok = [&](const std::pair<double, double>& cat) {
    const double t = cat.first + cat.second;
    return na * t / total >= min_expected && nb * t / total >= min_expected;
  };
  // pool from the tail, then keep absorbing any failing category leftward
  while (cats.size() > 1) {
    bool merged_one = false;
    for (std::size_t i = cats.size(); i-- > 0;) {
      if (ok(cats[i])) continue;
      const std::size_t into = (i == 0) ? 1 : i - 1;
      cats[into].first += cats[i].first;
      cats[into].second += cats[i].second;
      cats.erase(cats.begin() + static_cast<std::ptrdiff_t>(i));
      merged_one = true;
      break;
    }
    if (!merged_one) break;
  }

  ChiSquareResult res;
  res.pooled_categories = static_cast<int>(cats.size());
  if (cats.size() <= 1 || (!ok(cats.front()) && cats.size() == 1)) {
    res.skipped = true;
    res.statistic = 0.0;
    res.dof = 0;
    res.p_value = 1.0;
    return res;
  }

  double stat = 0.0;
  for (const auto& [ca, cb] : cats) {
    const double d = nb * ca - na * cb;
    stat += d * d / (na * nb * (ca + cb));
  }
  res.statistic = stat;
  res.dof = static_cast<int>(cats.size()) - 1;
  res.p_value = gamma_q(static_cast<double>(res.dof) / 2.0, stat / 2.0);
  return res;
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials < 1 || successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials >= 1");
  const double n = static_cast<double>(trials);
  const double s = static_cast<double>(successes);
  const double z2 = z * z;
  const double center = (s + z2 / 2.0) / (n + z2);
  const double half = z * std::sqrt(s * (n - s) / n + z2 / 4.0) / (n + z2);
  return WilsonInterval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

SlopeFit loglog_slope(const std::vector<std::pair<double, double>>& h_to_value) {
  if (h_to_value.size() < 3)
    throw std::invalid_argument("loglog_slope: need at least 3 points");
  SlopeFit fit;
  double prev_h = 0.0;
  for (const auto& [h, v] : h_to_value) {
    if (h <= prev_h) throw std::invalid_argument("loglog_slope: h must be strictly increasing");
    if (!(v > 0.0)) throw std::invalid_argument("loglog_slope: nonpositive value at h=" + std::to_string(h));
    fit.points.emplace_back(std::log(h), std::log(v));
    prev_h = h;
  }

  const Eigen::Index m = static_cast<Eigen::Index>(fit.points.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = fit.points[static_cast<std::size_t>(i)].first;
    y(i) = fit.points[static_cast<std::size_t>(i)].second;
  }
  Eigen::Vector2d beta = design.colPivHouseholderQr().solve(y);
  fit.intercept = beta(0);
  fit.slope = beta(1);

  const Eigen::VectorXd resid = y - design * beta;
  const double sigma2 = resid.squaredNorm() / static_cast<double>(m - 2);
  const double x_mean = design.col(1).mean();
  const double sxx = (design.col(1).array() - x_mean).square().sum();
  fit.slope_stderr = std::sqrt(sigma2 / sxx);
  return fit;
}

}  // namespace downcross
