#include "downcross/events.hpp"

#include <stdexcept>

namespace downcross {

namespace {

// Layered absorption solve for the A-type families.  u[c](i), i in [1,h]:
// probability that a Pi chain currently at i is eventually absorbed at 0,
// never exceeds h, and visits h exactly c more times (the current visit, if
// i == h, is already accounted by the caller).
struct ATypeSolution {
  std::vector<Eigen::VectorXd> layers;  // layers[c](i-1), i = 1..h
  Eigen::VectorXd exceed;               // exceed(i-1) = P(some later value > h), i = 1..h

  double prob(std::int64_t start, std::int64_t p) const {
    if (start == 0) return p == 0 ? 1.0 : 0.0;
    return layers[static_cast<std::size_t>(p)](start - 1);
  }
  double exceed_from(std::int64_t start) const {
    return start == 0 ? 0.0 : exceed(start - 1);
  }
};

ATypeSolution solve_a_type(std::int64_t h, int p_max) {
  ATypeSolution sol;
  const std::int64_t m = h - 1;  // in-layer transient states 1..h-1

  Eigen::MatrixXd rows(h + 1, h + 2);  // rows(i, j) for j <= h, rows(i, h+1) = tail > h
  for (std::int64_t i = 0; i <= h; ++i) {
    rows.row(i).head(h + 1) = kernel_row(Kernel::Pi, i, h).transpose();
    rows(i, h + 1) = kernel_tail(Kernel::Pi, i, h + 1);
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  if (m > 0) {
    Eigen::MatrixXd iq = Eigen::MatrixXd::Identity(m, m);
    for (std::int64_t a = 0; a < m; ++a)
      for (std::int64_t b = 0; b < m; ++b) iq(a, b) -= rows(a + 1, b + 1);
    lu.compute(iq);
  }

  double prev_at_h = 0.0;  // u[c-1](h)
  for (int c = 0; c <= p_max; ++c) {
    Eigen::VectorXd u(h);
    if (m > 0) {
      Eigen::VectorXd b(m);
      for (std::int64_t i = 1; i <= m; ++i)
        b(i - 1) = (c == 0 ? rows(i, 0) : 0.0) + rows(i, h) * prev_at_h;
      Eigen::VectorXd inner = lu.solve(b);
      u.head(m) = inner;
    }
    double at_h = (c == 0 ? rows(h, 0) : 0.0) + rows(h, h) * prev_at_h;
    for (std::int64_t j = 1; j <= m; ++j) at_h += rows(h, j) * u(j - 1);
    u(h - 1) = at_h;
    sol.layers.push_back(std::move(u));
    prev_at_h = at_h;
  }

  // exceed(i): P(some value at n >= 1 is > h), with h in-layer (visits ignored).
  {
    Eigen::MatrixXd iq = Eigen::MatrixXd::Identity(h, h);
    for (std::int64_t a = 0; a < h; ++a)
      for (std::int64_t b = 0; b < h; ++b) iq(a, b) -= rows(a + 1, b + 1);
    Eigen::VectorXd tails(h);
    for (std::int64_t i = 1; i <= h; ++i) tails(i - 1) = rows(i, h + 1);
    sol.exceed = iq.partialPivLu().solve(tails);
  }
  return sol;
}

// Forward DP for the B/D families: layer(c)(i) = P(after n steps, at i <= h,
// never exceeded h, exactly c visits to h so far), with a sticky overflow
// layer at p_max+1 so the stay-below-h mass keeps its endpoint resolution.
struct WindowSolution {
  std::vector<Eigen::VectorXd> layers;  // c = 0..p_max+1, each of size h+1
  double exceed = 0.0;
};

WindowSolution solve_window(Kernel k, std::int64_t h, int p_max, std::int64_t start,
                            std::int64_t horizon) {
  Eigen::MatrixXd rows(h + 1, h + 2);
  for (std::int64_t i = 0; i <= h; ++i) {
    rows.row(i).head(h + 1) = kernel_row(k, i, h).transpose();
    rows(i, h + 1) = kernel_tail(k, i, h + 1);
  }

  WindowSolution sol;
  const int n_layers = p_max + 2;
  sol.layers.assign(n_layers, Eigen::VectorXd::Zero(h + 1));
  sol.layers[0](start) = 1.0;

  for (std::int64_t n = 0; n < horizon; ++n) {
    std::vector<Eigen::VectorXd> next(n_layers, Eigen::VectorXd::Zero(h + 1));
    for (int c = 0; c < n_layers; ++c) {
      for (std::int64_t i = 0; i <= h; ++i) {
        const double mass = sol.layers[c](i);
        if (mass == 0.0) continue;
        sol.exceed += mass * rows(i, h + 1);
        for (std::int64_t j = 0; j <= h; ++j) {
          const double p = rows(i, j);
          if (p == 0.0) continue;
          const int cc = (j == h) ? std::min(c + 1, n_layers - 1) : c;
          next[cc](j) += mass * p;
        }
      }
    }
    sol.layers = std::move(next);
  }
  return sol;
}

}  // namespace

EventProbTable event_probs(EventFamily family, std::int64_t h, int p_max, std::int64_t start,
                           std::int64_t horizon) {
  if (h < 1 || h > 64) throw std::invalid_argument("event_probs: h must be in [1, 64]");
  if (p_max < 0 || p_max > 4) throw std::invalid_argument("event_probs: p_max must be in [0, 4]");
  if (start < 0 || start > h) throw std::invalid_argument("event_probs: start must be in [0, h]");

  EventProbTable table;
  table.family = family;
  table.h = h;
  table.start = start;

  const bool windowed = (family == EventFamily::B || family == EventFamily::D);
  if (windowed) {
    if (horizon < 0) throw std::invalid_argument("event_probs: B/D require a horizon");
    table.horizon = horizon;
    const Kernel k = (family == EventFamily::B) ? Kernel::RhoStar : Kernel::Rho;
    WindowSolution w = solve_window(k, h, p_max, start, horizon);
    table.joint.setZero(p_max + 1, h + 1);
    table.probs.assign(static_cast<std::size_t>(p_max) + 1, 0.0);
    for (int p = 0; p <= p_max; ++p) {
      table.joint.row(p) = w.layers[static_cast<std::size_t>(p)].transpose();
      table.probs[static_cast<std::size_t>(p)] = w.layers[static_cast<std::size_t>(p)].sum();
    }
    table.truncated_mass = w.layers.back().sum();
    table.exceed_mass = w.exceed;
  } else {
    ATypeSolution a = solve_a_type(h, p_max);
    table.probs.assign(static_cast<std::size_t>(p_max) + 1, 0.0);
    double total = 0.0;
    for (int p = 0; p <= p_max; ++p) {
      table.probs[static_cast<std::size_t>(p)] = a.prob(start, p);
      total += table.probs[static_cast<std::size_t>(p)];
    }
    table.exceed_mass = a.exceed_from(start);
    table.truncated_mass = 1.0 - table.exceed_mass - total;
  }
  return table;
}

TieTable tie_probability_table(int x, std::int64_t h, int r_max) {
  if (r_max < 1 || r_max > 4) throw std::invalid_argument("tie_probability: r_total must be in [1, 4]");
  if (h < 1 || h > 32) throw std::invalid_argument("tie_probability: h must be in [1, 32]");

  const int p_max = r_max - 1;
  // Delta decomposition for x <= -1 (Y from h-1, RhoStar window, Y' from the
  // window endpoint); Gamma decomposition for x >= 0 (Y from h, Rho window).
  const bool left_case = (x <= -1);
  const std::int64_t y_start = left_case ? h - 1 : h;
  const Kernel window_kernel = left_case ? Kernel::RhoStar : Kernel::Rho;
  const std::int64_t window_start = left_case ? h : h - 1;
  const std::int64_t horizon = left_case ? (-static_cast<std::int64_t>(x) - 1)
                                         : static_cast<std::int64_t>(x);

  ATypeSolution a = solve_a_type(h, p_max);
  WindowSolution w = solve_window(window_kernel, h, p_max, window_start, horizon);

  TieTable table;
  table.x = x;
  table.h = h;
  table.by_r_total.assign(static_cast<std::size_t>(r_max), 0.0);

  for (int r_total = 1; r_total <= r_max; ++r_total) {
    double value = 0.0;
    for (int p = 0; p <= r_total - 1; ++p) {
      for (int q = 0; q + p <= r_total - 1; ++q) {
        const int r = r_total - 1 - p - q;
        double window_term = 0.0;
        for (std::int64_t l = 0; l <= h; ++l) {
          const double jm = w.layers[static_cast<std::size_t>(q)](l);
          if (jm == 0.0) continue;
          window_term += jm * a.prob(l, r);
        }
        value += a.prob(y_start, p) * window_term;
      }
    }
    table.by_r_total[static_cast<std::size_t>(r_total - 1)] = value;
  }

  // P(x in K_D(T_D(x,h))): all three pieces stay <= h, any visit counts.
  double stay_y = 1.0 - a.exceed_from(y_start);
  double total = 0.0;
  for (std::int64_t l = 0; l <= h; ++l) {
    double endpoint_mass = 0.0;
    for (const Eigen::VectorXd& layer : w.layers) endpoint_mass += layer(l);
    if (endpoint_mass == 0.0) continue;
    total += endpoint_mass * (1.0 - a.exceed_from(l));
  }
  table.p_x_favorite = stay_y * total;
  return table;
}

TieProbability tie_probability(int x, std::int64_t h, int r_total) {
  TieTable t = tie_probability_table(x, h, r_total);
  TieProbability out;
  out.x = x;
  out.h = h;
  out.r_total = r_total;
  out.value = t.by_r_total.back();
  out.p_x_favorite = t.p_x_favorite;
  return out;
}

}  // namespace downcross
