#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "downcross/rng.hpp"

namespace downcross {

// Transition kernels of the three counting chains.
//
//   Pi       pi(i,j)    critical Galton-Watson step, geometric(mean 1) offspring;
//            state 0 is absorbing.
//   Rho      rho(i,j)  = pi(i+1,j)   immigration before reproduction.
//   RhoStar  rho*(i,j) = pi(i,j-1)   immigration after reproduction; rho*(i,0) = 0.
enum class Kernel { Pi, Rho, RhoStar };

const char* kernel_name(Kernel k);

// Exact transition pmf, evaluated in log space for large arguments.
// Out-of-support (i,j) returns 0.
double kernel_prob(Kernel k, std::int64_t i, std::int64_t j);

// P(one step from i lands >= h).  Accumulated by direct upward summation,
// never by naive subtraction when the head mass is close to 1.
double kernel_tail(Kernel k, std::int64_t i, std::int64_t h);

// Exact one-step mean: i for Pi, i+1 for Rho and RhoStar.
double kernel_mean_exact(Kernel k, std::int64_t i);

// One-step mean summed numerically from the pmf (test surface for the
// criticality / martingale checks).
double kernel_mean_numeric(Kernel k, std::int64_t i);

// Row i of the kernel for j = 0..j_max, filled with the stable ratio
// recurrence pi(i,j+1)/pi(i,j) = (i+j)/(2(j+1)).
Eigen::VectorXd kernel_row(Kernel k, std::int64_t i, std::int64_t j_max);

// Reference sampler: sums the defining geometric(mean 1) draws
// (i for Pi, i+1 for Rho, i plus the immigrant for RhoStar).
std::int64_t sample_step(Kernel k, std::int64_t i, SplitMix64& rng);

// Inverse-CDF fast path along the row recurrence.  Distributionally
// equivalent to sample_step; falls back to it for very large i where the
// row head underflows.
std::int64_t sample_step_inverse(Kernel k, std::int64_t i, SplitMix64& rng);

}  // namespace downcross
