// Shared helpers for the unit tests: seeded random smooth positive diffusion
// profiles and random nodal vectors.
#pragma once

#include <cmath>
#include <random>

#include "rdcontract/grid.hpp"

namespace tu {

inline rdc::GridPtr grid(int n) { return rdc::make_uniform_grid(n); }

// Strictly positive, smooth, zero-slope at both ends (cosine series), with
// log-values in roughly [-1, 1].
inline Eigen::ArrayXd smooth_positive(const rdc::GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  double c0 = u(rng);
  double ck[4];
  for (double& c : ck) c = u(rng);
  Eigen::ArrayXd out(g->n);
  for (int i = 0; i < g->n; ++i) {
    double x = g->nodes[i], s = c0;
    for (int k = 1; k <= 4; ++k) s += ck[k - 1] / k * std::cos(k * M_PI * x);
    out[i] = std::exp(s);
  }
  return out;
}

inline Eigen::ArrayXd random_vector(const rdc::GridPtr& g, std::mt19937_64& rng,
                                    double amp = 1.0) {
  std::uniform_real_distribution<double> u(-amp, amp);
  Eigen::ArrayXd out(g->n);
  for (int i = 0; i < g->n; ++i) out[i] = u(rng);
  return out;
}

}  // namespace tu
