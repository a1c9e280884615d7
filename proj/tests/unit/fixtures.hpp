#pragma once

#include "tumorctl/config.hpp"
#include "tumorctl/problem.hpp"

#include <random>

namespace fixtures {

inline tumorctl::Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  tumorctl::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

// small scenario with the default model, cheap enough for optimizer loops
inline tumorctl::Config small_config(int n = 11, int nt = 168) {
  tumorctl::Config c;
  c.nx = c.ny = n;
  c.nt = nt;
  c.dose_window = 1.0 / 6.0;
  return c;
}

// drug bounds placed so neither penalty can activate for moderate controls
inline tumorctl::ModelParams unconstrained(tumorctl::ModelParams p = {}) {
  p.s_minus = 1e-200;
  p.s_plus = 1e200;
  return p;
}

}  // namespace fixtures
