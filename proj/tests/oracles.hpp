// Copyright 2026 the partdist authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent brute-force oracles used only by the test suites. Everything
// here recomputes results through a different route than the library:
// explicit subset enumeration, four-index partial-trace loops, dense grids.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "partdist/classical.hpp"
#include "partdist/measurement.hpp"
#include "partdist/quantum.hpp"
#include "partdist/states.hpp"

namespace oracles {

using partdist::Complex;
using partdist::Distribution;
using partdist::Matrix;
using partdist::Vector;

/// Maximum over all k-subsets of the sum of per-outcome values (n <= ~20).
inline double max_over_k_subsets(const std::vector<double>& values, int k) {
  const int n = static_cast<int>(values.size());
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<int>(__builtin_popcount(mask)) != k) continue;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) sum += values[static_cast<std::size_t>(i)];
    }
    best = std::max(best, sum);
  }
  return best;
}

inline double min_over_k_subsets(const std::vector<double>& values, int k) {
  const int n = static_cast<int>(values.size());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<int>(__builtin_popcount(mask)) != k) continue;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) sum += values[static_cast<std::size_t>(i)];
    }
    best = std::min(best, sum);
  }
  return best;
}

/// Partial trace over the first factor by the naive four-index summation.
inline Matrix partial_trace_first_naive(const Matrix& at, int n, int d) {
  Matrix a = Matrix::Zero(d, d);
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      Complex sum = 0.0;
      for (int xi = 0; xi < n; ++xi) {
        sum += at(xi * d + x, xi * d + y);
      }
      a(x, y) = sum;
    }
  }
  return a;
}

/// Two-outcome qubit PVM from Bloch angles (theta, phi).
inline partdist::POVM bloch_pvm(double theta, double phi) {
  Vector plus(2);
  plus << std::cos(theta / 2.0), std::exp(Complex(0.0, phi)) * std::sin(theta / 2.0);
  const Matrix p = plus * plus.adjoint();
  std::vector<Matrix> elements{p, Matrix::Identity(2, 2) - p};
  return partdist::POVM(2, std::move(elements));
}

/// Dense grid of qubit PVMs: n_phi azimuthal steps by n_theta half-offset
/// polar steps (offsets avoid duplicate poles).
inline std::vector<partdist::POVM> bloch_pvm_grid(int n_phi, int n_theta) {
  std::vector<partdist::POVM> grid;
  grid.reserve(static_cast<std::size_t>(n_phi) * n_theta);
  for (int i = 0; i < n_phi; ++i) {
    const double phi = 2.0 * M_PI * i / n_phi;
    for (int j = 0; j < n_theta; ++j) {
      const double theta = M_PI * (j + 0.5) / n_theta;
      grid.push_back(bloch_pvm(theta, phi));
    }
  }
  return grid;
}

}  // namespace oracles
