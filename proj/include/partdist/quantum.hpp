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

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "partdist/classical.hpp"
#include "partdist/common.hpp"
#include "partdist/matops.hpp"
#include "partdist/measurement.hpp"
#include "partdist/states.hpp"

namespace partdist {

/// Half the Ky Fan k-norm of rho0 - rho1; k = dim gives the trace distance.
inline double partitioned_trace_distance(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                         int k) {
  if (rho0.dim() != rho1.dim()) throw InputError("partitioned_trace_distance: dimension mismatch");
  return ky_fan_norm(rho0.matrix() - rho1.matrix(), k) / 2.0;
}

inline double trace_distance(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  return partitioned_trace_distance(rho0, rho1, rho0.dim());
}

/// Uhlmann fidelity: trace norm of sqrt(rho0) sqrt(rho1).
inline double fidelity(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != rho1.dim()) throw InputError("fidelity: dimension mismatch");
  return schatten_norm(psd_sqrt(rho0.matrix()) * psd_sqrt(rho1.matrix()), 1.0);
}

/// Sum of the (d - k) smallest singular values of sqrt(rho0) sqrt(rho1).
/// Evaluated both as a suffix sum and as fidelity minus the Ky Fan k-norm;
/// the two routes must agree within kTolEq.
inline double partial_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho1, int k) {
  if (rho0.dim() != rho1.dim()) throw InputError("partial_fidelity: dimension mismatch");
  const int d = rho0.dim();
  if (k < 0 || k > d) throw InputError("partial_fidelity: k out of range [0, d]");
  const Matrix product = psd_sqrt(rho0.matrix()) * psd_sqrt(rho1.matrix());
  const std::vector<double> s = singular_values(product);
  double suffix = 0.0;
  for (int i = k; i < d; ++i) suffix += s[static_cast<std::size_t>(i)];
  const double full = std::accumulate(s.begin(), s.end(), 0.0);
  const double via_ky_fan = full - ky_fan_norm(product, k);
  if (std::abs(suffix - via_ky_fan) > kTolEq) {
    throw InternalError("partial_fidelity: computation routes disagree");
  }
  return suffix;
}

/// Minimal error probability for equiprobable states: (1 - D_tr) / 2.
inline double pe_quantum(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != rho1.dim()) throw InputError("pe_quantum: dimension mismatch");
  return (1.0 - trace_distance(rho0, rho1)) / 2.0;
}

/// Partial Shannon distinguishability of the statistics a POVM induces on the
/// two states; k beyond the outcome count clamps to the outcome count.
inline double sd_k_povm(const DensityMatrix& rho0, const DensityMatrix& rho1, const POVM& povm,
                        int k) {
  if (rho0.dim() != povm.dim() || rho1.dim() != povm.dim()) {
    throw InputError("sd_k_povm: dimension mismatch");
  }
  if (k < 0) throw InputError("sd_k_povm: k must be nonnegative");
  const Distribution p0 = outcome_distribution(rho0, povm);
  const Distribution p1 = outcome_distribution(rho1, povm);
  return sd_k_classical(p0, p1, std::min(k, povm.outcomes()));
}

inline double sd_povm(const DensityMatrix& rho0, const DensityMatrix& rho1, const POVM& povm) {
  return sd_k_povm(rho0, rho1, povm, povm.outcomes());
}

/// Per-outcome vector (p0(x) + p1(x)) J(p0(x) / (p0(x) + p1(x))); its
/// descending prefix sums are twice the partial Shannon distinguishabilities.
inline std::vector<double> mutual_info_term_vector(const DensityMatrix& rho0,
                                                   const DensityMatrix& rho1, const POVM& povm) {
  const Distribution p0 = outcome_distribution(rho0, povm);
  const Distribution p1 = outcome_distribution(rho1, povm);
  std::vector<double> terms = detail::sd_terms(p0, p1);
  for (double& t : terms) t *= 2.0;
  return terms;
}

/// Result of a distinguishability search over a POVM family. `value` is the
/// exact partial Shannon distinguishability of `best_povm`, so it certifies a
/// lower bound on the family supremum; it never claims the supremum itself.
struct SDEstimate {
  double value = 0.0;
  POVM best_povm;
  Family family = Family::A;
  int k = 0;
  int budget = 0;
  Seed seed;
};

namespace detail {

inline double sd_k_raw(std::vector<double> p0, std::vector<double> p1, int k) {
  std::vector<double> terms(p0.size());
  for (std::size_t x = 0; x < p0.size(); ++x) {
    const double a = std::max(p0[x], 0.0);
    const double b = std::max(p1[x], 0.0);
    const double px = (a + b) / 2.0;
    terms[x] = px > 0.0 ? px * j_func(a / (2.0 * px)) : 0.0;
  }
  return top_k_sum(std::move(terms), std::min<int>(k, static_cast<int>(p0.size())));
}

/// Search state: generating vectors plus an optional coarse-grain partition.
/// Rebuilding through S^{-1/2} keeps m = d points projective (family B) and
/// m >= d rank-one points inside family A.
struct SearchPoint {
  std::vector<Vector> vectors;
  std::vector<std::vector<int>> partition;
};

inline bool search_point_elements(const SearchPoint& point, int dim,
                                  std::vector<Matrix>& elements) {
  std::vector<Matrix> fine;
  if (!rank_one_elements_from_vectors(point.vectors, dim, fine)) return false;
  if (point.partition.empty()) {
    elements = std::move(fine);
    return true;
  }
  elements.clear();
  elements.reserve(point.partition.size());
  for (const std::vector<int>& part : point.partition) {
    Matrix sum = Matrix::Zero(dim, dim);
    for (int idx : part) sum += fine[static_cast<std::size_t>(idx)];
    elements.push_back(std::move(sum));
  }
  return true;
}

inline double score_search_point(const SearchPoint& point, const Matrix& rho0, const Matrix& rho1,
                                 int k, int dim) {
  std::vector<Matrix> elements;
  if (!search_point_elements(point, dim, elements)) return -1.0;
  return sd_k_raw(raw_outcome_probs(rho0, elements), raw_outcome_probs(rho1, elements), k);
}

/// Derivative-free polish: single-coordinate complex perturbations of the
/// generating vectors, re-completed through S^{-1/2}, accepting improvements.
/// Step starts at 0.2, halves each round, and stops below 1e-4; 8 proposals
/// per vector per round.
inline void refine_search_point(SearchPoint& point, double& best, const Matrix& rho0,
                                const Matrix& rho1, int k, int dim, Rng& rng) {
  for (double step = 0.2; step >= 1e-4; step *= 0.5) {
    for (std::size_t vi = 0; vi < point.vectors.size(); ++vi) {
      for (int trial = 0; trial < 8; ++trial) {
        const int coord = rng.uniform_int(0, dim - 1);
        const Complex delta = step * rng.cgaussian();
        const Complex saved = point.vectors[vi](coord);
        point.vectors[vi](coord) += delta;
        const double score = score_search_point(point, rho0, rho1, k, dim);
        if (score > best) {
          best = score;
        } else {
          point.vectors[vi](coord) = saved;
        }
      }
    }
  }
}

inline std::vector<Vector> matrix_columns(const Matrix& m) {
  std::vector<Vector> cols;
  cols.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) cols.push_back(m.col(c));
  return cols;
}

/// Basis attaining the measured fidelity: eigenbasis of the operator middle
/// term M = rho0^{-1/2} (rho0^{1/2} rho1 rho0^{1/2})^{1/2} rho0^{-1/2}, with
/// the inverse taken on the support of rho0. The induced statistics satisfy
/// sum_x sqrt(p0 p1) = fidelity, which pins the 1 - F_0 lower bound.
inline Matrix fidelity_optimal_basis(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  const HermitianEigen eig0 = hermitian_eigen(rho0.matrix());
  const int d = rho0.dim();
  const double floor = std::max(eig0.values.front(), 1.0) * 1e-12;
  Eigen::VectorXd inv_root(d);
  for (int i = 0; i < d; ++i) {
    const double v = eig0.values[static_cast<std::size_t>(i)];
    inv_root(i) = v > floor ? 1.0 / std::sqrt(v) : 0.0;
  }
  const Matrix pinv_sqrt = eig0.vectors * inv_root.asDiagonal() * eig0.vectors.adjoint();
  const Matrix sqrt0 = psd_sqrt(rho0.matrix());
  const Matrix middle = psd_sqrt(sqrt0 * rho1.matrix() * sqrt0);
  const Matrix m = pinv_sqrt * middle * pinv_sqrt;
  return hermitian_eigen((m + m.adjoint()) / 2.0).vectors;
}

/// Deterministic start schedule shared by both families. The prefix is fixed
/// so estimates are monotone in the budget: Helstrom-style eigenbasis starts
/// first, then (family A) a fidelity-optimal basis and one rank-one start per
/// outcome count m in [d, d^2], then seeded random starts filling the budget.
inline std::vector<SearchPoint> start_schedule(const DensityMatrix& rho0,
                                               const DensityMatrix& rho1, Family family,
                                               int budget, Seed seed) {
  const int d = rho0.dim();
  std::vector<SearchPoint> starts;

  const HermitianEigen diff = hermitian_eigen(rho0.matrix() - rho1.matrix());
  if (family == Family::B) {
    // Coarse-grained Helstrom split: eigenvectors grouped by eigenvalue sign.
    std::vector<int> plus, minus;
    for (int i = 0; i < d; ++i) {
      (diff.values[static_cast<std::size_t>(i)] >= -kTolEq ? plus : minus).push_back(i);
    }
    SearchPoint helstrom{matrix_columns(diff.vectors), {}};
    if (!plus.empty()) helstrom.partition.push_back(plus);
    if (!minus.empty()) helstrom.partition.push_back(minus);
    starts.push_back(std::move(helstrom));
  }
  starts.push_back({matrix_columns(diff.vectors), {}});
  starts.push_back({matrix_columns(hermitian_eigen(rho0.matrix()).vectors), {}});
  starts.push_back({matrix_columns(hermitian_eigen(rho1.matrix()).vectors), {}});

  if (family == Family::A) {
    starts.push_back({matrix_columns(fidelity_optimal_basis(rho0, rho1)), {}});
    for (int m = d; m <= d * d; ++m) {
      Rng rng(derive_seed(seed.value, 0x0Au, static_cast<std::uint64_t>(m)));
      SearchPoint point;
      for (int x = 0; x < m; ++x) point.vectors.push_back(rng.cgaussian_vector(d));
      starts.push_back(std::move(point));
    }
  }

  for (std::uint64_t idx = starts.size(); static_cast<int>(starts.size()) < budget; ++idx) {
    Rng rng(derive_seed(seed.value, 0x22u, idx));
    SearchPoint point;
    if (family == Family::B) {
      point.vectors = matrix_columns(random_unitary(d, Seed{rng.next_u64()}));
      if (d > 1 && rng.uniform() < 0.25) {
        // Random two-part coarse graining keeps the start projective.
        std::vector<int> left, right;
        for (int i = 0; i < d; ++i) (rng.uniform() < 0.5 ? left : right).push_back(i);
        if (!left.empty() && !right.empty()) {
          point.partition.push_back(left);
          point.partition.push_back(right);
        }
      }
    } else {
      const int m = rng.uniform_int(d, d * d);
      for (int x = 0; x < m; ++x) point.vectors.push_back(rng.cgaussian_vector(d));
    }
    starts.push_back(std::move(point));
  }
  return starts;
}

}  // namespace detail

/// Multi-start search for the k-th partial Shannon distinguishability over a
/// POVM family. Deterministic per seed; the returned value is re-evaluated on
/// the best POVM found, so it is a certified lower bound on the family
/// supremum. All mandatory starts run even when the budget is smaller.
inline SDEstimate estimate_sd_k(const DensityMatrix& rho0, const DensityMatrix& rho1, int k,
                                Family family, int budget, Seed seed) {
  if (rho0.dim() != rho1.dim()) throw InputError("estimate_sd_k: dimension mismatch");
  if (budget < 1) throw InputError("estimate_sd_k: budget must be >= 1");
  if (k < 0) throw InputError("estimate_sd_k: k must be nonnegative");
  const int d = rho0.dim();

  const std::vector<detail::SearchPoint> starts =
      detail::start_schedule(rho0, rho1, family, budget, seed);
  struct StartResult {
    double value = -1.0;
    POVM povm;
    bool ok = false;
  };
  std::vector<StartResult> results(starts.size());

  parallel_for(starts.size(), [&](std::size_t i) {
    detail::SearchPoint point = starts[i];
    double best = detail::score_search_point(point, rho0.matrix(), rho1.matrix(), k, d);
    if (best < 0.0) return;  // degenerate start; skip
    Rng rng(derive_seed(seed.value, 0x5Eu, static_cast<std::uint64_t>(i)));
    detail::refine_search_point(point, best, rho0.matrix(), rho1.matrix(), k, d, rng);
    std::vector<Matrix> elements;
    if (!detail::search_point_elements(point, d, elements)) return;
    StartResult& out = results[i];
    out.povm = POVM(d, std::move(elements));
    out.value = sd_k_povm(rho0, rho1, out.povm, k);
    out.ok = true;
  });

  SDEstimate estimate;
  estimate.family = family;
  estimate.k = k;
  estimate.budget = budget;
  estimate.seed = seed;
  int best_index = -1;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].ok && (best_index < 0 || results[i].value > estimate.value)) {
      best_index = static_cast<int>(i);
      estimate.value = results[i].value;
    }
  }
  if (best_index < 0) throw InternalError("estimate_sd_k: every start degenerated");
  estimate.best_povm = std::move(results[static_cast<std::size_t>(best_index)].povm);
  return estimate;
}

/// Full Shannon-distinguishability search: the k index saturates the largest
/// outcome count the family admits, so every per-POVM sum is complete.
inline SDEstimate estimate_sd(const DensityMatrix& rho0, const DensityMatrix& rho1, Family family,
                              int budget, Seed seed) {
  const int d = rho0.dim();
  const int k = family == Family::A ? d * d : d;
  return estimate_sd_k(rho0, rho1, k, family, budget, seed);
}

}  // namespace partdist
