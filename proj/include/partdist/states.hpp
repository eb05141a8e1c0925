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

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/QR>

#include "partdist/common.hpp"
#include "partdist/matops.hpp"

namespace partdist {

/// Unit-trace PSD Hermitian matrix; validated at construction.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
      throw InputError("density matrix must be square and nonempty");
    }
    rho_ = require_hermitian(rho_, kTolHerm);
    const double trace = rho_.trace().real();
    if (std::abs(trace - 1.0) > kTolEq) {
      throw InputError("density matrix trace " + std::to_string(trace) + " is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kTolPsd) {
      throw InputError("density matrix is not PSD within tolerance");
    }
  }

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }

 private:
  Matrix rho_;
};

/// Density matrix on an N * d product space with a declared factor split.
struct BipartiteState {
  int n_first = 0;
  int d_second = 0;
  DensityMatrix state;

  BipartiteState() = default;
  BipartiteState(int n, int d, DensityMatrix rho)
      : n_first(n), d_second(d), state(std::move(rho)) {
    if (n_first < 1 || d_second < 1 || state.dim() != n_first * d_second) {
      throw InputError("bipartite state: declared split does not match dimension");
    }
  }

  DensityMatrix reduced_second() const {
    return DensityMatrix(partial_trace_first(state.matrix(), n_first, d_second));
  }
};

/// Rank-one projector onto a random unit vector with complex Gaussian
/// components; deterministic per seed.
inline DensityMatrix random_pure(int d, Seed seed) {
  if (d < 1) throw InputError("random_pure: d must be >= 1");
  Rng rng(seed);
  Vector v = rng.cgaussian_vector(d);
  double norm = v.norm();
  while (norm < 1e-12) {  // essentially unreachable; retry keeps the contract total
    v = rng.cgaussian_vector(d);
    norm = v.norm();
  }
  v /= norm;
  return DensityMatrix(v * v.adjoint());
}

/// G G† / Tr(G G†) for a d x rank complex Gaussian G.
inline DensityMatrix random_mixed(int d, int rank, Seed seed) {
  if (d < 1) throw InputError("random_mixed: d must be >= 1");
  if (rank < 1 || rank > d) throw InputError("random_mixed: rank out of range [1, d]");
  Rng rng(seed);
  const Matrix g = rng.cgaussian_matrix(d, rank);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix((rho + rho.adjoint()) / 2.0);
}

/// Haar-style random unitary: QR of a complex Gaussian matrix with the phase
/// convention that makes the R diagonal positive.
inline Matrix random_unitary(int d, Seed seed) {
  if (d < 1) throw InputError("random_unitary: d must be >= 1");
  Rng rng(seed);
  const Matrix g = rng.cgaussian_matrix(d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    if (mag > 0.0) q.col(i) *= rii / mag;
  }
  return q;
}

inline Matrix random_hermitian(int d, Seed seed) {
  if (d < 1) throw InputError("random_hermitian: d must be >= 1");
  Rng rng(seed);
  const Matrix g = rng.cgaussian_matrix(d, d);
  return (g + g.adjoint()) / 2.0;
}

enum class OperatorKind { general, hermitian, traceless_hermitian };

inline OperatorKind operator_kind_from_string(const std::string& s) {
  if (s == "general") return OperatorKind::general;
  if (s == "hermitian") return OperatorKind::hermitian;
  if (s == "traceless-hermitian") return OperatorKind::traceless_hermitian;
  throw InputError("unknown operator kind: " + s);
}

inline BipartiteOperator random_bipartite_operator(int n, int d, Seed seed, OperatorKind kind) {
  if (n < 1 || d < 1) throw InputError("random_bipartite_operator: dims must be >= 1");
  Rng rng(seed);
  Matrix g = rng.cgaussian_matrix(n * d, n * d);
  switch (kind) {
    case OperatorKind::general:
      break;
    case OperatorKind::hermitian:
      g = ((g + g.adjoint()) / 2.0).eval();
      break;
    case OperatorKind::traceless_hermitian:
      g = ((g + g.adjoint()) / 2.0).eval();
      g -= (g.trace() / static_cast<double>(n * d)) * Matrix::Identity(n * d, n * d);
      break;
  }
  return BipartiteOperator(n, d, std::move(g));
}

/// Random mixed state on a product space, with full-rank Ginibre sampling.
inline BipartiteState random_bipartite_state(int n, int d, int rank, Seed seed) {
  return BipartiteState(n, d, random_mixed(n * d, rank, seed));
}

}  // namespace partdist
