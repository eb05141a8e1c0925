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
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "partdist/classical.hpp"
#include "partdist/common.hpp"
#include "partdist/matops.hpp"
#include "partdist/states.hpp"

namespace partdist {

/// Positive operator-valued measure: PSD elements summing to the identity.
class POVM {
 public:
  POVM() = default;
  POVM(int dim, std::vector<Matrix> elements) : dim_(dim), elements_(std::move(elements)) {
    if (dim_ < 1) throw InputError("povm: dim must be >= 1");
    if (elements_.empty()) throw InputError("povm: needs at least one element");
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (Matrix& e : elements_) {
      if (e.rows() != dim_ || e.cols() != dim_) throw InputError("povm: element dimension mismatch");
      e = require_hermitian(e, kTolHerm);
      Eigen::SelfAdjointEigenSolver<Matrix> solver(e, Eigen::EigenvaluesOnly);
      if (solver.eigenvalues().minCoeff() < -kTolPsd) {
        throw InputError("povm: element is not PSD within tolerance");
      }
      sum += e;
    }
    const double completeness = (sum - Matrix::Identity(dim_, dim_)).norm();
    if (completeness > 1e-8) {
      throw InputError("povm: elements sum to identity only within " + std::to_string(completeness));
    }
  }

  int dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const std::vector<Matrix>& elements() const { return elements_; }
  const Matrix& element(int x) const { return elements_[static_cast<std::size_t>(x)]; }

 private:
  int dim_ = 0;
  std::vector<Matrix> elements_;
};

enum class Family { A, B };

inline std::string family_name(Family f) { return f == Family::A ? "A" : "B"; }

/// Membership in the two POVM families: A requires every element trace <= 1
/// and at most dim^2 outcomes, B requires every element trace >= 1.
struct FamilyTag {
  bool in_A = false;
  bool in_B = false;

  bool in(Family f) const { return f == Family::A ? in_A : in_B; }
};

inline FamilyTag classify(const POVM& povm) {
  FamilyTag tag{true, true};
  for (const Matrix& e : povm.elements()) {
    const double tr = e.trace().real();
    if (tr > 1.0 + kTolEq) tag.in_A = false;
    if (tr < 1.0 - kTolEq) tag.in_B = false;
  }
  if (povm.outcomes() > povm.dim() * povm.dim()) tag.in_A = false;
  return tag;
}

namespace detail {

/// Outcome probabilities without the Distribution wrapper; used by hot paths.
inline std::vector<double> raw_outcome_probs(const Matrix& rho, const std::vector<Matrix>& elements) {
  std::vector<double> probs(elements.size());
  for (std::size_t x = 0; x < elements.size(); ++x) {
    probs[x] = (rho * elements[x]).trace().real();
  }
  return probs;
}

}  // namespace detail

/// Outcome statistics Tr(rho A_x). Tiny negatives in [-1e-10, 0) are clamped;
/// the vector is renormalized when its total is within 1e-8 of 1.
inline Distribution outcome_distribution(const DensityMatrix& rho, const POVM& povm) {
  if (rho.dim() != povm.dim()) throw InputError("outcome_distribution: dimension mismatch");
  std::vector<double> probs = detail::raw_outcome_probs(rho.matrix(), povm.elements());
  double sum = 0.0;
  for (double& p : probs) {
    if (p < 0.0) {
      if (p < -1e-10) throw InputError("outcome_distribution: negative probability " + std::to_string(p));
      p = 0.0;
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw InputError("outcome_distribution: probabilities sum to " + std::to_string(sum));
  }
  for (double& p : probs) p /= sum;
  return Distribution(std::move(probs));
}

namespace detail {

/// Rank-one POVM from generating vectors: A_x = S^{-1/2} |v_x><v_x| S^{-1/2}
/// with S = sum_x |v_x><v_x|. Returns false when S is numerically singular.
inline bool rank_one_elements_from_vectors(const std::vector<Vector>& vectors, int dim,
                                           std::vector<Matrix>& elements) {
  Matrix s = Matrix::Zero(dim, dim);
  for (const Vector& v : vectors) s += v * v.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> solver((s + s.adjoint()) / 2.0);
  const double largest = solver.eigenvalues().maxCoeff();
  if (largest <= 0.0 || solver.eigenvalues().minCoeff() < 1e-12 * largest) return false;
  Eigen::VectorXd inv_roots = solver.eigenvalues().cwiseSqrt().cwiseInverse();
  const Matrix s_inv_sqrt =
      solver.eigenvectors() * inv_roots.asDiagonal() * solver.eigenvectors().adjoint();
  elements.clear();
  elements.reserve(vectors.size());
  for (const Vector& v : vectors) {
    const Vector w = s_inv_sqrt * v;
    elements.push_back(w * w.adjoint());
  }
  return true;
}

}  // namespace detail

/// Rank-one POVM with m outcomes, d <= m <= d^2, from m Gaussian vectors
/// renormalized through S^{-1/2}; always lands in family A.
inline POVM random_rank_one_povm(int d, int m, Seed seed) {
  if (d < 1) throw InputError("random_rank_one_povm: d must be >= 1");
  if (m < d || m > d * d) throw InputError("random_rank_one_povm: need d <= m <= d^2");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(derive_seed(seed.value, attempt));
    std::vector<Vector> vectors;
    vectors.reserve(static_cast<std::size_t>(m));
    for (int x = 0; x < m; ++x) vectors.push_back(rng.cgaussian_vector(d));
    std::vector<Matrix> elements;
    if (detail::rank_one_elements_from_vectors(vectors, d, elements)) {
      return POVM(d, std::move(elements));
    }
  }
}

/// Rank-one projective measurement from the columns of a Haar-style unitary.
inline POVM random_pvm(int d, Seed seed) {
  const Matrix u = random_unitary(d, seed);
  std::vector<Matrix> elements;
  elements.reserve(static_cast<std::size_t>(d));
  for (int x = 0; x < d; ++x) {
    const Vector v = u.col(x);
    elements.push_back(v * v.adjoint());
  }
  return POVM(d, std::move(elements));
}

/// Sums elements over the parts of a disjoint cover of the outcome set.
inline POVM coarse_grain(const POVM& povm, const std::vector<std::vector<int>>& partition) {
  std::vector<bool> seen(static_cast<std::size_t>(povm.outcomes()), false);
  std::vector<Matrix> elements;
  elements.reserve(partition.size());
  for (const std::vector<int>& part : partition) {
    if (part.empty()) throw InputError("coarse_grain: empty part");
    Matrix sum = Matrix::Zero(povm.dim(), povm.dim());
    for (int idx : part) {
      if (idx < 0 || idx >= povm.outcomes()) throw InputError("coarse_grain: index out of range");
      if (seen[static_cast<std::size_t>(idx)]) throw InputError("coarse_grain: index repeated");
      seen[static_cast<std::size_t>(idx)] = true;
      sum += povm.element(idx);
    }
    elements.push_back(std::move(sum));
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw InputError("coarse_grain: partition does not cover all outcomes");
  }
  return POVM(povm.dim(), std::move(elements));
}

/// Lifts a POVM to an N * d product space as { I_N ⊗ A_x }; outcome
/// statistics of the lifted POVM on a joint state match those of the base
/// POVM on the reduced state.
inline POVM lift(const POVM& povm, int n) {
  if (n < 1) throw InputError("lift: N must be >= 1");
  const Matrix identity = Matrix::Identity(n, n);
  std::vector<Matrix> elements;
  elements.reserve(static_cast<std::size_t>(povm.outcomes()));
  for (const Matrix& e : povm.elements()) {
    elements.push_back(Eigen::kroneckerProduct(identity, e).eval());
  }
  return POVM(n * povm.dim(), std::move(elements));
}

/// Two-outcome PVM projecting onto the nonnegative and negative eigenspaces
/// of rho0 - rho1; eigenvalues within kTolEq of zero count as nonnegative.
/// Its statistics attain the minimal error probability (1 - D_tr) / 2.
inline POVM helstrom_pvm(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != rho1.dim()) throw InputError("helstrom_pvm: dimension mismatch");
  const HermitianEigen eig = hermitian_eigen(rho0.matrix() - rho1.matrix());
  const int d = rho0.dim();
  Matrix plus = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (eig.values[static_cast<std::size_t>(i)] >= -kTolEq) {
      const Vector v = eig.vectors.col(i);
      plus += v * v.adjoint();
    }
  }
  std::vector<Matrix> elements;
  elements.push_back(plus);
  elements.push_back(Matrix::Identity(d, d) - plus);
  return POVM(d, std::move(elements));
}

}  // namespace partdist
