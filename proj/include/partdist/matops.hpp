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
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "partdist/common.hpp"

namespace partdist {

inline void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw InputError(std::string(what) + ": non-finite entries");
}

inline double hermiticity_residual(const Matrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Checks the Hermiticity residual and returns (H + H†)/2, which removes the
/// floating-point asymmetry before a self-adjoint eigensolve.
inline Matrix require_hermitian(const Matrix& h, double tol = kTolHerm) {
  require_finite(h, "hermitian matrix");
  const double res = hermiticity_residual(h);
  if (!(res <= tol)) {
    throw InputError("matrix is not Hermitian within tolerance (residual " +
                     std::to_string(res) + ")");
  }
  return (h + h.adjoint()) / 2.0;
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues descending.
struct HermitianEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
};

inline HermitianEigen hermitian_eigen(const Matrix& h, double tol = kTolHerm) {
  const Matrix sym = require_hermitian(h, tol);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw InternalError("eigensolve failed");
  const int d = static_cast<int>(sym.rows());
  HermitianEigen out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  // Eigen returns ascending order; flip to descending.
  for (int i = 0; i < d; ++i) {
    out.values[i] = solver.eigenvalues()(d - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return out;
}

/// Singular values of any finite matrix, descending.
inline std::vector<double> singular_values(const Matrix& a) {
  require_finite(a, "singular_values");
  Eigen::JacobiSVD<Matrix> svd(a);
  std::vector<double> s(svd.singularValues().data(),
                        svd.singularValues().data() + svd.singularValues().size());
  // Eigen returns descending values already; enforce it for safety.
  std::stable_sort(s.begin(), s.end(), std::greater<double>());
  return s;
}

/// Sum of the k largest singular values. k = 0 is admitted and gives 0; k = 1
/// is the spectral norm and k = min(rows, cols) the trace norm.
inline double ky_fan_norm(const Matrix& a, int k) {
  const int kmax = static_cast<int>(std::min(a.rows(), a.cols()));
  if (k < 0 || k > kmax) {
    throw InputError("ky_fan_norm: k = " + std::to_string(k) + " out of range [0, " +
                     std::to_string(kmax) + "]");
  }
  if (k == 0) return 0.0;
  const std::vector<double> s = singular_values(a);
  return std::accumulate(s.begin(), s.begin() + k, 0.0);
}

inline constexpr double kInfiniteOrder = std::numeric_limits<double>::infinity();

/// Schatten q-norm, q >= 1 or infinity (spectral norm).
inline double schatten_norm(const Matrix& a, double q) {
  if (!(q >= 1.0)) throw InputError("schatten_norm: order must be >= 1");
  const std::vector<double> s = singular_values(a);
  if (std::isinf(q)) return s.empty() ? 0.0 : s.front();
  if (q == 1.0) return std::accumulate(s.begin(), s.end(), 0.0);
  if (q == 2.0) {
    double sum = 0.0;
    for (double v : s) sum += v * v;
    return std::sqrt(sum);
  }
  double sum = 0.0;
  for (double v : s) sum += std::pow(v, q);
  return std::pow(sum, 1.0 / q);
}

/// Unique PSD square root of a PSD Hermitian matrix. Eigenvalues in
/// [-kTolPsd, 0) are clamped to zero; anything lower is rejected.
inline Matrix psd_sqrt(const Matrix& a) {
  const HermitianEigen eig = hermitian_eigen(a);
  const int d = static_cast<int>(a.rows());
  Eigen::VectorXd roots(d);
  for (int i = 0; i < d; ++i) {
    double v = eig.values[i];
    if (v < -kTolPsd) {
      throw InputError("psd_sqrt: eigenvalue " + std::to_string(v) + " below -tol_psd");
    }
    roots(i) = std::sqrt(std::max(v, 0.0));
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

/// Operator on a tensor product of an N-dimensional first factor and a
/// d-dimensional second factor; row index is xi * d + x.
struct BipartiteOperator {
  int n_first = 0;
  int d_second = 0;
  Matrix op;

  BipartiteOperator() = default;
  BipartiteOperator(int n, int d, Matrix m) : n_first(n), d_second(d), op(std::move(m)) {
    if (n_first < 1 || d_second < 1) throw InputError("bipartite operator: dims must be >= 1");
    const Eigen::Index total = static_cast<Eigen::Index>(n_first) * d_second;
    if (op.rows() != total || op.cols() != total) {
      throw InputError("bipartite operator: matrix is " + std::to_string(op.rows()) + "x" +
                       std::to_string(op.cols()) + ", expected " + std::to_string(total) +
                       " for split " + std::to_string(n_first) + "*" + std::to_string(d_second));
    }
    require_finite(op, "bipartite operator");
  }
};

/// Partial trace over the first (N-dimensional) factor:
/// A[x, y] = sum_xi At[(xi, x), (xi, y)].
inline Matrix partial_trace_first(const Matrix& at, int n_first, int d_second) {
  const Eigen::Index total = static_cast<Eigen::Index>(n_first) * d_second;
  if (n_first < 1 || d_second < 1 || at.rows() != total || at.cols() != total) {
    throw InputError("partial_trace_first: dimension mismatch");
  }
  require_finite(at, "partial_trace_first");
  Matrix a = Matrix::Zero(d_second, d_second);
  for (int xi = 0; xi < n_first; ++xi) {
    a += at.block(static_cast<Eigen::Index>(xi) * d_second,
                  static_cast<Eigen::Index>(xi) * d_second, d_second, d_second);
  }
  return a;
}

inline Matrix partial_trace_first(const BipartiteOperator& at) {
  return partial_trace_first(at.op, at.n_first, at.d_second);
}

/// Positive and negative parts of a Hermitian matrix: h = pos - neg with
/// pos, neg PSD, pos * neg = 0 and pos + neg = |h|.
struct JordanParts {
  Matrix pos;
  Matrix neg;
};

inline JordanParts jordan_parts(const Matrix& h) {
  const HermitianEigen eig = hermitian_eigen(h);
  const int d = static_cast<int>(h.rows());
  Eigen::VectorXd plus(d), minus(d);
  for (int i = 0; i < d; ++i) {
    plus(i) = std::max(eig.values[i], 0.0);
    minus(i) = std::max(-eig.values[i], 0.0);
  }
  JordanParts out;
  out.pos = eig.vectors * plus.asDiagonal() * eig.vectors.adjoint();
  out.neg = eig.vectors * minus.asDiagonal() * eig.vectors.adjoint();
  return out;
}

/// Orthogonal projectors P, Q with rank(P) + rank(Q) <= k and
/// Tr[(P - Q) H] equal to the Ky Fan k-norm of H. P collects eigenvectors of
/// the k largest |eigenvalue| with nonnegative eigenvalue, Q the negative ones.
struct KyFanProjectors {
  Matrix p;
  Matrix q;
  int rank_p = 0;
  int rank_q = 0;
};

inline KyFanProjectors kyfan_optimal_projectors(const Matrix& h, int k) {
  const HermitianEigen eig = hermitian_eigen(h);
  const int d = static_cast<int>(h.rows());
  if (k < 1 || k > d) throw InputError("kyfan_optimal_projectors: k out of range");
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(eig.values[a]) > std::abs(eig.values[b]);
  });
  KyFanProjectors out;
  out.p = Matrix::Zero(d, d);
  out.q = Matrix::Zero(d, d);
  for (int i = 0; i < k; ++i) {
    const int idx = order[i];
    const Vector v = eig.vectors.col(idx);
    if (eig.values[idx] >= 0.0) {
      out.p += v * v.adjoint();
      ++out.rank_p;
    } else {
      out.q += v * v.adjoint();
      ++out.rank_q;
    }
  }
  return out;
}

/// Block factors of a bipartite operator built from its SVD. With the d x d
/// blocks W_ij of the left singular factor, X_ij of the right one, and the
/// j-th diagonal block S_jj of the singular values, block (i, j) of L is
/// W_ij sqrt(S_jj) and block (i, j) of R is X_ij sqrt(S_jj). These satisfy
/// L R† = Tr_G(At), L L† = Tr_G((At At†)^{1/2}), R R† = Tr_G((At† At)^{1/2}),
/// and every call verifies all three identities.
struct LRFactors {
  Matrix l;  // d x (N^2 d)
  Matrix r;  // d x (N^2 d)
  std::vector<std::pair<int, int>> block_order;
  double residual_a = 0.0;
  double residual_al = 0.0;
  double residual_ar = 0.0;
};

inline LRFactors lr_factorization(const BipartiteOperator& at) {
  const int n = at.n_first;
  const int d = at.d_second;
  const Eigen::Index total = static_cast<Eigen::Index>(n) * d;

  Eigen::JacobiSVD<Matrix> svd(at.op, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  Eigen::VectorXd sqrt_s(total);
  for (Eigen::Index i = 0; i < total; ++i) sqrt_s(i) = std::sqrt(svd.singularValues()(i));

  LRFactors out;
  out.l.resize(d, static_cast<Eigen::Index>(n) * n * d);
  out.r.resize(d, static_cast<Eigen::Index>(n) * n * d);
  out.block_order.reserve(static_cast<std::size_t>(n) * n);
  Eigen::Index col = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Matrix scale =
          sqrt_s.segment(static_cast<Eigen::Index>(j) * d, d).asDiagonal();
      out.l.block(0, col, d, d) =
          u.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) *
          scale;
      out.r.block(0, col, d, d) =
          v.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) *
          scale;
      out.block_order.emplace_back(i, j);
      col += d;
    }
  }

  const Matrix a = partial_trace_first(at);
  const Matrix abs_left = psd_sqrt(at.op * at.op.adjoint());
  const Matrix abs_right = psd_sqrt(at.op.adjoint() * at.op);
  const Matrix a_left = partial_trace_first(abs_left, n, d);
  const Matrix a_right = partial_trace_first(abs_right, n, d);

  out.residual_a = (a - out.l * out.r.adjoint()).norm();
  out.residual_al = (a_left - out.l * out.l.adjoint()).norm();
  out.residual_ar = (a_right - out.r * out.r.adjoint()).norm();

  const double scale = std::max(1.0, at.op.norm());
  const double budget = kTolRecon * scale;
  if (out.residual_a > budget || out.residual_al > budget || out.residual_ar > budget) {
    throw InternalError("lr_factorization: reconstruction residual beyond tolerance");
  }
  return out;
}

/// Unitarily invariant norm selector covering the Schatten and Ky Fan classes.
struct NormId {
  enum class Kind { schatten, ky_fan, trace, spectral, frobenius };
  Kind kind = Kind::trace;
  double q = 1.0;  // Schatten order
  int k = 1;       // Ky Fan order

  static NormId schatten(double q) {
    if (!(q >= 1.0)) throw InputError("NormId: Schatten order must be >= 1");
    return {Kind::schatten, q, 0};
  }
  static NormId ky_fan(int k) {
    if (k < 1) throw InputError("NormId: Ky Fan order must be >= 1");
    return {Kind::ky_fan, 0.0, k};
  }
  static NormId trace() { return {Kind::trace, 1.0, 0}; }
  static NormId spectral() { return {Kind::spectral, 0.0, 0}; }
  static NormId frobenius() { return {Kind::frobenius, 2.0, 0}; }

  double evaluate(const Matrix& a) const {
    switch (kind) {
      case Kind::schatten:
        return schatten_norm(a, q);
      case Kind::ky_fan:
        return ky_fan_norm(a, std::min<int>(k, static_cast<int>(std::min(a.rows(), a.cols()))));
      case Kind::trace:
        return schatten_norm(a, 1.0);
      case Kind::spectral:
        return schatten_norm(a, kInfiniteOrder);
      case Kind::frobenius:
        return schatten_norm(a, 2.0);
    }
    throw InternalError("NormId: unknown kind");
  }

  std::string name() const {
    switch (kind) {
      case Kind::schatten:
        return std::isinf(q) ? std::string("schatten:inf") : "schatten:" + std::to_string(q);
      case Kind::ky_fan:
        return "kyfan:" + std::to_string(k);
      case Kind::trace:
        return "trace";
      case Kind::spectral:
        return "spectral";
      case Kind::frobenius:
        return "frobenius";
    }
    return "unknown";
  }
};

/// Norm of Z = diag(1, 1, 0, ..., 0) for the given norm; requires dim >= 2 so
/// both unit entries exist. Schatten q gives 2^{1/q}, Ky Fan k gives min(k, 2).
inline double z_norm_constant(const NormId& id, int dim) {
  if (dim < 2) throw InputError("z_norm_constant: dim must be >= 2");
  switch (id.kind) {
    case NormId::Kind::schatten:
      return std::isinf(id.q) ? 1.0 : std::pow(2.0, 1.0 / id.q);
    case NormId::Kind::ky_fan:
      if (id.k > dim) throw InputError("z_norm_constant: Ky Fan order exceeds dim");
      return std::min(id.k, 2);
    case NormId::Kind::trace:
      return 2.0;
    case NormId::Kind::spectral:
      return 1.0;
    case NormId::Kind::frobenius:
      return std::sqrt(2.0);
  }
  throw InternalError("z_norm_constant: unknown norm kind");
}

}  // namespace partdist
