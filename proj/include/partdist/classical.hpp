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
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "partdist/common.hpp"

namespace partdist {

/// Finite probability distribution. Entries in [-1e-12, 0) are clamped to
/// zero at construction; the total must be 1 within 1e-8.
class Distribution {
 public:
  Distribution() = default;
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    double sum = 0.0;
    for (double& p : probs_) {
      if (p < 0.0) {
        if (p < -1e-12) throw InputError("distribution: negative probability " + std::to_string(p));
        p = 0.0;
      }
      if (!std::isfinite(p)) throw InputError("distribution: non-finite probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-8) {
      throw InputError("distribution: total " + std::to_string(sum) + " is not 1");
    }
  }

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Joint distribution over (b, x) pairs; rows index b, columns index x.
class JointDistribution {
 public:
  explicit JointDistribution(Eigen::MatrixXd table) : table_(std::move(table)) {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < table_.rows(); ++r) {
      for (Eigen::Index c = 0; c < table_.cols(); ++c) {
        double& p = table_(r, c);
        if (p < 0.0) {
          if (p < -1e-12) throw InputError("joint distribution: negative entry");
          p = 0.0;
        }
        sum += p;
      }
    }
    if (std::abs(sum - 1.0) > 1e-8) throw InputError("joint distribution: total is not 1");
  }

  const Eigen::MatrixXd& table() const { return table_; }

 private:
  Eigen::MatrixXd table_;
};

namespace detail {

inline double xlog2(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

/// Sum of the k largest entries (stable ties by original index).
inline double top_k_sum(std::vector<double> values, int k) {
  std::stable_sort(values.begin(), values.end(), std::greater<double>());
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += values[static_cast<std::size_t>(i)];
  return sum;
}

/// Sum of the k smallest entries.
inline double bottom_k_sum(std::vector<double> values, int k) {
  std::stable_sort(values.begin(), values.end());
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += values[static_cast<std::size_t>(i)];
  return sum;
}

inline void require_same_length(const Distribution& p0, const Distribution& p1) {
  if (p0.size() != p1.size()) throw InputError("distributions have different lengths");
}

inline void require_k_range(int k, int n) {
  if (k < 0 || k > n) {
    throw InputError("k = " + std::to_string(k) + " out of range [0, " + std::to_string(n) + "]");
  }
}

/// Per-outcome terms p(x) J(p_x(0)) of the mutual information for a uniform
/// binary input; outcomes with p0(x) + p1(x) = 0 contribute 0.
inline std::vector<double> sd_terms(const Distribution& p0, const Distribution& p1);

}  // namespace detail

/// Binary entropy in bits, with 0 log 0 = 0.
inline double binary_entropy(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12) throw InputError("binary_entropy: argument outside [0, 1]");
  p = std::clamp(p, 0.0, 1.0);
  return -detail::xlog2(p) - detail::xlog2(1.0 - p);
}

inline double j_func(double p) { return 1.0 - binary_entropy(p); }

/// Mutual information H(B) + H(X) - H(B, X) in bits.
inline double mutual_information(const JointDistribution& joint) {
  const Eigen::MatrixXd& t = joint.table();
  double hb = 0.0, hx = 0.0, hbx = 0.0;
  for (Eigen::Index b = 0; b < t.rows(); ++b) hb -= detail::xlog2(t.row(b).sum());
  for (Eigen::Index x = 0; x < t.cols(); ++x) hx -= detail::xlog2(t.col(x).sum());
  for (Eigen::Index b = 0; b < t.rows(); ++b)
    for (Eigen::Index x = 0; x < t.cols(); ++x) hbx -= detail::xlog2(t(b, x));
  return std::max(0.0, hb + hx - hbx);
}

namespace detail {

inline std::vector<double> sd_terms(const Distribution& p0, const Distribution& p1) {
  require_same_length(p0, p1);
  std::vector<double> terms(static_cast<std::size_t>(p0.size()));
  for (int x = 0; x < p0.size(); ++x) {
    const double px = (p0[x] + p1[x]) / 2.0;
    terms[static_cast<std::size_t>(x)] =
        px > 0.0 ? px * j_func(p0[x] / (2.0 * px)) : 0.0;
  }
  return terms;
}

}  // namespace detail

/// Mutual information between a uniform binary input labelled by the two
/// distributions and the outcome; symmetric, in [0, total variation].
inline double sd_classical(const Distribution& p0, const Distribution& p1) {
  const std::vector<double> terms = detail::sd_terms(p0, p1);
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

/// Sum of the k largest per-outcome terms of sd_classical. Equivalent to the
/// maximum over k-subsets because the terms are nonnegative.
inline double sd_k_classical(const Distribution& p0, const Distribution& p1, int k) {
  detail::require_k_range(k, p0.size());
  return detail::top_k_sum(detail::sd_terms(p0, p1), k);
}

/// Sum of the k largest values of |p0(x) - p1(x)| / 2.
inline double d_k_classical(const Distribution& p0, const Distribution& p1, int k) {
  detail::require_same_length(p0, p1);
  detail::require_k_range(k, p0.size());
  std::vector<double> gaps(static_cast<std::size_t>(p0.size()));
  for (int x = 0; x < p0.size(); ++x) gaps[static_cast<std::size_t>(x)] = std::abs(p0[x] - p1[x]) / 2.0;
  return detail::top_k_sum(std::move(gaps), k);
}

/// Sum of the (#X - k) smallest values of sqrt(p0(x) p1(x)); k = 0 gives the
/// Bhattacharyya overlap.
inline double f_k_classical(const Distribution& p0, const Distribution& p1, int k) {
  detail::require_same_length(p0, p1);
  detail::require_k_range(k, p0.size());
  std::vector<double> overlaps(static_cast<std::size_t>(p0.size()));
  for (int x = 0; x < p0.size(); ++x)
    overlaps[static_cast<std::size_t>(x)] = std::sqrt(p0[x] * p1[x]);
  return detail::bottom_k_sum(std::move(overlaps), p0.size() - k);
}

/// Minimal average error probability for equiprobable sources:
/// (1/2) sum_x min(p0(x), p1(x)).
inline double pe_classical(const Distribution& p0, const Distribution& p1) {
  detail::require_same_length(p0, p1);
  double sum = 0.0;
  for (int x = 0; x < p0.size(); ++x) sum += std::min(p0[x], p1[x]);
  return sum / 2.0;
}

/// True when every descending prefix sum of q is at most the matching prefix
/// sum of r plus 1e-9; the shorter vector is zero-padded.
inline bool weak_submajorize(std::vector<double> q, std::vector<double> r) {
  const std::size_t m = std::max(q.size(), r.size());
  q.resize(m, 0.0);
  r.resize(m, 0.0);
  std::sort(q.begin(), q.end(), std::greater<double>());
  std::sort(r.begin(), r.end(), std::greater<double>());
  double sq = 0.0, sr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sq += q[i];
    sr += r[i];
    if (sq > sr + 1e-9) return false;
  }
  return true;
}

/// Worst margin of the prefix-sum comparison above (min over prefixes of
/// prefix_r - prefix_q); nonnegative within 1e-9 iff weak_submajorize holds.
inline double weak_submajorize_margin(std::vector<double> q, std::vector<double> r) {
  const std::size_t m = std::max(q.size(), r.size());
  q.resize(m, 0.0);
  r.resize(m, 0.0);
  std::sort(q.begin(), q.end(), std::greater<double>());
  std::sort(r.begin(), r.end(), std::greater<double>());
  double sq = 0.0, sr = 0.0, margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    sq += q[i];
    sr += r[i];
    margin = std::min(margin, sr - sq);
  }
  return margin;
}

/// Checks m Q_k >= k Q_m - 1e-9 for the descending partial sums Q of a
/// nonnegative vector.
inline bool partial_sum_bound_check(const std::vector<double>& values, int k, int m) {
  const int n = static_cast<int>(values.size());
  if (k < 0 || m < k || m > n) throw InputError("partial_sum_bound_check: need 0 <= k <= m <= n");
  std::vector<double> sorted = values;
  for (double v : sorted) {
    if (v < 0.0) throw InputError("partial_sum_bound_check: values must be nonnegative");
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double qk = 0.0, qm = 0.0;
  for (int i = 0; i < m; ++i) {
    qm += sorted[static_cast<std::size_t>(i)];
    if (i < k) qk = qm;
  }
  return m * qk >= k * qm - 1e-9;
}

}  // namespace partdist
