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

#include <atomic>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace partdist {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr const char* kVersion = "0.1.0";

// Tolerances shared across the library. Reconstruction residuals are compared
// against kTolRecon scaled by the Frobenius norm of the operator involved.
inline constexpr double kTolHerm = 1e-9;
inline constexpr double kTolPsd = 1e-9;
inline constexpr double kTolRecon = 1e-10;
inline constexpr double kTolEq = 1e-9;

/// Raised on malformed caller input (dimensions, ranges, file contents).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when an internal consistency guarantee fails (signals a bug).
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Seed for every randomized generator and suite in the library.
struct Seed {
  std::uint64_t value = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-trial seeds are derived by chaining splitmix64 over the master seed and
// the index path, so trials are independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

/// Seeded generator used by all samplers: mt19937_64 with the standard library
/// normal/uniform transforms. Sequences are stable for a fixed platform and
/// standard library; cross-implementation reproducibility is not promised.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  explicit Rng(Seed seed) : gen_(seed.value) {}

  double gaussian() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }
  std::uint64_t next_u64() { return gen_(); }

  /// Standard complex Gaussian: independent N(0,1) real and imaginary parts.
  Complex cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  Vector cgaussian_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cgaussian();
    return v;
  }

  Matrix cgaussian_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = cgaussian();
    return m;
  }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return dist(gen_);
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

namespace detail {
inline int& parallel_depth() {
  thread_local int depth = 0;
  return depth;
}
}  // namespace detail

/// Worker count for parallel sections; PARTDIST_THREADS caps it when set.
inline unsigned max_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("PARTDIST_THREADS")) {
    const long requested = std::strtol(env, nullptr, 10);
    if (requested >= 1) return static_cast<unsigned>(std::min<long>(requested, 256));
  }
  return hw;
}

/// Runs fn(i) for i in [0, n). Iterations must be independent; callers write
/// results into index-addressed slots so reductions stay order-deterministic.
/// Nested calls degrade to serial execution.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = max_threads();
  if (n < 2 || workers < 2 || detail::parallel_depth() > 0) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    ++detail::parallel_depth();
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load(std::memory_order_relaxed)) break;
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        break;
      }
    }
    --detail::parallel_depth();
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min<std::size_t>(workers, n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace partdist
