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

#include <catch2/catch_amalgamated.hpp>

#include "partdist/states.hpp"

using namespace partdist;

TEST_CASE("random pure states are rank-one, unit trace, deterministic", "[states]") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DensityMatrix rho = random_pure(3, Seed{seed});
    const double purity = (rho.matrix() * rho.matrix()).trace().real();
    CHECK(purity == Catch::Approx(1.0).margin(1e-10));
  }
  const DensityMatrix a = random_pure(4, Seed{9});
  const DensityMatrix b = random_pure(4, Seed{9});
  CHECK((a.matrix() - b.matrix()).norm() == 0.0);

  const DensityMatrix one = random_pure(1, Seed{3});
  CHECK(one.matrix()(0, 0).real() == Catch::Approx(1.0));
}

TEST_CASE("random mixed states", "[states]") {
  CHECK_THROWS_AS(random_mixed(2, 0, Seed{1}), InputError);
  CHECK_THROWS_AS(random_mixed(2, 3, Seed{1}), InputError);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DensityMatrix rho = random_mixed(2, 2, Seed{seed});
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() > 0.0);  // full rank almost surely
    CHECK(solver.eigenvalues().minCoeff() >= -1e-12);
  }

  const DensityMatrix rank1 = random_mixed(3, 1, Seed{17});
  const double purity = (rank1.matrix() * rank1.matrix()).trace().real();
  CHECK(purity == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("random unitary and hermitian generators", "[states]") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix u = random_unitary(4, Seed{seed});
    CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).norm() <= 1e-10);
    for (double s : singular_values(u)) CHECK(s == Catch::Approx(1.0).margin(1e-10));

    const Matrix h = random_hermitian(3, Seed{seed});
    CHECK(hermiticity_residual(h) <= 1e-12);

    const BipartiteOperator t =
        random_bipartite_operator(2, 3, Seed{seed}, OperatorKind::traceless_hermitian);
    CHECK(std::abs(t.op.trace()) <= 1e-12);
    CHECK(hermiticity_residual(t.op) <= 1e-12);

    const BipartiteOperator g =
        random_bipartite_operator(2, 2, Seed{seed}, OperatorKind::hermitian);
    CHECK(hermiticity_residual(g.op) <= 1e-12);
  }
}

TEST_CASE("generated density matrices always satisfy the type invariants", "[states]") {
  // The DensityMatrix constructor revalidates Hermiticity, positivity and
  // trace, so surviving construction is the check.
  for (int d : {2, 3, 4}) {
    for (std::uint64_t seed = 0; seed < 10000; seed += 3) {
      const int rank = 1 + static_cast<int>(seed % d);
      CHECK_NOTHROW(random_mixed(d, rank, Seed{seed}));
    }
  }
}

TEST_CASE("bipartite state split must match the dimension", "[states]") {
  CHECK_THROWS_AS(BipartiteState(2, 3, random_mixed(4, 4, Seed{0})), InputError);
  const BipartiteState ok(2, 2, random_mixed(4, 4, Seed{0}));
  CHECK(ok.reduced_second().dim() == 2);
}
