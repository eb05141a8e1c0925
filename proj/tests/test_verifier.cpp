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

#include <cstdlib>

#include <unsupported/Eigen/KroneckerProduct>

#include "partdist/verifier.hpp"

using namespace partdist;
using verify::SuiteConfig;
using verify::VerificationReport;

namespace {

SuiteConfig small_config() {
  SuiteConfig config;
  config.trials = 25;
  config.budget = 4;
  config.master_seed = Seed{424242};
  return config;
}

Matrix bell_projector() {
  Vector phi = Vector::Zero(4);
  phi(0) = 1.0 / std::sqrt(2.0);
  phi(3) = 1.0 / std::sqrt(2.0);
  return phi * phi.adjoint();
}

}  // namespace

TEST_CASE("single-operator check helpers", "[verifier]") {
  const BipartiteOperator bell(2, 2, bell_projector());
  // Reduction is I/2: spectral norm 1/2 against the order-2 norm 1 of the
  // projector itself.
  CHECK(verify::check_kyfan_partial_trace(bell, 1) == Catch::Approx(0.5));
  CHECK(verify::check_kyfan_strengthening(bell));
  CHECK_THROWS_AS(verify::check_kyfan_partial_trace(bell, 3), InputError);

  const BipartiteState rho0t = random_bipartite_state(2, 3, 6, Seed{1});
  const BipartiteState rho1t = random_bipartite_state(2, 3, 2, Seed{2});
  CHECK(verify::check_partial_trace_monotonicity(rho0t, rho1t));

  const DensityMatrix rho0 = random_mixed(3, 3, Seed{3});
  const DensityMatrix rho1 = random_mixed(3, 2, Seed{4});
  const POVM povm = random_rank_one_povm(3, 5, Seed{5});
  const verify::FamilyBoundSlacks slacks = verify::check_family_bounds(rho0, rho1, povm);
  REQUIRE(slacks.family_a_upper.has_value());
  CHECK(*slacks.family_a_upper >= -1e-9);
  CHECK(slacks.classical_chain >= -1e-9);
  CHECK(verify::check_majorization(rho0, rho1, povm, Family::A));

  const POVM pvm = random_pvm(3, Seed{6});
  CHECK(verify::check_majorization(rho0, rho1, pvm, Family::B));

  Matrix h = random_hermitian(3, Seed{7});
  h -= (h.trace() / 3.0) * Matrix::Identity(3, 3);
  CHECK(verify::check_norm_equivalence(h, NormId::schatten(2.0)));
  CHECK(verify::check_norm_equivalence(h, NormId::ky_fan(2)));
  CHECK_THROWS_AS(verify::check_norm_equivalence(Matrix::Identity(3, 3), NormId::trace()),
                  InputError);
}

TEST_CASE("partial-trace norm comparison over many random operators", "[verifier]") {
  // Identity blocks: reduction of I_{Nd} is N I_d, norms tie exactly.
  const int n = 2, d = 3;
  const BipartiteOperator blocks(n, d, Matrix::Identity(n * d, n * d));
  for (int k = 1; k <= d; ++k) {
    CHECK(verify::check_kyfan_partial_trace(blocks, k) == Catch::Approx(0.0).margin(1e-12));
  }

  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const int nn = 2 + static_cast<int>(trial % 2);
    const int dd = 2 + static_cast<int>((trial / 2) % 2);
    const BipartiteOperator at =
        random_bipartite_operator(nn, dd, Seed{trial + 40000}, OperatorKind::general);
    for (int k = 1; k <= dd; ++k) {
      CHECK(verify::check_kyfan_partial_trace(at, k) >= -1e-7);
    }
  }
}

TEST_CASE("norm bounds on kronecker products", "[verifier]") {
  // Singular values of a tensor product are all pairwise products, so both
  // the Frobenius and spectral norms factor exactly.
  Rng rng(12);
  const Matrix b = rng.cgaussian_matrix(2, 2);
  const Matrix c = rng.cgaussian_matrix(3, 3);
  const Matrix at = Eigen::kroneckerProduct(b, c);
  CHECK(schatten_norm(at, 2.0) ==
        Catch::Approx(schatten_norm(b, 2.0) * schatten_norm(c, 2.0)).margin(1e-10));
  CHECK(schatten_norm(at, kInfiniteOrder) ==
        Catch::Approx(schatten_norm(b, kInfiniteOrder) * schatten_norm(c, kInfiniteOrder))
            .margin(1e-10));
  CHECK(verify::check_kyfan_strengthening(BipartiteOperator(2, 3, at)));
}

TEST_CASE("product states with a pure first factor reduce exactly", "[verifier]") {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(trial % 2);
    const int d = 2 + static_cast<int>(trial % 3);
    const DensityMatrix sigma = random_pure(n, Seed{trial + 100});
    const DensityMatrix rho0 = random_mixed(d, d, Seed{trial + 200});
    const DensityMatrix rho1 = random_mixed(d, 1 + static_cast<int>(trial % d), Seed{trial + 300});
    const BipartiteState joint0(
        n, d, DensityMatrix(Eigen::kroneckerProduct(sigma.matrix(), rho0.matrix()).eval()));
    const BipartiteState joint1(
        n, d, DensityMatrix(Eigen::kroneckerProduct(sigma.matrix(), rho1.matrix()).eval()));
    CHECK(verify::check_partial_trace_monotonicity(joint0, joint1));
    // With a pure first factor the joint difference has the same nonzero
    // singular values as the reduced one, so the order-Nk distance equals
    // the order-min(Nk, d) distance of the reduction.
    for (int k = 1; k <= d; ++k) {
      const double joint =
          partitioned_trace_distance(joint0.state, joint1.state, std::min(n * k, n * d));
      const double reduced = partitioned_trace_distance(rho0, rho1, std::min(n * k, d));
      CHECK(joint == Catch::Approx(reduced).margin(1e-10));
    }
  }
}

TEST_CASE("norm equivalence is tight on the two-point spectrum", "[verifier]") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  // Schatten-2: |||A||| = sqrt(2) with Z constant sqrt(2); the trace-norm
  // side ties exactly.
  const io::json inputs{{"a", io::matrix_to_json(a)},
                        {"norm", verify::detail::norm_to_json(NormId::schatten(2.0))}};
  CHECK(verify::detail::eval_traceless_norm_equivalence(inputs) ==
        Catch::Approx(0.0).margin(1e-12));

  // A traceless 2x2 Hermitian has singular values (s, s), so every unitarily
  // invariant norm satisfies the exact identity |||A||| = |||Z||| * spectral.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Matrix h = random_hermitian(2, Seed{seed});
    h -= (h.trace() / 2.0) * Matrix::Identity(2, 2);
    for (const NormId& id : {NormId::schatten(1.0), NormId::schatten(2.0), NormId::ky_fan(2)}) {
      CHECK(id.evaluate(h) == Catch::Approx(z_norm_constant(id, 2) *
                                            schatten_norm(h, kInfiniteOrder)).margin(1e-10));
    }
  }
}

TEST_CASE("tiny suite runs every check once", "[verifier]") {
  SuiteConfig config = small_config();
  config.trials = 1;
  const VerificationReport report = verify::run_suite(config);
  REQUIRE(report.checks.size() == verify::check_definitions().size());
  for (const auto& def : verify::check_definitions()) {
    const auto it = std::find_if(report.checks.begin(), report.checks.end(),
                                 [&](const auto& r) { return r.name == def.name; });
    REQUIRE(it != report.checks.end());
    CHECK(it->trials >= 1);
  }
}

TEST_CASE("small suite passes", "[verifier]") {
  const VerificationReport report = verify::run_suite(small_config());
  for (const auto& check : report.checks) {
    INFO(check.name << " worst slack " << check.worst_slack);
    if (check.hard) CHECK(check.pass());
  }
  CHECK(report.overall_pass);
}

TEST_CASE("suite config validation", "[verifier]") {
  SuiteConfig config = small_config();
  config.trials = 0;
  CHECK_THROWS_AS(verify::run_suite(config), InputError);
  config = small_config();
  config.dims = {1};
  CHECK_THROWS_AS(verify::run_suite(config), InputError);
}

TEST_CASE("negative slack forces failures with replayable witnesses", "[verifier]") {
  SuiteConfig config = small_config();
  config.trials = 2;
  // Deep enough that even checks on unnormalized operator norms, whose
  // natural slack exceeds 1, flip to failing.
  config.slack = -1e9;
  const VerificationReport report = verify::run_suite(config);
  CHECK_FALSE(report.overall_pass);
  for (const auto& check : report.checks) {
    INFO(check.name);
    CHECK(check.passes == 0);
    REQUIRE_FALSE(check.witness.is_null());
    const double replayed = verify::replay_witness(check.witness);
    CHECK(replayed == Catch::Approx(check.witness.at("slack").get<double>()).margin(1e-12));
  }

  // Witnesses survive a serialization round trip.
  const io::json dumped = io::json(report);
  const VerificationReport reloaded = dumped.get<VerificationReport>();
  for (const auto& check : reloaded.checks) {
    const double replayed = verify::replay_witness(check.witness);
    CHECK(replayed == Catch::Approx(check.witness.at("slack").get<double>()).margin(1e-12));
  }
}

TEST_CASE("reports are byte-identical across runs and thread counts", "[verifier]") {
  const SuiteConfig config = small_config();
  const std::string first = io::json(verify::run_suite(config)).dump(2);
  const std::string second = io::json(verify::run_suite(config)).dump(2);
  CHECK(first == second);

  setenv("PARTDIST_THREADS", "1", 1);
  const std::string serial = io::json(verify::run_suite(config)).dump(2);
  setenv("PARTDIST_THREADS", "3", 1);
  const std::string threaded = io::json(verify::run_suite(config)).dump(2);
  unsetenv("PARTDIST_THREADS");
  CHECK(serial == first);
  CHECK(threaded == first);
}
