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

#include "partdist/exp_indist.hpp"

using namespace partdist;
using decay::FamilyKind;
using decay::MeasureId;
using decay::StatePairFamily;

namespace {

DensityMatrix basis_state(int d, int index) {
  Matrix rho = Matrix::Zero(d, d);
  rho(index, index) = 1.0;
  return DensityMatrix(rho);
}

StatePairFamily orthogonal_interpolation(double epsilon) {
  return StatePairFamily(FamilyKind::interpolation, basis_state(2, 0), basis_state(2, 1), epsilon);
}

}  // namespace

TEST_CASE("measure id parsing round-trips", "[exp_indist]") {
  for (const char* text : {"dtr", "dk:2", "sd:A", "sd:B", "sdk:B:1", "pegap", "1mf0",
                           "schatten:2", "schatten:inf"}) {
    CHECK(MeasureId::parse(text).name() == text);
  }
  CHECK_THROWS_AS(MeasureId::parse("nope"), InputError);
  CHECK_THROWS_AS(MeasureId::parse("sdk:C:1"), InputError);
}

TEST_CASE("interpolation families decay exactly geometrically in trace distance",
          "[exp_indist]") {
  const StatePairFamily family = orthogonal_interpolation(0.7);
  const std::vector<double> values = decay::measure_sequence(family, MeasureId::d_tr(), 20);
  const double base = trace_distance(basis_state(2, 0), basis_state(2, 1));
  for (int n = 1; n <= 20; ++n) {
    CHECK(values[static_cast<std::size_t>(n - 1)] ==
          Catch::Approx(std::pow(0.7, n) * base).margin(1e-12));
  }

  // Identical base states: every entry is zero.
  const StatePairFamily flat(FamilyKind::interpolation, basis_state(2, 0), basis_state(2, 0), 0.5);
  for (double v : decay::measure_sequence(flat, MeasureId::d_tr(), 10)) {
    CHECK(v <= 1e-14);
  }

  // A constant custom pair gives a constant sequence.
  const StatePairFamily constant(
      std::vector<std::pair<DensityMatrix, DensityMatrix>>{{basis_state(2, 0), basis_state(2, 1)}});
  const std::vector<double> flat_values = decay::measure_sequence(constant, MeasureId::d_tr(), 10);
  for (double v : flat_values) CHECK(v == Catch::Approx(1.0));
}

TEST_CASE("decay rate of exact and scaled geometric sequences", "[exp_indist]") {
  std::vector<double> exact(40);
  for (int n = 1; n <= 40; ++n) exact[static_cast<std::size_t>(n - 1)] = std::pow(0.7, n);
  const decay::MeasureDecay plain = decay::decay_rate(exact, 1);
  CHECK(plain.eps_hat == Catch::Approx(0.7).margin(1e-12));
  CHECK(plain.indistinguishable);
  CHECK_FALSE(plain.shape_warning);
  CHECK(plain.log_fit_rate == Catch::Approx(0.7).margin(1e-9));

  // With a constant multiplier above 1 the envelope peaks at the tail start.
  std::vector<double> scaled(40);
  for (int n = 1; n <= 40; ++n) scaled[static_cast<std::size_t>(n - 1)] = 2.0 * std::pow(0.7, n);
  const decay::MeasureDecay shifted = decay::decay_rate(scaled, 10);
  CHECK(shifted.eps_hat == Catch::Approx(std::pow(2.0, 0.1) * 0.7).margin(1e-12));
  CHECK(shifted.eps_hat > 0.7);
  CHECK(shifted.eps_hat < 0.76);
  CHECK(shifted.indistinguishable);

  // Constant sequences: the envelope peaks at the horizon and the shape
  // warning flags the non-decaying tail.
  const std::vector<double> constant(40, 0.3);
  const decay::MeasureDecay flat = decay::decay_rate(constant, 10);
  CHECK(flat.eps_hat == Catch::Approx(std::pow(0.3, 1.0 / 40.0)).margin(1e-12));
  CHECK(flat.indistinguishable);
  CHECK(flat.shape_warning);

  const std::vector<double> zeros(10, 0.0);
  const decay::MeasureDecay degenerate = decay::decay_rate(zeros, 2);
  CHECK(degenerate.degenerate);
  CHECK(degenerate.eps_hat == 0.0);
  CHECK_FALSE(degenerate.shape_warning);

  CHECK_THROWS_AS(decay::decay_rate(zeros, 11), InputError);
  CHECK_THROWS_AS(decay::decay_rate(zeros, 0), InputError);
}

TEST_CASE("constant absorption", "[exp_indist]") {
  const decay::AbsorbedRate trivial = decay::absorb_constant(1.0, 0.5);
  CHECK(trivial.n_prime == 1);
  CHECK(trivial.epsilon_prime == Catch::Approx(0.5));

  const decay::AbsorbedRate four = decay::absorb_constant(4.0, 0.5);
  CHECK(four.n_prime == 3);
  CHECK(four.epsilon_prime == Catch::Approx(std::pow(4.0, 1.0 / 3.0) * 0.5));
  CHECK(four.epsilon_prime < 1.0);

  const decay::AbsorbedRate two = decay::absorb_constant(2.0, 0.9);
  CHECK(two.n_prime == 7);
  CHECK(two.epsilon_prime < 1.0);
  CHECK(std::pow(2.0, 1.0 / (two.n_prime - 1)) * 0.9 >= 1.0);

  const decay::AbsorbedRate below = decay::absorb_constant(0.25, 0.9);
  CHECK(below.n_prime == 1);
  CHECK(below.epsilon_prime == Catch::Approx(0.225));

  CHECK_THROWS_AS(decay::absorb_constant(2.0, 1.0), InputError);
  CHECK_THROWS_AS(decay::absorb_constant(0.0, 0.5), InputError);
}

TEST_CASE("equivalence report on the interpolation family", "[exp_indist]") {
  const StatePairFamily family = orthogonal_interpolation(0.7);
  const std::vector<MeasureId> measures{
      MeasureId::d_k(1),       MeasureId::d_tr(),
      MeasureId::one_minus_f0(), MeasureId::sd_estimate(Family::A),
      MeasureId::sd_estimate(Family::B, 2), MeasureId::pe_gap(),
      MeasureId::schatten_metric(1.0), MeasureId::schatten_metric(2.0),
      MeasureId::schatten_metric(kInfiniteOrder)};
  const decay::DecayReport report =
      decay::check_equivalence(family, measures, 10, 40, 16, Seed{7});

  CHECK_FALSE(report.degenerate_family);
  CHECK(report.any_credible);
  CHECK(report.equivalence_ok);
  for (const auto& mr : report.measures) {
    INFO(mr.id.name() << " eps_hat " << mr.decay.eps_hat);
    CHECK(mr.decay.indistinguishable);
  }
  // The base states are pure and orthogonal, so the fidelity gap decays at
  // the same base rate and the whole band sits around 0.7.
  for (const auto& mr : report.measures) {
    if (mr.id.kind == MeasureId::Kind::d_k || mr.id.kind == MeasureId::Kind::d_tr ||
        mr.id.kind == MeasureId::Kind::one_minus_f0 ||
        mr.id.kind == MeasureId::Kind::sd_estimate) {
      INFO(mr.id.name() << " eps_hat " << mr.decay.eps_hat);
      CHECK(mr.decay.eps_hat >= 0.65);
      CHECK(mr.decay.eps_hat <= 0.75);
    }
  }
  for (const auto& chain : report.chains) {
    INFO(chain.name << " margin " << chain.worst_margin);
    CHECK(chain.ok);
  }
  // All three Schatten pairs were compared in both directions.
  int schatten_chains = 0;
  for (const auto& chain : report.chains) {
    if (chain.name.find("schatten") == 0) ++schatten_chains;
  }
  CHECK(schatten_chains == 6);
}

TEST_CASE("identical families are reported as degenerate", "[exp_indist]") {
  const StatePairFamily flat(FamilyKind::interpolation, basis_state(2, 0), basis_state(2, 0), 0.5);
  const decay::DecayReport report = decay::check_equivalence(
      flat, {MeasureId::d_tr(), MeasureId::sd_estimate(Family::B, 2)}, 5, 20, 8, Seed{3});
  CHECK(report.degenerate_family);
  CHECK(report.equivalence_ok);
  for (const auto& mr : report.measures) {
    CHECK(mr.decay.degenerate);
    CHECK(mr.decay.indistinguishable);
  }
}

TEST_CASE("constant-gap families never report credible indistinguishability", "[exp_indist]") {
  const StatePairFamily constant(
      std::vector<std::pair<DensityMatrix, DensityMatrix>>{{basis_state(2, 0), basis_state(2, 1)}});
  std::vector<MeasureId> measures{MeasureId::d_tr(), MeasureId::d_k(1),
                                  MeasureId::one_minus_f0(),
                                  MeasureId::sd_estimate(Family::A),
                                  MeasureId::sd_estimate(Family::B, 2)};
  const decay::DecayReport report = decay::check_equivalence(constant, measures, 10, 40, 8, Seed{5});
  CHECK_FALSE(report.any_credible);
  CHECK(report.equivalence_ok);  // vacuously: no credible decay anywhere
  for (const auto& mr : report.measures) {
    INFO(mr.id.name() << " eps_hat " << mr.decay.eps_hat);
    CHECK_FALSE(mr.credible());
  }
  // The full-range measures hit the envelope exactly at 1.
  CHECK(report.measures[0].decay.eps_hat >= 1.0 - 1e-9);

  // The depolarizing-gap family behaves the same way: a constant pair whose
  // gap is epsilon times the base distance.
  const StatePairFamily depol(FamilyKind::depolarizing_gap, basis_state(2, 0), basis_state(2, 1),
                              0.6);
  const decay::DecayReport depol_report =
      decay::check_equivalence(depol, {MeasureId::d_tr(), MeasureId::d_k(1)}, 5, 30, 8, Seed{6});
  CHECK_FALSE(depol_report.any_credible);
  for (const auto& mr : depol_report.measures) {
    CHECK(mr.decay.shape_warning);
  }
}

TEST_CASE("family specs serialize and reload", "[exp_indist]") {
  const StatePairFamily family = orthogonal_interpolation(0.7);
  const io::json j = decay::family_to_json(family);
  const StatePairFamily reloaded = decay::family_from_json(j);
  CHECK(reloaded.kind() == FamilyKind::interpolation);
  CHECK(reloaded.dim() == 2);
  CHECK(reloaded.epsilon() == Catch::Approx(0.7));
  const auto [a, b] = reloaded.pair_at(3);
  const auto [c, d] = family.pair_at(3);
  CHECK((a.matrix() - c.matrix()).norm() == 0.0);
  CHECK((b.matrix() - d.matrix()).norm() == 0.0);

  CHECK_THROWS_AS(decay::family_from_json(io::json{{"kind", "interpolation"}}), InputError);
  CHECK_THROWS_AS(
      StatePairFamily(FamilyKind::interpolation, basis_state(2, 0), basis_state(2, 1), 1.0),
      InputError);
}
