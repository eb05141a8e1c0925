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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "partdist/common.hpp"
#include "partdist/io.hpp"
#include "partdist/quantum.hpp"
#include "partdist/states.hpp"

namespace partdist::decay {

enum class FamilyKind { interpolation, depolarizing_gap, custom_file };

inline std::string family_kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::interpolation:
      return "interpolation";
    case FamilyKind::depolarizing_gap:
      return "depolarizing-gap";
    case FamilyKind::custom_file:
      return "custom-file";
  }
  return "unknown";
}

inline FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "interpolation") return FamilyKind::interpolation;
  if (s == "depolarizing-gap") return FamilyKind::depolarizing_gap;
  if (s == "custom-file") return FamilyKind::custom_file;
  throw InputError("unknown family kind: " + s);
}

/// A parametric family of state pairs indexed by the security parameter n.
///  - interpolation:     rho0^(n) = rho0, rho1^(n) = (1-eps^n) rho0 + eps^n sigma
///  - depolarizing-gap:  rho0^(n) = rho0, rho1^(n) = (1-eps) rho0 + eps sigma
///                       (a constant pair: the gap never decays)
///  - custom-file:       explicit list of pairs; the last pair repeats beyond
///                       the list, so a single entry gives a constant family.
class StatePairFamily {
 public:
  StatePairFamily(FamilyKind kind, DensityMatrix rho0, DensityMatrix sigma, double epsilon)
      : kind_(kind), rho0_(std::move(rho0)), sigma_(std::move(sigma)), epsilon_(epsilon) {
    if (kind_ == FamilyKind::custom_file) {
      throw InputError("family: custom-file needs explicit pairs");
    }
    if (rho0_.dim() != sigma_.dim()) throw InputError("family: base states differ in dimension");
    if (!(epsilon_ > 0.0 && epsilon_ < 1.0)) throw InputError("family: epsilon must be in (0, 1)");
  }

  explicit StatePairFamily(std::vector<std::pair<DensityMatrix, DensityMatrix>> pairs)
      : kind_(FamilyKind::custom_file), pairs_(std::move(pairs)) {
    if (pairs_.empty()) throw InputError("family: custom-file needs at least one pair");
    const int d = pairs_.front().first.dim();
    for (const auto& [a, b] : pairs_) {
      if (a.dim() != d || b.dim() != d) throw InputError("family: pair dimensions differ");
    }
  }

  FamilyKind kind() const { return kind_; }
  int dim() const {
    return kind_ == FamilyKind::custom_file ? pairs_.front().first.dim() : rho0_.dim();
  }
  double epsilon() const { return epsilon_; }
  const DensityMatrix& rho0() const { return rho0_; }
  const DensityMatrix& sigma() const { return sigma_; }
  const std::vector<std::pair<DensityMatrix, DensityMatrix>>& pairs() const { return pairs_; }

  std::pair<DensityMatrix, DensityMatrix> pair_at(int n) const {
    if (n < 1) throw InputError("family: n must be >= 1");
    switch (kind_) {
      case FamilyKind::interpolation: {
        const double w = std::pow(epsilon_, n);
        return {rho0_, DensityMatrix((1.0 - w) * rho0_.matrix() + w * sigma_.matrix())};
      }
      case FamilyKind::depolarizing_gap:
        return {rho0_,
                DensityMatrix((1.0 - epsilon_) * rho0_.matrix() + epsilon_ * sigma_.matrix())};
      case FamilyKind::custom_file: {
        const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(n) - 1,
                                                      pairs_.size() - 1);
        return pairs_[idx];
      }
    }
    throw InternalError("family: unknown kind");
  }

 private:
  FamilyKind kind_;
  DensityMatrix rho0_;
  DensityMatrix sigma_;
  double epsilon_ = 0.0;
  std::vector<std::pair<DensityMatrix, DensityMatrix>> pairs_;
};

inline io::json family_to_json(const StatePairFamily& family) {
  io::json j{{"kind", family_kind_name(family.kind())}, {"d", family.dim()}};
  if (family.kind() == FamilyKind::custom_file) {
    io::json pairs = io::json::array();
    for (const auto& [a, b] : family.pairs()) {
      pairs.push_back(io::json{{"rho0", io::density_to_json(a)}, {"rho1", io::density_to_json(b)}});
    }
    j["pairs"] = std::move(pairs);
  } else {
    j["epsilon"] = family.epsilon();
    j["rho0"] = io::density_to_json(family.rho0());
    j["sigma"] = io::density_to_json(family.sigma());
  }
  return j;
}

inline StatePairFamily family_from_json(const io::json& j) {
  if (!j.contains("kind")) throw InputError("family: missing field \"kind\"");
  const FamilyKind kind = family_kind_from_string(j.at("kind").get<std::string>());
  if (kind == FamilyKind::custom_file) {
    if (!j.contains("pairs") || !j.at("pairs").is_array()) {
      throw InputError("family: custom-file needs an array field \"pairs\"");
    }
    std::vector<std::pair<DensityMatrix, DensityMatrix>> pairs;
    for (const io::json& p : j.at("pairs")) {
      pairs.emplace_back(io::density_from_json(p.at("rho0")), io::density_from_json(p.at("rho1")));
    }
    return StatePairFamily(std::move(pairs));
  }
  for (const char* field : {"epsilon", "rho0", "sigma"}) {
    if (!j.contains(field)) throw InputError(std::string("family: missing field \"") + field + "\"");
  }
  return StatePairFamily(kind, io::density_from_json(j.at("rho0")),
                         io::density_from_json(j.at("sigma")), j.at("epsilon").get<double>());
}

/// Distinguishability measure evaluated along a family.
struct MeasureId {
  enum class Kind { d_k, d_tr, sd_estimate, pe_gap, one_minus_f0, schatten_metric };
  Kind kind = Kind::d_tr;
  int k = 0;                  // d_k order; sd_estimate partial order (0 = full sum)
  Family family = Family::A;  // sd_estimate family
  double q = 1.0;             // schatten_metric order

  static MeasureId d_tr() { return {Kind::d_tr}; }
  static MeasureId d_k(int k) { return {Kind::d_k, k}; }
  static MeasureId sd_estimate(Family family, int k = 0) {
    return {Kind::sd_estimate, k, family};
  }
  static MeasureId pe_gap() { return {Kind::pe_gap}; }
  static MeasureId one_minus_f0() { return {Kind::one_minus_f0}; }
  static MeasureId schatten_metric(double q) { return {Kind::schatten_metric, 0, Family::A, q}; }

  std::string name() const {
    switch (kind) {
      case Kind::d_k:
        return "dk:" + std::to_string(k);
      case Kind::d_tr:
        return "dtr";
      case Kind::sd_estimate: {
        std::string base = k > 0 ? "sdk:" : "sd:";
        base += family_name(family);
        if (k > 0) base += ":" + std::to_string(k);
        return base;
      }
      case Kind::pe_gap:
        return "pegap";
      case Kind::one_minus_f0:
        return "1mf0";
      case Kind::schatten_metric:
        return std::isinf(q) ? std::string("schatten:inf")
                             : "schatten:" + (q == static_cast<int>(q)
                                                  ? std::to_string(static_cast<int>(q))
                                                  : std::to_string(q));
    }
    return "unknown";
  }

  static MeasureId parse(const std::string& text) {
    if (text == "dtr") return d_tr();
    if (text == "pegap") return pe_gap();
    if (text == "1mf0") return one_minus_f0();
    if (text.rfind("dk:", 0) == 0) return d_k(std::stoi(text.substr(3)));
    if (text.rfind("schatten:", 0) == 0) {
      const std::string arg = text.substr(9);
      return schatten_metric(arg == "inf" ? kInfiniteOrder : std::stod(arg));
    }
    if (text.rfind("sd:", 0) == 0 || text.rfind("sdk:", 0) == 0) {
      const bool partial = text.rfind("sdk:", 0) == 0;
      const std::string rest = text.substr(partial ? 4 : 3);
      const std::size_t colon = rest.find(':');
      const std::string fam = colon == std::string::npos ? rest : rest.substr(0, colon);
      Family family;
      if (fam == "A") {
        family = Family::A;
      } else if (fam == "B") {
        family = Family::B;
      } else {
        throw InputError("measure: family must be A or B in \"" + text + "\"");
      }
      int k = 0;
      if (partial) {
        if (colon == std::string::npos) throw InputError("measure: missing k in \"" + text + "\"");
        k = std::stoi(rest.substr(colon + 1));
        if (k < 1) throw InputError("measure: k must be >= 1 in \"" + text + "\"");
      }
      return sd_estimate(family, k);
    }
    throw InputError("unknown measure id: " + text);
  }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

/// Values m_n of a measure along the family for n = 1..n_max. Search-based
/// entries use a fixed budget with seeds derived per (measure, n), so the
/// sequence is deterministic and independent of evaluation order.
inline std::vector<double> measure_sequence(const StatePairFamily& family, const MeasureId& measure,
                                            int n_max, int budget = 16, Seed seed = Seed{0}) {
  if (n_max < 1) throw InputError("measure_sequence: n_max must be >= 1");
  if (budget < 1) throw InputError("measure_sequence: budget must be >= 1");
  const std::uint64_t tag = detail::fnv1a(measure.name());
  std::vector<double> values(static_cast<std::size_t>(n_max));
  parallel_for(values.size(), [&](std::size_t i) {
    const int n = static_cast<int>(i) + 1;
    const auto [rho0, rho1] = family.pair_at(n);
    double value = 0.0;
    switch (measure.kind) {
      case MeasureId::Kind::d_k:
        value = partitioned_trace_distance(rho0, rho1, std::min(measure.k, rho0.dim()));
        break;
      case MeasureId::Kind::d_tr:
        value = trace_distance(rho0, rho1);
        break;
      case MeasureId::Kind::sd_estimate: {
        const Seed n_seed{derive_seed(seed.value, tag, static_cast<std::uint64_t>(n))};
        value = measure.k > 0
                    ? estimate_sd_k(rho0, rho1, measure.k, measure.family, budget, n_seed).value
                    : estimate_sd(rho0, rho1, measure.family, budget, n_seed).value;
        break;
      }
      case MeasureId::Kind::pe_gap:
        value = 0.5 - pe_quantum(rho0, rho1);
        break;
      case MeasureId::Kind::one_minus_f0:
        value = 1.0 - fidelity(rho0, rho1);
        break;
      case MeasureId::Kind::schatten_metric:
        value = schatten_norm(rho0.matrix() - rho1.matrix(), measure.q);
        break;
    }
    values[i] = value;
  });
  return values;
}

/// Decay summary of one nonnegative sequence m_1..m_{n_max}.
struct MeasureDecay {
  double eps_hat = 0.0;       // max over n >= n0 of m_n^{1/n}
  bool indistinguishable = false;  // eps_hat < 1 - 1e-9 on the computed range
  bool shape_warning = false;      // envelope below 1 but the tail is not decaying
  bool degenerate = false;         // tail is identically ~0
  double log_fit_rate = 0.0;       // auxiliary least-squares geometric fit
};

/// Smallest geometric envelope of the tail n >= n0. The verdict is a
/// finite-horizon statement: it witnesses m_n <= eps_hat^n on the computed
/// range only. Sequences whose envelope is below 1 only because the horizon
/// is finite (e.g. constants below 1) carry a shape warning.
inline MeasureDecay decay_rate(const std::vector<double>& values, int n0) {
  const int n_max = static_cast<int>(values.size());
  if (n0 < 1 || n0 > n_max) throw InputError("decay_rate: empty tail (n0 out of range)");
  MeasureDecay out;
  out.degenerate = true;
  for (int n = n0; n <= n_max; ++n) {
    const double m = values[static_cast<std::size_t>(n - 1)];
    if (m < 0.0) throw InputError("decay_rate: values must be nonnegative");
    if (m > 1e-15) out.degenerate = false;
    out.eps_hat = std::max(out.eps_hat, m > 0.0 ? std::pow(m, 1.0 / n) : 0.0);
  }
  out.indistinguishable = out.eps_hat < 1.0 - 1e-9;

  int flat = 0, comparisons = 0;
  for (int n = n0; n < n_max; ++n) {
    const double cur = values[static_cast<std::size_t>(n - 1)];
    const double next = values[static_cast<std::size_t>(n)];
    if (cur <= 1e-300) continue;
    ++comparisons;
    if (next / cur >= 1.0 - 1e-9) ++flat;
  }
  out.shape_warning = !out.degenerate && out.indistinguishable && comparisons > 0 &&
                      2 * flat > comparisons;

  double sn = 0.0, slog = 0.0, snn = 0.0, snlog = 0.0;
  int count = 0;
  for (int n = n0; n <= n_max; ++n) {
    const double m = values[static_cast<std::size_t>(n - 1)];
    if (m <= 1e-300) continue;
    const double l = std::log(m);
    sn += n;
    slog += l;
    snn += static_cast<double>(n) * n;
    snlog += n * l;
    ++count;
  }
  if (count >= 2) {
    const double denom = count * snn - sn * sn;
    if (std::abs(denom) > 1e-12) out.log_fit_rate = std::exp((count * snlog - sn * slog) / denom);
  }
  return out;
}

struct AbsorbedRate {
  double epsilon_prime = 0.0;
  int n_prime = 1;
};

/// Smallest n with C^{1/n} eps < 1, plus the absorbed rate C^{1/n} eps. For
/// C <= 1 the first index already works.
inline AbsorbedRate absorb_constant(double c, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("absorb_constant: epsilon outside (0, 1)");
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("absorb_constant: constant must be positive and finite");
  AbsorbedRate out;
  int n = 1;
  if (c > 1.0) {
    // Scan from the closed form and settle the strict inequality exactly.
    n = std::max(1, static_cast<int>(std::floor(std::log(c) / -std::log(epsilon))));
    while (std::pow(c, 1.0 / n) * epsilon >= 1.0) ++n;
    while (n > 1 && std::pow(c, 1.0 / (n - 1)) * epsilon < 1.0) --n;
  }
  out.n_prime = n;
  out.epsilon_prime = std::pow(c, 1.0 / n) * epsilon;
  return out;
}

struct MeasureReport {
  MeasureId id;
  std::vector<double> values;
  MeasureDecay decay;

  /// The verdict used by the cross-measure assertion: the envelope must be
  /// below 1 without a shape warning, so finite-horizon artifacts of
  /// non-decaying sequences do not count as indistinguishability.
  bool credible() const { return decay.indistinguishable && !decay.shape_warning; }
};

struct ChainCheck {
  std::string name;
  bool applicable = false;
  bool ok = true;
  double worst_margin = std::numeric_limits<double>::infinity();
};

struct DecayReport {
  io::json family_spec;
  int n0 = 1;
  int n_max = 1;
  int budget = 16;
  std::uint64_t seed = 0;
  std::vector<MeasureReport> measures;
  bool degenerate_family = false;
  bool any_credible = false;
  bool equivalence_ok = true;
  std::vector<ChainCheck> chains;
};

inline void to_json(io::json& j, const MeasureDecay& d) {
  j = io::json{{"eps_hat", d.eps_hat},
               {"indistinguishable", d.indistinguishable},
               {"shape_warning", d.shape_warning},
               {"degenerate", d.degenerate},
               {"log_fit_rate", d.log_fit_rate}};
}

inline void from_json(const io::json& j, MeasureDecay& d) {
  d.eps_hat = j.at("eps_hat").get<double>();
  d.indistinguishable = j.at("indistinguishable").get<bool>();
  d.shape_warning = j.at("shape_warning").get<bool>();
  d.degenerate = j.at("degenerate").get<bool>();
  d.log_fit_rate = j.at("log_fit_rate").get<double>();
}

inline void to_json(io::json& j, const MeasureReport& r) {
  j = io::json{{"measure", r.id.name()}, {"values", r.values}, {"decay", r.decay},
               {"credible", r.credible()}};
}

inline void to_json(io::json& j, const ChainCheck& c) {
  j = io::json{{"name", c.name}, {"applicable", c.applicable}, {"ok", c.ok},
               {"worst_margin", c.worst_margin}};
}

inline void to_json(io::json& j, const DecayReport& report) {
  j = io::json{{"artifact", "partdist"},
               {"version", kVersion},
               {"family", report.family_spec},
               {"n0", report.n0},
               {"n_max", report.n_max},
               {"budget", report.budget},
               {"seed", report.seed},
               {"measures", report.measures},
               {"degenerate_family", report.degenerate_family},
               {"any_credible", report.any_credible},
               {"equivalence_ok", report.equivalence_ok},
               {"chains", report.chains}};
}

/// Evaluates every requested measure along the family, summarizes decay, and
/// verifies the cross-measure consistency obligations:
///  - if any measure credibly decays, every measure's envelope is below 1;
///  - a partitioned-distance rate implies the trace-distance rate after
///    absorbing d/k into the base;
///  - a family-B partial estimate rate caps the error-probability gap by
///    sqrt(ln 2 / 2) times the square root of the absorbed rate;
///  - Schatten-metric envelopes agree up to absorbed norm-equivalence
///    constants.
/// Violations are recorded in the report, never thrown.
inline DecayReport check_equivalence(const StatePairFamily& family,
                                     const std::vector<MeasureId>& measures, int n0, int n_max,
                                     int budget = 16, Seed seed = Seed{0}) {
  if (n0 < 1 || n0 > n_max) throw InputError("check_equivalence: need 1 <= n0 <= n_max");
  DecayReport report;
  report.family_spec = family_to_json(family);
  report.n0 = n0;
  report.n_max = n_max;
  report.budget = budget;
  report.seed = seed.value;

  for (const MeasureId& id : measures) {
    MeasureReport mr;
    mr.id = id;
    mr.values = measure_sequence(family, id, n_max, budget, seed);
    mr.decay = decay_rate(mr.values, n0);
    report.measures.push_back(std::move(mr));
  }

  report.degenerate_family = !report.measures.empty();
  for (const MeasureReport& mr : report.measures) {
    if (!mr.decay.degenerate) report.degenerate_family = false;
    if (mr.credible()) report.any_credible = true;
  }
  if (report.any_credible) {
    for (const MeasureReport& mr : report.measures) {
      if (!mr.decay.indistinguishable) report.equivalence_ok = false;
    }
  }

  // Reference sequences for the constructive chains.
  const std::vector<double> dtr_seq = measure_sequence(family, MeasureId::d_tr(), n_max);
  const std::vector<double> pe_gap_seq = measure_sequence(family, MeasureId::pe_gap(), n_max);
  const int d = family.dim();
  const double chain_slack = 1e-9;

  for (const MeasureReport& mr : report.measures) {
    // Degenerate (all-zero) sequences have an empty envelope; there is no
    // rate to absorb and nothing to imply.
    if (mr.decay.eps_hat <= 0.0) continue;
    if (mr.id.kind == MeasureId::Kind::d_k && mr.credible()) {
      ChainCheck chain;
      chain.name = "dtr_rate_from_" + mr.id.name();
      chain.applicable = true;
      const AbsorbedRate absorbed =
          absorb_constant(static_cast<double>(d) / std::min(mr.id.k, d), mr.decay.eps_hat);
      for (int n = std::max(n0, absorbed.n_prime); n <= n_max; ++n) {
        const double margin = std::pow(absorbed.epsilon_prime, n) + chain_slack -
                              dtr_seq[static_cast<std::size_t>(n - 1)];
        chain.worst_margin = std::min(chain.worst_margin, margin);
        if (margin < 0.0) chain.ok = false;
      }
      report.chains.push_back(std::move(chain));
    }
    if (mr.id.kind == MeasureId::Kind::sd_estimate && mr.id.family == Family::B && mr.id.k > 0 &&
        mr.credible()) {
      ChainCheck chain;
      chain.name = "pe_gap_rate_from_" + mr.id.name();
      chain.applicable = true;
      const AbsorbedRate absorbed =
          absorb_constant(static_cast<double>(d) / std::min(mr.id.k, d), mr.decay.eps_hat);
      if (absorbed.epsilon_prime < 1.0) {
        const double scale = std::sqrt(std::log(2.0) / 2.0);
        const double root = std::sqrt(absorbed.epsilon_prime);
        for (int n = std::max(n0, absorbed.n_prime); n <= n_max; ++n) {
          const double margin = scale * std::pow(root, n) + chain_slack -
                                pe_gap_seq[static_cast<std::size_t>(n - 1)];
          chain.worst_margin = std::min(chain.worst_margin, margin);
          if (margin < 0.0) chain.ok = false;
        }
      } else {
        chain.ok = false;
      }
      report.chains.push_back(std::move(chain));
    }
  }

  // Schatten-metric envelopes: pointwise domination with the absorbed
  // norm-equivalence constant d |||Z_b||| / |||Z_a|||, then the envelope
  // comparison eps_b <= max(C,1)^{1/n0} eps_a.
  for (const MeasureReport& ma : report.measures) {
    if (ma.id.kind != MeasureId::Kind::schatten_metric || !ma.decay.indistinguishable) continue;
    for (const MeasureReport& mb : report.measures) {
      if (&ma == &mb || mb.id.kind != MeasureId::Kind::schatten_metric) continue;
      ChainCheck chain;
      chain.name = ma.id.name() + "_implies_" + mb.id.name();
      chain.applicable = true;
      const double za = z_norm_constant(NormId::schatten(ma.id.q), d);
      const double zb = z_norm_constant(NormId::schatten(mb.id.q), d);
      const double c = d * zb / za;
      for (int n = n0; n <= n_max; ++n) {
        const double margin = c * ma.values[static_cast<std::size_t>(n - 1)] + chain_slack -
                              mb.values[static_cast<std::size_t>(n - 1)];
        chain.worst_margin = std::min(chain.worst_margin, margin);
        if (margin < 0.0) chain.ok = false;
      }
      const double envelope = std::pow(std::max(c, 1.0), 1.0 / n0) * ma.decay.eps_hat;
      if (mb.decay.eps_hat > envelope + chain_slack) chain.ok = false;
      chain.worst_margin = std::min(chain.worst_margin, envelope + chain_slack - mb.decay.eps_hat);
      report.chains.push_back(std::move(chain));
    }
  }

  return report;
}

inline void save_report(const std::string& path, const DecayReport& report) {
  io::save_json(path, io::json(report));
}

}  // namespace partdist::decay
