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

// Command-line front end. All results go to stdout as JSON; diagnostics go to
// stderr. Exit codes: 0 success, 1 verification failure, 2 input/usage error.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "partdist/partdist.hpp"

namespace {

using partdist::DensityMatrix;
using partdist::Family;
using partdist::InputError;
using partdist::Seed;
using json = partdist::io::json;

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InputError(std::string(flag) + ": expected a comma-separated integer list");
    }
  }
  if (out.empty()) throw InputError(std::string(flag) + ": empty list");
  return out;
}

Family parse_family(const std::string& text) {
  if (text == "A") return Family::A;
  if (text == "B") return Family::B;
  throw InputError("--family must be A or B");
}

DensityMatrix load_density(const std::string& path) {
  try {
    return partdist::io::density_from_json(partdist::io::load_json(path));
  } catch (const InputError& err) {
    throw InputError(path + ": " + err.what());
  }
}

void emit(const json& j, const std::optional<std::string>& out_path) {
  std::cout << j.dump(2) << "\n";
  if (out_path) partdist::io::save_json(*out_path, j);
}

int run_measure(const std::string& rho0_path, const std::string& rho1_path,
                const std::string& measure, std::optional<int> k, const std::string& family_text,
                int budget, std::uint64_t seed) {
  const DensityMatrix rho0 = load_density(rho0_path);
  const DensityMatrix rho1 = load_density(rho1_path);
  const int d = rho0.dim();
  json result{{"measure", measure}};

  if (measure == "dk" || measure == "fk") {
    const auto eval = [&](int kk) {
      return measure == "dk" ? partdist::partitioned_trace_distance(rho0, rho1, kk)
                             : partdist::partial_fidelity(rho0, rho1, kk);
    };
    if (k) {
      result["k"] = *k;
      result["value"] = eval(*k);
    } else {
      json values = json::array();
      for (int kk = 0; kk <= d; ++kk) values.push_back(eval(kk));
      result["values"] = std::move(values);
    }
  } else if (measure == "pe") {
    result["value"] = partdist::pe_quantum(rho0, rho1);
  } else if (measure == "fid") {
    result["value"] = partdist::fidelity(rho0, rho1);
  } else if (measure == "sd" || measure == "sdk") {
    const Family family = parse_family(family_text);
    partdist::SDEstimate estimate;
    if (measure == "sdk") {
      if (!k) throw InputError("measure sdk requires --k");
      estimate = partdist::estimate_sd_k(rho0, rho1, *k, family, budget, Seed{seed});
      result["k"] = *k;
    } else {
      estimate = partdist::estimate_sd(rho0, rho1, family, budget, Seed{seed});
    }
    result["family"] = partdist::family_name(family);
    result["budget"] = budget;
    result["seed"] = seed;
    result["value"] = estimate.value;
    result["best_povm"] = partdist::io::povm_to_json(estimate.best_povm);
  } else {
    throw InputError("--measure must be one of dk|fk|sd|sdk|pe|fid");
  }
  emit(result, std::nullopt);
  return 0;
}

int run_verify(int trials, const std::string& dims, const std::string& bipartite,
               std::uint64_t seed, double slack, const std::optional<std::string>& out_path) {
  partdist::verify::SuiteConfig config;
  config.trials = trials;
  config.dims = parse_int_list(dims, "--dims");
  config.bipartite_n = parse_int_list(bipartite, "--bipartite");
  config.master_seed = Seed{seed};
  config.slack = slack;
  const partdist::verify::VerificationReport report = partdist::verify::run_suite(config);
  emit(json(report), out_path);
  return report.overall_pass ? 0 : 1;
}

int run_family(const std::string& spec_path, const std::string& measures_text, int n_max, int n0,
               int budget, std::uint64_t seed, const std::optional<std::string>& out_path) {
  const partdist::decay::StatePairFamily family =
      partdist::decay::family_from_json(partdist::io::load_json(spec_path));
  std::vector<partdist::decay::MeasureId> measures;
  std::stringstream stream(measures_text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) measures.push_back(partdist::decay::MeasureId::parse(item));
  }
  if (measures.empty()) throw InputError("--measures: empty list");
  const partdist::decay::DecayReport report =
      partdist::decay::check_equivalence(family, measures, n0, n_max, budget, Seed{seed});
  emit(json(report), out_path);
  return 0;
}

int run_gen(const std::string& kind, int dim, std::optional<int> rank, std::optional<int> m, int n,
            const std::string& operator_kind, std::uint64_t seed, const std::string& out_path) {
  if (kind == "pure") {
    partdist::io::save_matrix(out_path, partdist::random_pure(dim, Seed{seed}).matrix());
  } else if (kind == "mixed") {
    partdist::io::save_matrix(
        out_path, partdist::random_mixed(dim, rank.value_or(dim), Seed{seed}).matrix());
  } else if (kind == "povm") {
    const partdist::POVM povm = partdist::random_rank_one_povm(dim, m.value_or(dim), Seed{seed});
    partdist::io::save_json(out_path, partdist::io::povm_to_json(povm));
  } else if (kind == "bipartite") {
    const partdist::BipartiteOperator at = partdist::random_bipartite_operator(
        n, dim, Seed{seed}, partdist::operator_kind_from_string(operator_kind));
    partdist::io::save_matrix(out_path, at.op, at.n_first);
  } else {
    throw InputError("--kind must be one of pure|mixed|povm|bipartite");
  }
  std::cerr << "wrote " << out_path << "\n";
  return 0;
}

int run_lemma1(const std::string& input_path, std::optional<int> n_override,
               std::optional<int> k) {
  const partdist::io::LoadedMatrix loaded = partdist::io::load_matrix(input_path);
  const partdist::BipartiteOperator at = partdist::io::bipartite_from_loaded(loaded, n_override);
  const partdist::LRFactors lr = partdist::lr_factorization(at);
  json slacks = json::array();
  const int k_lo = k.value_or(1);
  const int k_hi = k.value_or(at.d_second);
  for (int kk = k_lo; kk <= k_hi; ++kk) {
    slacks.push_back(
        json{{"k", kk}, {"slack", partdist::verify::check_kyfan_partial_trace(at, kk)}});
  }
  emit(json{{"N", at.n_first},
            {"d", at.d_second},
            {"slacks", std::move(slacks)},
            {"residuals",
             json{{"a", lr.residual_a}, {"al", lr.residual_al}, {"ar", lr.residual_ar}}}},
       std::nullopt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partitioned distinguishability measures for quantum states"};
  app.require_subcommand(1);

  // measure
  auto* measure = app.add_subcommand("measure", "evaluate a measure for a pair of state files");
  std::string rho0_path, rho1_path, measure_id;
  std::optional<int> measure_k;
  std::string family_text = "A";
  int measure_budget = 64;
  std::uint64_t measure_seed = 0;
  measure->add_option("--rho0", rho0_path, "density matrix JSON file")->required();
  measure->add_option("--rho1", rho1_path, "density matrix JSON file")->required();
  measure->add_option("--measure", measure_id, "dk|fk|sd|sdk|pe|fid")->required();
  measure->add_option("--k", measure_k, "partition index (omit for all k)");
  measure->add_option("--family", family_text, "POVM family for sd/sdk (A|B)");
  measure->add_option("--budget", measure_budget, "search starts for sd/sdk");
  measure->add_option("--seed", measure_seed, "search seed for sd/sdk");

  // verify
  auto* verify = app.add_subcommand("verify", "run the randomized inequality suites");
  partdist::verify::SuiteConfig defaults;
  int trials = defaults.trials;
  std::string dims = "2,3,4";
  std::string bipartite = "2,3";
  std::uint64_t verify_seed = defaults.master_seed.value;
  double slack = defaults.slack;
  std::optional<std::string> verify_out;
  verify->add_option("--trials", trials, "trials per check");
  verify->add_option("--dims", dims, "comma-separated state dimensions");
  verify->add_option("--bipartite", bipartite, "comma-separated first-factor dimensions");
  verify->add_option("--seed", verify_seed, "master seed");
  verify->add_option("--slack", slack, "inequality slack");
  verify->add_option("--out", verify_out, "write the report here as well");

  // family
  auto* family = app.add_subcommand("family", "decay-rate analysis of a state-pair family");
  std::string spec_path, measures_text;
  int n_max = 40, n0 = 10, family_budget = 16;
  std::uint64_t family_seed = 0;
  std::optional<std::string> family_out;
  family->add_option("--spec", spec_path, "family spec JSON file")->required();
  family->add_option("--measures", measures_text,
                     "comma-separated ids: dtr,dk:K,sd:F,sdk:F:K,pegap,1mf0,schatten:Q")
      ->required();
  family->add_option("--n-max", n_max, "largest security parameter")->required();
  family->add_option("--n0", n0, "tail start")->required();
  family->add_option("--budget", family_budget, "search starts per estimate");
  family->add_option("--seed", family_seed, "seed for search-based measures");
  family->add_option("--out", family_out, "write the report here as well");

  // gen
  auto* gen = app.add_subcommand("gen", "generate random states, POVMs, or operators");
  std::string gen_kind, gen_out, operator_kind = "general";
  int gen_dim = 2, gen_n = 2;
  std::optional<int> gen_rank, gen_m;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "pure|mixed|povm|bipartite")->required();
  gen->add_option("--dim", gen_dim, "state dimension")->required();
  gen->add_option("--rank", gen_rank, "rank for mixed states");
  gen->add_option("--m", gen_m, "outcome count for povm");
  gen->add_option("--N", gen_n, "first-factor dimension for bipartite");
  gen->add_option("--operator", operator_kind,
                  "bipartite kind: general|hermitian|traceless-hermitian");
  gen->add_option("--seed", gen_seed, "seed")->required();
  gen->add_option("--out", gen_out, "output path")->required();

  // lemma1
  auto* lemma1 = app.add_subcommand(
      "lemma1", "partial-trace Ky Fan slacks and block-factor residuals of an operator");
  std::string lemma_input;
  std::optional<int> lemma_n, lemma_k;
  lemma1->add_option("--input", lemma_input, "bipartite operator JSON file")->required();
  lemma1->add_option("--N", lemma_n, "first-factor dimension (overrides split_N)");
  lemma1->add_option("--k", lemma_k, "partition index (omit for all k)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (measure->parsed()) {
      return run_measure(rho0_path, rho1_path, measure_id, measure_k, family_text, measure_budget,
                         measure_seed);
    }
    if (verify->parsed()) {
      return run_verify(trials, dims, bipartite, verify_seed, slack, verify_out);
    }
    if (family->parsed()) {
      return run_family(spec_path, measures_text, n_max, n0, family_budget, family_seed,
                        family_out);
    }
    if (gen->parsed()) {
      return run_gen(gen_kind, gen_dim, gen_rank, gen_m, gen_n, operator_kind, gen_seed, gen_out);
    }
    if (lemma1->parsed()) {
      return run_lemma1(lemma_input, lemma_n, lemma_k);
    }
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
