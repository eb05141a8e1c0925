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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "partdist/exp_indist.hpp"
#include "partdist/io.hpp"
#include "partdist/states.hpp"
#include "partdist/verifier.hpp"

using namespace partdist;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

/// Runs the CLI binary with the given arguments, capturing stdout.
CommandResult run_cli(const std::string& args) {
  const std::string command = std::string(PARTDIST_CLI_PATH) + " " + args + " 2>/dev/null";
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.out.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "partdist_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("matrix json round trip is entrywise exact", "[io]") {
  Rng rng(5);
  const Matrix m = rng.cgaussian_matrix(4, 4);
  const io::json j = io::matrix_to_json(m);
  const io::LoadedMatrix back = io::matrix_from_json(j);
  CHECK((back.matrix - m).norm() == 0.0);
  CHECK_FALSE(back.split_n.has_value());

  // Through a file, including the text round trip of doubles.
  const auto path = (temp_dir() / "m.json").string();
  io::save_matrix(path, m, 2);
  const io::LoadedMatrix from_file = io::load_matrix(path);
  CHECK((from_file.matrix - m).norm() == 0.0);
  REQUIRE(from_file.split_n.has_value());
  CHECK(*from_file.split_n == 2);
}

TEST_CASE("missing im defaults to a real matrix", "[io]") {
  const io::json j{{"rows", 2}, {"cols", 2}, {"re", {{1.0, 0.0}, {0.0, 1.0}}}};
  const io::LoadedMatrix m = io::matrix_from_json(j);
  CHECK((m.matrix - Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("malformed matrix files name the offending field", "[io]") {
  const io::json no_rows{{"cols", 2}, {"re", {{1.0, 0.0}}}};
  CHECK_THROWS_WITH(io::matrix_from_json(no_rows), Catch::Matchers::ContainsSubstring("rows"));

  const io::json short_re{{"rows", 2}, {"cols", 2}, {"re", {{1.0, 0.0}}}};
  CHECK_THROWS_WITH(io::matrix_from_json(short_re), Catch::Matchers::ContainsSubstring("re"));

  const io::json bad_im{{"rows", 1}, {"cols", 1}, {"re", {{1.0}}}, {"im", {{"x"}}}};
  CHECK_THROWS_WITH(io::matrix_from_json(bad_im), Catch::Matchers::ContainsSubstring("im"));
}

TEST_CASE("povm json round trip", "[io]") {
  const POVM povm = random_rank_one_povm(3, 7, Seed{11});
  const POVM back = io::povm_from_json(io::povm_to_json(povm));
  REQUIRE(back.outcomes() == povm.outcomes());
  for (int x = 0; x < povm.outcomes(); ++x) {
    CHECK((back.element(x) - povm.element(x)).norm() == 0.0);
  }
}

TEST_CASE("bipartite loading requires a declared split", "[io]") {
  Rng rng(3);
  const Matrix m = rng.cgaussian_matrix(6, 6);
  io::LoadedMatrix loaded{m, std::nullopt};
  CHECK_THROWS_AS(io::bipartite_from_loaded(loaded), InputError);
  CHECK_THROWS_AS(io::bipartite_from_loaded(loaded, 4), InputError);
  const BipartiteOperator at = io::bipartite_from_loaded(loaded, 2);
  CHECK(at.n_first == 2);
  CHECK(at.d_second == 3);
}

TEST_CASE("cli generates, measures, and reports", "[io]") {
  const auto dir = temp_dir();
  const std::string rho = (dir / "rho.json").string();
  const std::string sigma = (dir / "sigma.json").string();

  CHECK(run_cli("gen --kind mixed --dim 2 --seed 7 --out " + rho).exit_code == 0);
  CHECK(run_cli("gen --kind pure --dim 2 --seed 8 --out " + sigma).exit_code == 0);
  CHECK_NOTHROW(io::density_from_json(io::load_json(rho)));

  const CommandResult same =
      run_cli("measure --rho0 " + rho + " --rho1 " + rho + " --measure dk --k 2");
  CHECK(same.exit_code == 0);
  CHECK(io::json::parse(same.out).at("value").get<double>() == Catch::Approx(0.0).margin(1e-12));

  const CommandResult pe = run_cli("measure --rho0 " + rho + " --rho1 " + rho + " --measure pe");
  CHECK(io::json::parse(pe.out).at("value").get<double>() == Catch::Approx(0.5));

  const CommandResult sd = run_cli("measure --rho0 " + rho + " --rho1 " + sigma +
                                   " --measure sd --family A --budget 8 --seed 3");
  CHECK(sd.exit_code == 0);
  const io::json sd_json = io::json::parse(sd.out);
  CHECK(sd_json.at("value").get<double>() >= 0.0);
  CHECK_NOTHROW(io::povm_from_json(sd_json.at("best_povm")));

  // Usage and input errors exit with 2.
  CHECK(run_cli("measure --rho0 " + rho + " --rho1 " + rho + " --measure nope").exit_code == 2);
  CHECK(run_cli("measure --rho0 /nonexistent.json --rho1 " + rho + " --measure pe").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
  CHECK(run_cli("measure --rho0 " + rho + " --rho1 " + rho + " --measure sdk").exit_code == 2);
}

TEST_CASE("cli lemma1 reproduces the projector example", "[io]") {
  const auto dir = temp_dir();
  const std::string bell = (dir / "bell.json").string();
  {
    Vector phi = Vector::Zero(4);
    phi(0) = 1.0 / std::sqrt(2.0);
    phi(3) = 1.0 / std::sqrt(2.0);
    io::save_matrix(bell, phi * phi.adjoint(), 2);
  }
  const CommandResult result = run_cli("lemma1 --input " + bell + " --k 1");
  REQUIRE(result.exit_code == 0);
  const io::json j = io::json::parse(result.out);
  CHECK(j.at("slacks")[0].at("slack").get<double>() == Catch::Approx(0.5).margin(1e-12));
  CHECK(j.at("residuals").at("a").get<double>() <= 1e-10);
  CHECK(j.at("residuals").at("al").get<double>() <= 1e-10);
  CHECK(j.at("residuals").at("ar").get<double>() <= 1e-10);
}

TEST_CASE("cli verify writes deterministic reports and gates on failures", "[io]") {
  const auto dir = temp_dir();
  const std::string out1 = (dir / "report1.json").string();
  const std::string out2 = (dir / "report2.json").string();

  CHECK(run_cli("verify --trials 4 --seed 5 --out " + out1).exit_code == 0);
  CHECK(run_cli("verify --trials 4 --seed 5 --out " + out2).exit_code == 0);
  std::ifstream a(out1), b(out2);
  const std::string text1((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string text2((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(text1 == text2);
  CHECK_NOTHROW(verify::load_report(out1));

  CHECK(run_cli("verify --trials 2 --seed 5 --slack -1e9").exit_code == 1);
}

TEST_CASE("cli family analyzes a spec file", "[io]") {
  const auto dir = temp_dir();
  const std::string spec = (dir / "family.json").string();
  {
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    Matrix one = Matrix::Zero(2, 2);
    one(1, 1) = 1.0;
    io::json j{{"kind", "interpolation"},
               {"d", 2},
               {"epsilon", 0.7},
               {"rho0", io::matrix_to_json(zero)},
               {"sigma", io::matrix_to_json(one)}};
    io::save_json(spec, j);
  }
  const CommandResult result =
      run_cli("family --spec " + spec + " --measures dtr,dk:1 --n-max 20 --n0 5");
  REQUIRE(result.exit_code == 0);
  const io::json j = io::json::parse(result.out);
  CHECK(j.at("equivalence_ok").get<bool>());
  for (const auto& mr : j.at("measures")) {
    CHECK(mr.at("decay").at("eps_hat").get<double>() < 0.75);
  }
}
