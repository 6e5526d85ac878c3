// Copyright 2026 The divgeo authors.
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

// End-to-end checks of the command line tool. The binary path arrives as
// the first plain argument (or in DIVGEO_CLI); fixtures live in a per-run
// temp directory.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "divgeo/bose_geometry.hpp"
#include "divgeo/bose_model.hpp"
#include "divgeo/json_io.hpp"
#include "test_support.hpp"

namespace {

std::string g_cli_path;
std::filesystem::path g_work_dir;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const auto out_path = g_work_dir / ("stdout_" + std::to_string(counter));
  const auto err_path = g_work_dir / ("stderr_" + std::to_string(counter));
  ++counter;
  const std::string cmd = (env.empty() ? "" : env + " ") + "\"" + g_cli_path +
                          "\" " + args + " > " + out_path.string() + " 2> " +
                          err_path.string();
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

using nlohmann::json;

json parse(const std::string& text) { return json::parse(text); }

std::filesystem::path fixture(const std::string& name,
                              const std::string& text) {
  const auto path = g_work_dir / name;
  write_file(path, text);
  return path;
}

std::filesystem::path fixture_json(const std::string& name, const json& j) {
  return fixture(name, j.dump(2));
}

}  // namespace

TEST_CASE("fit-bose recovers matched data and reports round-trip") {
  using namespace divgeo::bose;
  const EnergySpectrum spectrum({1.0, 1.5, 2.2, 3.0});
  const ModelPoint truth{0.9, 0.35};
  const auto counts = occupation(spectrum, truth);

  divgeo::io::BoseInput input;
  input.spectrum = spectrum.levels();
  input.occupations = counts;
  const auto in_path = fixture_json("fit_input.json",
                                    divgeo::io::bose_input_to_json(input));
  const auto out_path = g_work_dir / "fit_report.json";

  const RunResult run = run_cli("fit-bose --input " + in_path.string() +
                                " --out " + out_path.string());
  REQUIRE(run.code == 0);
  const json report = parse(read_file(out_path));
  CHECK(std::abs(report.at("beta").get<double>() - truth.beta) <=
        1e-8 * truth.beta);
  CHECK(std::abs(report.at("mu").get<double>() - truth.mu) <=
        1e-8 * std::abs(truth.mu));
  CHECK(report.at("gradient_norm").get<double>() <= 1e-10);

  // published schema re-parses and carries its values bit-faithfully
  const divgeo::bose::FitReport parsed =
      divgeo::io::fit_report_from_json(report);
  CHECK(parse(divgeo::io::fit_report_to_json(parsed).dump()) ==
        parse(report.dump()));
}

TEST_CASE("pythagoras reproduces the worked qubit decomposition") {
  const auto sigma = fixture("sigma_plus.json", R"({
    "dim": 2,
    "re": [[0.5, 0.5], [0.5, 0.5]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  })");
  const auto rho = fixture("rho_diag.json", R"({
    "dim": 2,
    "re": [[0.25, 0.0], [0.0, 0.75]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  })");
  const RunResult run = run_cli("pythagoras --sigma " + sigma.string() +
                                " --rho " + rho.string());
  REQUIRE(run.code == 0);
  const json report = parse(run.out);
  CHECK(std::abs(report.at("lhs").get<double>() - 0.836988) < 1e-6);
  CHECK(report.at("residual").get<double>() <= 1e-10);
  CHECK(std::abs(report.at("terms")[0].get<double>() - 0.693147) < 1e-6);
  CHECK(std::abs(report.at("terms")[1].get<double>() - 0.143841) < 1e-6);
}

TEST_CASE("relent maps support violations to exit 2") {
  const auto sigma = fixture("sigma_e1.json", R"({
    "dim": 2,
    "re": [[1.0, 0.0], [0.0, 0.0]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  })");
  const auto rho = fixture("rho_e2.json", R"({
    "dim": 2,
    "re": [[0.0, 0.0], [0.0, 1.0]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  })");
  const RunResult run =
      run_cli("relent --sigma " + sigma.string() + " --rho " + rho.string());
  CHECK(run.code == 2);
  const json err = parse(run.err);
  CHECK(err.at("error").at("kind").get<std::string>() == "SupportViolation");
}

TEST_CASE("relent computes the divergence of a valid pair") {
  const auto sigma = fixture("relent_sigma.json", R"({
    "dim": 2,
    "re": [[0.5, 0.0], [0.0, 0.5]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  })");
  const auto rho = fixture("relent_rho.json", R"({
    "dim": 2,
    "re": [[0.25, 0.0], [0.0, 0.75]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  })");
  const RunResult run =
      run_cli("relent --sigma " + sigma.string() + " --rho " + rho.string());
  REQUIRE(run.code == 0);
  const double expected = 0.5 * std::log(4.0 / 3.0);
  CHECK(std::abs(parse(run.out).at("relative_entropy").get<double>() -
                 expected) < 1e-12);
}

TEST_CASE("validate-only and error exits") {
  SUBCASE("valid input exits 0 with no report") {
    const auto good = fixture("validate_good.json", R"({
      "spectrum": [1.0, 2.0],
      "occupations": [0.5, 0.25]
    })");
    const RunResult run =
        run_cli("fit-bose --validate-only --input " + good.string());
    CHECK(run.code == 0);
    CHECK(run.out.empty());
  }
  SUBCASE("domain-invalid input exits 2") {
    const auto bad = fixture("validate_domain.json", R"({
      "spectrum": [2.0, 1.0],
      "occupations": [0.5, 0.25]
    })");
    const RunResult run =
        run_cli("fit-bose --validate-only --input " + bad.string());
    CHECK(run.code == 2);
    CHECK(parse(run.err).at("error").at("kind").get<std::string>() ==
          "DomainError");
  }
  SUBCASE("malformed JSON exits 1") {
    const auto bad = fixture("validate_syntax.json", "{ not json");
    const RunResult run = run_cli("fit-bose --input " + bad.string());
    CHECK(run.code == 1);
    CHECK(parse(run.err).at("error").at("kind").get<std::string>() ==
          "ParseError");
  }
  SUBCASE("missing file exits 1") {
    const RunResult run = run_cli("fit-bose --input /nonexistent/path.json");
    CHECK(run.code == 1);
  }
  SUBCASE("unknown subcommand exits 1") {
    const RunResult run = run_cli("frobnicate");
    CHECK(run.code == 1);
  }
  SUBCASE("pythagoras without a target exits 1") {
    const auto sigma = fixture("lonely_sigma.json", R"({
      "dim": 2,
      "re": [[0.5, 0.0], [0.0, 0.5]],
      "im": [[0.0, 0.0], [0.0, 0.0]]
    })");
    const RunResult run = run_cli("pythagoras --sigma " + sigma.string());
    CHECK(run.code == 1);
  }
  SUBCASE("non-positive tolerance exits 2") {
    const auto good = fixture("tol_input.json", R"({
      "spectrum": [1.0, 2.0],
      "occupations": [0.5, 0.25]
    })");
    const RunResult run =
        run_cli("fit-bose --tol 0 --input " + good.string());
    CHECK(run.code == 2);
    CHECK(parse(run.err).at("error").at("kind").get<std::string>() ==
          "DomainError");
  }
}

TEST_CASE("DIVGEO_LOG controls stderr diagnostics") {
  const auto good = fixture("log_input.json", R"({
    "spectrum": [1.0, 2.0],
    "occupations": [0.5, 0.25]
  })");
  const RunResult quiet = run_cli("fit-bose --input " + good.string());
  CHECK(quiet.code == 0);
  CHECK(quiet.err.empty());
  const RunResult chatty = run_cli("fit-bose --input " + good.string(),
                                   "DIVGEO_LOG=info");
  CHECK(chatty.code == 0);
  CHECK(chatty.err.find("divgeo:") != std::string::npos);
  CHECK(chatty.out == quiet.out);  // diagnostics never touch stdout
}

TEST_CASE("sample-bose feeds fit-bose and recovers the parameters") {
  using namespace divgeo::bose;
  std::vector<double> levels;
  double level = 1.0;
  for (int j = 0; j < 16; ++j) {
    levels.push_back(level);
    level += 0.25;
  }
  const EnergySpectrum spectrum(levels);
  const ModelPoint truth{0.8, 0.5};
  divgeo::io::BoseInput input;
  input.spectrum = levels;
  input.beta = truth.beta;
  input.mu = truth.mu;
  const auto in_path = fixture_json("sample_input.json",
                                    divgeo::io::bose_input_to_json(input));

  const int draws = 2000;
  const auto sample_path = g_work_dir / "sample_out.json";
  RunResult run = run_cli("sample-bose --input " + in_path.string() +
                          " --seed 7 --draws " + std::to_string(draws) +
                          " --out " + sample_path.string());
  REQUIRE(run.code == 0);

  run = run_cli("fit-bose --input " + sample_path.string());
  REQUIRE(run.code == 0);
  const json report = parse(run.out);

  const Eigen::Matrix2d info = metric(spectrum, truth).entries;
  const Eigen::Matrix2d cov = info.inverse() / draws;
  CHECK(std::abs(report.at("beta").get<double>() - truth.beta) <=
        3.0 * std::sqrt(cov(0, 0)));
  CHECK(std::abs(report.at("mu").get<double>() - truth.mu) <=
        3.0 * std::sqrt(cov(1, 1)));

  // the two commands also compose through a shell pipe
  const auto piped_out = g_work_dir / "piped_fit.json";
  const std::string pipeline =
      "\"" + g_cli_path + "\" sample-bose --input " + in_path.string() +
      " --seed 11 --draws 500 | \"" + g_cli_path +
      "\" fit-bose --input - > " + piped_out.string();
  const int status = std::system(pipeline.c_str());
  REQUIRE(WIFEXITED(status));
  REQUIRE(WEXITSTATUS(status) == 0);
  CHECK(parse(read_file(piped_out)).contains("beta"));
}

TEST_CASE("qproject and cond-manifold subcommands") {
  const auto sigma = fixture("qp_sigma.json", R"({
    "dim": 2,
    "re": [[0.5, 0.5], [0.5, 0.5]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  })");
  const auto model_z = fixture("model_z.json", R"({
    "dim": 2,
    "generators": [
      {"dim": 2, "re": [[1.0, 0.0], [0.0, -1.0]],
       "im": [[0.0, 0.0], [0.0, 0.0]]}
    ]
  })");
  RunResult run = run_cli("qproject --sigma " + sigma.string() + " --model " +
                          model_z.string());
  REQUIRE(run.code == 0);
  json report = parse(run.out);
  CHECK(std::abs(report.at("theta_hat")[0].get<double>()) < 1e-10);
  CHECK(report.at("moment_residual").get<double>() <= 1e-8);

  const auto model_x = fixture("model_x.json", R"({
    "dim": 2,
    "generators": [
      {"dim": 2, "re": [[0.0, 1.0], [1.0, 0.0]],
       "im": [[0.0, 0.0], [0.0, 0.0]]}
    ],
    "theta": [0.7]
  })");
  run = run_cli("cond-manifold --model " + model_x.string());
  REQUIRE(run.code == 0);
  report = parse(run.out);
  CHECK(std::abs(report.at("re")[0][0].get<double>() - 0.5) < 1e-12);
  CHECK(std::abs(report.at("re")[1][1].get<double>() - 0.5) < 1e-12);
  CHECK(std::abs(report.at("re")[0][1].get<double>()) < 1e-12);
}

TEST_CASE("bose-geometry subcommand") {
  const auto input = fixture("geometry_input.json", R"({
    "spectrum": [1.0, 2.0],
    "occupations": [0.4, 0.1],
    "beta": 2.0,
    "mu": 0.25
  })");
  const RunResult run = run_cli("bose-geometry --input " + input.string());
  REQUIRE(run.code == 0);
  const json report = parse(run.out);
  CHECK(std::abs(report.at("connection").at("mu_beta_mu").get<double>() -
                 0.5) < 1e-15);
  const auto& g = report.at("metric");
  const auto& ch = report.at("covariant_hessian");
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(g[r][c].get<double>() - ch[r][c].get<double>()) < 1e-10);
    }
  }
}

TEST_CASE("weak-value and amp-scan subcommands") {
  const auto pre = fixture("pre.json", R"({"re": [1.0, 0.9], "im": [0.0, 0.0]})");
  const auto post = fixture("post.json", R"({"re": [1.0, -1.0], "im": [0.0, 0.0]})");
  const auto op = fixture("op_z.json", R"({
    "dim": 2,
    "re": [[1.0, 0.0], [0.0, -1.0]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  })");
  RunResult run = run_cli("weak-value --pre " + pre.string() + " --post " +
                          post.string() + " --op " + op.string());
  REQUIRE(run.code == 0);
  json report = parse(run.out);
  CHECK(std::abs(report.at("value").at("re").get<double>() - 19.0) < 1e-10);
  CHECK(std::abs(report.at("value").at("im").get<double>()) < 1e-14);

  run = run_cli("amp-scan --op " + op.string() + " --t-grid 0.5,0.75");
  REQUIRE(run.code == 0);
  report = parse(run.out);
  REQUIRE(report.size() == 2);
  CHECK(std::abs(report[0][1].get<double>() - 3.0) < 1e-12);
  CHECK(std::abs(report[1][1].get<double>() - 7.0) < 1e-12);
}

TEST_CASE("border-probe subcommand grows toward the border") {
  const auto sigma = fixture("border_sigma.json", R"({
    "dim": 2,
    "re": [[0.5, 0.5], [0.5, 0.5]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  })");
  const RunResult run = run_cli("border-probe --sigma " + sigma.string() +
                                " --path-family canonical --t-grid pow2:1:20");
  REQUIRE(run.code == 0);
  const json rows = parse(run.out);
  REQUIRE(rows.size() == 20);
  CHECK(rows.back()[1].get<double>() > rows.front()[1].get<double>());
}

int run_main(int argc, char** argv) {
  std::vector<char*> args;
  args.push_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    if (g_cli_path.empty() && argv[i][0] != '-') {
      g_cli_path = argv[i];
      continue;
    }
    args.push_back(argv[i]);
  }
  if (g_cli_path.empty()) {
    if (const char* env = std::getenv("DIVGEO_CLI")) {
      g_cli_path = env;
    }
  }
  if (g_cli_path.empty()) {
    std::cerr << "usage: test_cli <path-to-divgeo-binary> [doctest args]\n";
    return 1;
  }
  g_work_dir = std::filesystem::temp_directory_path() /
               ("divgeo_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(g_work_dir);

  doctest::Context context(static_cast<int>(args.size()), args.data());
  const int rc = context.run();

  std::error_code ec;
  std::filesystem::remove_all(g_work_dir, ec);
  return rc;
}

int main(int argc, char** argv) { return run_main(argc, argv); }
