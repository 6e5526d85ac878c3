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

// divgeo: divergence-minimization fits and the geometric checks that
// certify them, one subcommand per report. All inputs and outputs are JSON;
// errors leave a machine-readable {"error": {...}} object on stderr.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "divgeo/bose_geometry.hpp"
#include "divgeo/bose_model.hpp"
#include "divgeo/json_io.hpp"
#include "divgeo/quantum_model.hpp"
#include "divgeo/weak_measurement.hpp"

namespace {

using divgeo::io::json;

enum class LogLevel { Off = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("DIVGEO_LOG");
    if (env == nullptr) return LogLevel::Off;
    const std::string v(env);
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Off;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "divgeo: " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) std::cerr << "divgeo: " << msg << "\n";
}

json read_json(const std::string& path) {
  log_debug("reading " + path);
  std::string text;
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    text = buffer.str();
  } else {
    std::ifstream in(path);
    if (!in) {
      throw divgeo::ParseError("cannot open input file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw divgeo::ParseError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_report(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw divgeo::ParseError("cannot open output file: " + out_path);
  }
  out << text;
}

// Grid specifications: "pow2:a:b" lists 2^-k for k = a..b,
// "one-minus-pow2:a:b" lists 1 - 2^-k, and anything else is read as a
// comma-separated list of numbers.
std::vector<double> parse_grid(const std::string& spec) {
  const auto parse_range = [&](const std::string& body) {
    const auto colon = body.find(':');
    if (colon == std::string::npos) {
      throw divgeo::ParseError("grid range must look like a:b");
    }
    int lo = 0;
    int hi = 0;
    try {
      lo = std::stoi(body.substr(0, colon));
      hi = std::stoi(body.substr(colon + 1));
    } catch (const std::exception&) {
      throw divgeo::ParseError("grid range bounds must be integers");
    }
    if (lo > hi) {
      throw divgeo::ParseError("grid range must be increasing");
    }
    return std::pair<int, int>{lo, hi};
  };

  std::vector<double> grid;
  if (spec.rfind("pow2:", 0) == 0) {
    const auto [lo, hi] = parse_range(spec.substr(5));
    for (int k = lo; k <= hi; ++k) grid.push_back(std::ldexp(1.0, -k));
  } else if (spec.rfind("one-minus-pow2:", 0) == 0) {
    const auto [lo, hi] = parse_range(spec.substr(15));
    for (int k = lo; k <= hi; ++k) grid.push_back(1.0 - std::ldexp(1.0, -k));
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        grid.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw divgeo::ParseError("grid entries must be numbers, got: " + item);
      }
    }
  }
  if (grid.empty()) {
    throw divgeo::ParseError("grid specification produced no values");
  }
  return grid;
}

divgeo::bose::EnergySpectrum spectrum_of(const divgeo::io::BoseInput& input) {
  return divgeo::bose::EnergySpectrum(input.spectrum);
}

divgeo::bose::OccupationSequence occupations_of(
    const divgeo::io::BoseInput& input) {
  if (!input.occupations) {
    throw divgeo::ParseError("input is missing \"occupations\"");
  }
  return divgeo::bose::OccupationSequence(*input.occupations);
}

divgeo::bose::ModelPoint point_of(const divgeo::io::BoseInput& input) {
  if (!input.beta || !input.mu) {
    throw divgeo::ParseError("input is missing \"beta\" or \"mu\"");
  }
  return divgeo::bose::ModelPoint{*input.beta, *input.mu};
}

divgeo::quantum::DensityMatrix density_from_file(const std::string& path) {
  return divgeo::quantum::DensityMatrix(
      divgeo::io::matrix_from_json(read_json(path)));
}

divgeo::quantum::ExponentialFamilyModel model_of(
    const divgeo::io::ModelInput& input) {
  std::vector<divgeo::quantum::HermitianOperator> generators;
  generators.reserve(input.generators.size());
  for (const auto& g : input.generators) {
    generators.emplace_back(g);
  }
  return divgeo::quantum::ExponentialFamilyModel(std::move(generators));
}

divgeo::quantum::ThetaPoint theta_of(const divgeo::io::ModelInput& input) {
  if (!input.theta) {
    throw divgeo::ParseError("model file is missing \"theta\"");
  }
  return *input.theta;
}

struct CommandContext {
  std::string out;
  bool validate_only = false;
};

// Each handler validates its inputs, then either computes a report or, in
// validate-only mode, returns without output.
struct Command {
  CommandContext ctx;
  std::function<std::optional<json>()> run;
};

void check_tolerance(double tol) {
  if (!(tol > 0.0)) {
    throw divgeo::DomainError("tolerance must be positive");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "divergence-minimization fitting for occupation data and "
      "finite-dimensional quantum states"};
  app.require_subcommand(1);

  std::vector<Command> pending;
  const auto add_common = [](CLI::App* cmd, CommandContext& ctx) {
    cmd->add_option("--out", ctx.out, "write the JSON report to this file");
    cmd->add_flag("--validate-only", ctx.validate_only,
                  "parse and validate inputs, then exit without computing");
  };

  // fit-bose
  {
    auto ctx = std::make_shared<CommandContext>();
    auto input_path = std::make_shared<std::string>("-");
    auto tol = std::make_shared<double>(1e-10);
    CLI::App* cmd = app.add_subcommand(
        "fit-bose", "fit (beta, mu) to occupation data by divergence "
                    "minimization");
    cmd->add_option("--input", *input_path,
                    "JSON with \"spectrum\" and \"occupations\" (- = stdin)");
    cmd->add_option("--tol", *tol, "gradient tolerance of the fit");
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, input_path, tol] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        check_tolerance(*tol);
        const auto input =
            divgeo::io::bose_input_from_json(read_json(*input_path));
        const auto spectrum = spectrum_of(input);
        const auto data = occupations_of(input);
        if (ctx->validate_only) return std::nullopt;
        divgeo::bose::FitOptions options;
        options.tolerance = *tol;
        const auto report = divgeo::bose::fit(data, spectrum, options);
        log_info("fit converged in " + std::to_string(report.iterations) +
                 " iterations");
        return divgeo::io::fit_report_to_json(report);
      }});
    });
  }

  // sample-bose
  {
    auto ctx = std::make_shared<CommandContext>();
    auto input_path = std::make_shared<std::string>("-");
    auto seed = std::make_shared<std::uint64_t>(0);
    auto draws = std::make_shared<int>(1);
    CLI::App* cmd = app.add_subcommand(
        "sample-bose",
        "draw occupation data from the model at (beta, mu)");
    cmd->add_option("--input", *input_path,
                    "JSON with \"spectrum\", \"beta\", \"mu\" (- = stdin)");
    cmd->add_option("--seed", *seed, "random seed");
    cmd->add_option("--draws", *draws,
                    "number of independent draws to average");
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, input_path, seed, draws] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        const auto input =
            divgeo::io::bose_input_from_json(read_json(*input_path));
        const auto spectrum = spectrum_of(input);
        const auto point = point_of(input);
        if (ctx->validate_only) return std::nullopt;
        const auto sample = divgeo::bose::sample_occupations(
            spectrum, point, *seed, *draws);
        divgeo::io::BoseInput out;
        out.spectrum = input.spectrum;
        out.occupations = sample.counts();
        out.beta = point.beta;
        out.mu = point.mu;
        return divgeo::io::bose_input_to_json(out);
      }});
    });
  }

  // bose-geometry
  {
    auto ctx = std::make_shared<CommandContext>();
    auto input_path = std::make_shared<std::string>("-");
    CLI::App* cmd = app.add_subcommand(
        "bose-geometry",
        "metric, connection and covariant Hessian at a model point");
    cmd->add_option("--input", *input_path,
                    "JSON with \"spectrum\", \"occupations\", \"beta\", "
                    "\"mu\" (- = stdin)");
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, input_path] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        const auto input =
            divgeo::io::bose_input_from_json(read_json(*input_path));
        const auto spectrum = spectrum_of(input);
        const auto data = occupations_of(input);
        const auto point = point_of(input);
        if (ctx->validate_only) return std::nullopt;
        const auto g = divgeo::bose::metric(spectrum, point);
        const auto w = divgeo::bose::connection(point);
        const auto ch =
            divgeo::bose::covariant_hessian(data, spectrum, point);
        return divgeo::io::geometry_report_to_json(g, w, ch);
      }});
    });
  }

  // relent
  {
    auto ctx = std::make_shared<CommandContext>();
    auto sigma_path = std::make_shared<std::string>();
    auto rho_path = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand(
        "relent", "relative entropy D(sigma || rho) of two density matrices");
    cmd->add_option("--sigma", *sigma_path, "density matrix JSON")
        ->required();
    cmd->add_option("--rho", *rho_path, "density matrix JSON")->required();
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, sigma_path, rho_path] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        const auto sigma = density_from_file(*sigma_path);
        const auto rho = density_from_file(*rho_path);
        if (ctx->validate_only) return std::nullopt;
        return json{{"relative_entropy",
                     divgeo::quantum::relative_entropy(sigma, rho)}};
      }});
    });
  }

  // qproject
  {
    auto ctx = std::make_shared<CommandContext>();
    auto sigma_path = std::make_shared<std::string>();
    auto model_path = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(1e-10);
    CLI::App* cmd = app.add_subcommand(
        "qproject", "project a state onto a quantum exponential family");
    cmd->add_option("--sigma", *sigma_path, "density matrix JSON")
        ->required();
    cmd->add_option("--model", *model_path, "model JSON")->required();
    cmd->add_option("--tol", *tol, "gradient tolerance of the projection");
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, sigma_path, model_path, tol] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        check_tolerance(*tol);
        const auto sigma = density_from_file(*sigma_path);
        const auto model =
            model_of(divgeo::io::model_from_json(read_json(*model_path)));
        if (ctx->validate_only) return std::nullopt;
        divgeo::quantum::ProjectionOptions options;
        options.gradient_tolerance = *tol;
        const auto report = divgeo::quantum::project(sigma, model, options);
        log_info("projection converged in " +
                 std::to_string(report.iterations) + " iterations");
        return divgeo::io::projection_report_to_json(report);
      }});
    });
  }

  // pythagoras
  {
    auto ctx = std::make_shared<CommandContext>();
    auto sigma_path = std::make_shared<std::string>();
    auto rho_path = std::make_shared<std::string>();
    auto model_path = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand(
        "pythagoras",
        "Pythagorean decomposition of the divergence: against a diagonal "
        "state (--rho) or against a model point (--model with \"theta\")");
    cmd->add_option("--sigma", *sigma_path, "density matrix JSON")
        ->required();
    CLI::Option* rho_opt =
        cmd->add_option("--rho", *rho_path, "diagonal density matrix JSON");
    CLI::Option* model_opt =
        cmd->add_option("--model", *model_path, "model JSON with \"theta\"");
    rho_opt->excludes(model_opt);
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, sigma_path, rho_path, model_path] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        if (rho_path->empty() && model_path->empty()) {
          throw divgeo::ParseError(
              "pythagoras needs either --rho or --model");
        }
        const auto sigma = density_from_file(*sigma_path);
        if (!rho_path->empty()) {
          const auto rho = density_from_file(*rho_path);
          if (ctx->validate_only) return std::nullopt;
          return divgeo::io::pythagoras_to_json(
              divgeo::quantum::pythagoras_conditional(sigma, rho));
        }
        const auto input = divgeo::io::model_from_json(read_json(*model_path));
        const auto model = model_of(input);
        const auto theta = theta_of(input);
        if (ctx->validate_only) return std::nullopt;
        return divgeo::io::pythagoras_to_json(
            divgeo::quantum::pythagoras_model(sigma, model, theta));
      }});
    });
  }

  // cond-manifold
  {
    auto ctx = std::make_shared<CommandContext>();
    auto model_path = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand(
        "cond-manifold",
        "diagonal part of the model state at \"theta\" (conditional "
        "manifold point)");
    cmd->add_option("--model", *model_path, "model JSON with \"theta\"")
        ->required();
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, model_path] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        const auto input = divgeo::io::model_from_json(read_json(*model_path));
        const auto model = model_of(input);
        const auto theta = theta_of(input);
        if (ctx->validate_only) return std::nullopt;
        const auto rho_c =
            divgeo::quantum::conditional_manifold_point(model, theta);
        return divgeo::io::matrix_to_json(rho_c.matrix());
      }});
    });
  }

  // border-probe
  {
    auto ctx = std::make_shared<CommandContext>();
    auto sigma_path = std::make_shared<std::string>();
    auto family = std::make_shared<std::string>("canonical");
    auto grid = std::make_shared<std::string>("pow2:1:20");
    CLI::App* cmd = app.add_subcommand(
        "border-probe",
        "divergence from sigma to a family of diagonal states approaching "
        "the border");
    cmd->add_option("--sigma", *sigma_path, "density matrix JSON")
        ->required();
    cmd->add_option("--path-family", *family,
                    "family of diagonal states (canonical)");
    cmd->add_option("--t-grid", *grid,
                    "pow2:a:b, one-minus-pow2:a:b, or a comma list");
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, sigma_path, family, grid] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        const auto sigma = density_from_file(*sigma_path);
        if (*family != "canonical") {
          throw divgeo::ParseError("unknown path family: " + *family);
        }
        const auto t_values = parse_grid(*grid);
        if (ctx->validate_only) return std::nullopt;
        const auto path =
            divgeo::quantum::canonical_border_path(sigma.dim());
        return divgeo::io::border_samples_to_json(
            divgeo::quantum::border_probe(sigma, path, t_values));
      }});
    });
  }

  // weak-value
  {
    auto ctx = std::make_shared<CommandContext>();
    auto input_path = std::make_shared<std::string>();
    auto pre_path = std::make_shared<std::string>();
    auto post_path = std::make_shared<std::string>();
    auto op_path = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand(
        "weak-value",
        "weak value of an operator between pre and post selected states");
    cmd->add_option("--input", *input_path,
                    "selection JSON with \"pre\" and \"post\"");
    cmd->add_option("--pre", *pre_path, "pre-selected vector JSON");
    cmd->add_option("--post", *post_path, "post-selected vector JSON");
    cmd->add_option("--op", *op_path, "Hermitian operator JSON")->required();
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, input_path, pre_path, post_path, op_path] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        Eigen::VectorXcd pre;
        Eigen::VectorXcd post;
        if (!input_path->empty()) {
          const auto sel =
              divgeo::io::selection_from_json(read_json(*input_path));
          pre = sel.pre;
          post = sel.post;
        } else if (!pre_path->empty() && !post_path->empty()) {
          pre = divgeo::io::vector_from_json(read_json(*pre_path));
          post = divgeo::io::vector_from_json(read_json(*post_path));
        } else {
          throw divgeo::ParseError(
              "weak-value needs --input or both --pre and --post");
        }
        const divgeo::weak::PrePostSelection selection(pre, post);
        const divgeo::quantum::HermitianOperator op(
            divgeo::io::matrix_from_json(read_json(*op_path)));
        if (ctx->validate_only) return std::nullopt;
        const auto wv = divgeo::weak::weak_value(selection, op);
        return json{{"value", json{{"re", wv.value.real()},
                                   {"im", wv.value.imag()}}},
                    {"overlap_probability", wv.overlap_probability}};
      }});
    });
  }

  // amp-scan
  {
    auto ctx = std::make_shared<CommandContext>();
    auto op_path = std::make_shared<std::string>();
    auto family = std::make_shared<std::string>("delta");
    auto grid = std::make_shared<std::string>("one-minus-pow2:1:20");
    CLI::App* cmd = app.add_subcommand(
        "amp-scan",
        "|weak value| and overlap probability along a selection family");
    cmd->add_option("--op", *op_path, "Hermitian operator JSON (dim 2)")
        ->required();
    cmd->add_option("--path-family", *family, "selection family (delta)");
    cmd->add_option("--t-grid", *grid,
                    "pow2:a:b, one-minus-pow2:a:b, or a comma list");
    add_common(cmd, *ctx);
    cmd->callback([&pending, ctx, op_path, family, grid] {
      pending.push_back(Command{*ctx, [=]() -> std::optional<json> {
        const divgeo::quantum::HermitianOperator op(
            divgeo::io::matrix_from_json(read_json(*op_path)));
        if (*family != "delta") {
          throw divgeo::ParseError("unknown selection family: " + *family);
        }
        const auto eps_values = parse_grid(*grid);
        if (ctx->validate_only) return std::nullopt;
        // pre = (1, delta)/sqrt(1+delta^2), post = (1, -1)/sqrt(2)
        const auto delta_family = [](double delta) {
          Eigen::VectorXcd pre(2);
          pre << 1.0, delta;
          Eigen::VectorXcd post(2);
          post << 1.0, -1.0;
          return divgeo::weak::PrePostSelection(pre, post);
        };
        return divgeo::io::amplification_to_json(
            divgeo::weak::amplification_scan(delta_family, op, eps_values));
      }});
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const json err{{"error", {{"kind", "UsageError"}, {"detail", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }

  if (pending.empty()) {
    return 0;
  }
  const Command& command = pending.front();
  try {
    const auto report = command.run();
    if (report) {
      write_report(*report, command.ctx.out);
    } else {
      log_info("inputs valid");
    }
    return 0;
  } catch (const divgeo::Error& e) {
    const json err{{"error", {{"kind", e.kind()}, {"detail", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const divgeo::ParseError& e) {
    const json err{{"error", {{"kind", "ParseError"}, {"detail", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    const json err{
        {"error", {{"kind", "InternalError"}, {"detail", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
