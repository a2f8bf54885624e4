#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "germ/cli/commands.hpp"
#include "germ/cli/dsl.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw germ::Error(germ::ErrorCode::usage, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const nlohmann::json& report, const std::string& format) {
  if (format == "machine") {
    std::cout << report.dump() << "\n";
  } else {
    std::cout << germ::cli::render_human(report);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-point indices, Dold indices and periodic-orbit censuses of holomorphic germs"};
  app.require_subcommand(1);
  app.fallthrough();

  germ::cli::CommandOptions opts;
  std::string format = "human";
  std::string path;
  double radius = 0.0;

  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"human", "machine"}))
      ->envname("GERMINDEX_FORMAT");
  app.add_option("--seed", opts.seed, "Seed for every random component")->envname("GERMINDEX_SEED");

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", path, ".germ file, or - for stdin")->required();
  };
  auto add_radius = [&](CLI::App* sub) {
    return sub->add_option("--radius", radius, "Working radius")->envname("GERMINDEX_RADIUS")->check(CLI::PositiveNumber);
  };
  auto add_period = [&](CLI::App* sub) {
    sub->add_option("--period", opts.period, "Period M")->required()->envname("GERMINDEX_PERIOD")->check(CLI::PositiveNumber);
  };
  auto add_strategy = [&](CLI::App* sub) {
    sub->add_option("--strategy", opts.strategy, "Index strategy")
        ->check(CLI::IsMember({"auto", "cronin", "composite", "numerical"}))
        ->envname("GERMINDEX_STRATEGY");
  };

  auto* index = app.add_subcommand("index", "Fixed-point index of an iterate");
  add_file(index);
  index->add_option("--power", opts.power, "Iterate m")->required()->envname("GERMINDEX_POWER")->check(CLI::PositiveNumber);
  add_radius(index);
  add_strategy(index);

  auto* dold = app.add_subcommand("dold", "Dold index P_M at the origin, or over a ball with --global");
  add_file(dold);
  add_period(dold);
  add_radius(dold);
  add_strategy(dold);
  dold->add_flag("--global", opts.global, "Count periodic points in the ball of --radius");

  auto* census = app.add_subcommand("census", "Periodic points of every period dividing M in a ball");
  add_file(census);
  add_period(census);
  add_radius(census);

  auto* perturb = app.add_subcommand("perturb", "Count period-M points of small perturbations");
  add_file(perturb);
  add_period(perturb);
  add_radius(perturb);
  perturb->add_option("--eps", opts.eps, "Perturbation size")->envname("GERMINDEX_EPS")->check(CLI::PositiveNumber);
  perturb->add_option("--trials", opts.trials, "Number of perturbations")->envname("GERMINDEX_TRIALS")->check(CLI::PositiveNumber);
  perturb->add_option("--mode", opts.mode, "Perturbation family")
      ->check(CLI::IsMember({"generic", "preserve-unity"}))
      ->envname("GERMINDEX_MODE");

  auto* normalform = app.add_subcommand("normalform", "Remove non-resonant monomials up to a degree");
  add_file(normalform);
  normalform->add_option("--degree", opts.degree, "Normalization degree")->envname("GERMINDEX_DEGREE")->check(CLI::PositiveNumber);
  normalform->add_option("--orders", opts.orders, "Prime unity orders of the leading eigenvalues")->delimiter(',');

  auto* verify = app.add_subcommand("verify-theorem", "Compare P_M against the linear period set");
  add_file(verify);
  add_period(verify);
  add_radius(verify);
  add_strategy(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  opts.command = app.get_subcommands().front()->get_name();
  if (radius > 0.0) opts.radius = radius;

  germ::cli::MapSpecAst ast;
  try {
    ast = germ::cli::parse(read_input(path));
  } catch (const germ::cli::DslError& e) {
    nlohmann::json report;
    report["command"] = opts.command;
    report["status"] = "error";
    report["error"] = {{"code", std::string(germ::to_string(e.code()))},
                       {"message", e.what()},
                       {"line", e.line()},
                       {"column", e.column()}};
    std::cerr << path << ":" << e.what() << " [" << germ::to_string(e.code()) << "]\n";
    emit(report, format);
    return 1;
  } catch (const germ::Error& e) {
    std::cerr << "germindex: " << e.what() << "\n";
    return 1;
  }

  const auto result = germ::cli::run_command(opts, ast);
  emit(result.report, format);
  return result.exit_code;
}
