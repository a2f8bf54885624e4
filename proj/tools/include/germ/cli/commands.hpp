#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "germ/cli/dsl.hpp"

namespace germ::cli {

struct CommandOptions {
  std::string command;  // index, dold, census, perturb, normalform, verify-theorem
  long long power = 1;
  long long period = 1;
  std::optional<double> radius;
  double eps = 1e-3;
  int trials = 5;
  int degree = 7;
  std::string strategy = "auto";      // auto, cronin, composite, numerical
  std::string mode = "generic";       // generic, preserve-unity
  bool global = false;
  std::vector<int> orders;
  std::uint64_t seed = 20240601;
};

struct CommandResult {
  nlohmann::json report;
  int exit_code = 0;
};

// 0 success, 2 failed mathematical check or numerical error, 1 usage error.
int exit_code_for(ErrorCode code);

CommandResult run_command(const CommandOptions& options, const MapSpecAst& ast);

// "a+bi" with 17 significant digits.
std::string format_complex(Complex z);

std::string render_human(const nlohmann::json& report);

}  // namespace germ::cli
