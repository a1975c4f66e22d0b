#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gsf::cli {

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

struct RunConfig {
  std::string command;  // eval | operator | cm-check | class | identities | asymptotics | bernstein | chain | validate
  std::string spec_path;
  std::optional<double> lam;
  std::optional<int> N, k, n;
  std::vector<double> xs;
  std::optional<double> grid_min, grid_max;
  std::optional<int> grid_points;
  std::optional<double> tol;
  std::string format = "json";
  double alpha = 0.0;
  double beta = 0.0;
  int max = 8;
  std::string method = "derivatives";
  double h = 0.0;
  int j_max = 2;
};

struct RunResult {
  int exit_code = kPass;
  std::string report;       // JSON or CSV text, newline-terminated
  std::string diagnostics;  // human-readable message for stderr
};

RunResult run(const RunConfig& config);

}  // namespace gsf::cli
