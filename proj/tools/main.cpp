#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gsf/cli.hpp"

int main(int argc, char** argv) {
  gsf::cli::RunConfig cfg;
  std::string output;
  CLI::App app{"Generalized Stieltjes function toolkit"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec,spec", cfg.spec_path, "function or measure spec file (JSON)");
    sub->add_option("--lambda", cfg.lam, "order lambda > 0 (overrides the spec file)");
    sub->add_option("--N", cfg.N, "class or CM order");
    sub->add_option("--k", cfg.k, "operator order");
    sub->add_option("--n", cfg.n, "derivative order");
    sub->add_option("--x", cfg.xs, "evaluation point (repeatable)")->allow_extra_args(false);
    sub->add_option("--grid-min", cfg.grid_min, "smallest grid point");
    sub->add_option("--grid-max", cfg.grid_max, "largest grid point");
    sub->add_option("--grid-points", cfg.grid_points, "number of log-spaced grid points");
    sub->add_option("--tol", cfg.tol, "absolute tolerance scale");
    sub->add_option("--format", cfg.format, "json or csv");
    sub->add_option("--output,-o", output, "write the report here instead of stdout");
  };

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"eval", "evaluate f or its derivatives"},
      {"operator", "c_k and T_{n,k} by all routes"},
      {"cm-check", "complete monotonicity test"},
      {"class", "C_N^lambda membership"},
      {"identities", "Chu-Vandermonde identity sweep"},
      {"asymptotics", "asymptotic expansion at infinity"},
      {"bernstein", "Bernstein function builder"},
      {"chain", "M and N chains with their sign inequalities"},
      {"validate", "normalize a spec file"},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    const std::string name = s.name;
    if (name == "cm-check") {
      sub->set_help_flag("--help", "Print this help message and exit");
      sub->add_option("--method", cfg.method, "derivatives or differences");
      sub->add_option("--h", cfg.h, "difference step (0 picks one from the grid)");
    }
    if (name == "identities") sub->add_option("--max", cfg.max, "largest n and k");
    if (name == "bernstein") {
      sub->add_option("--alpha", cfg.alpha);
      sub->add_option("--beta", cfg.beta);
    }
    if (name == "chain") sub->add_option("--j-max", cfg.j_max, "highest inequality order");
    sub->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gsf::cli::kUsage;
  }

  const gsf::cli::RunResult res = gsf::cli::run(cfg);
  if (!res.diagnostics.empty()) std::cerr << res.diagnostics << "\n";
  if (!res.report.empty()) {
    if (output.empty()) {
      std::cout << res.report;
    } else {
      std::ofstream os(output, std::ios::binary);
      if (!os) {
        std::cerr << "error: cannot write " << output << "\n";
        return gsf::cli::kUsage;
      }
      os << res.report;
    }
  }
  return res.exit_code;
}
