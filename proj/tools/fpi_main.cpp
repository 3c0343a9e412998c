// Command-line front end: fpi run <config> [--out DIR] [--verbose]

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "fpi/error.hpp"
#include "fpi/studies.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

int run(const std::string& config_path, const std::string& out_override, bool verbose) {
  using namespace fpi;
  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;
  cfg.solver.verbose = verbose;
  const Progress progress = [](const std::string& s) { std::cerr << s << '\n'; };
  try {
    std::filesystem::create_directories(cfg.output_dir);
    const std::string name = study_name(cfg.study);
    if (cfg.study == StudyKind::Beam) {
      const BeamResult r = run_beam(cfg, cfg.output_dir, progress);
      if (!r.completed) {
        std::cerr << "beam aborted: " << r.message << '\n';
        return kSolverError;
      }
      std::cout << "wrote " << cfg.output_dir << "/probes.csv\n";
      return 0;
    }
    CsvTable table({});
    switch (cfg.study) {
      case StudyKind::Convergence: table = run_convergence(cfg, progress); break;
      case StudyKind::Penalty: table = run_penalty_sweep(cfg, progress); break;
      case StudyKind::Porosity: table = run_porosity_sweep(cfg, progress); break;
      case StudyKind::Alpha: table = run_alpha_sweep(cfg, progress); break;
      case StudyKind::Beam: break;
    }
    const std::string path = cfg.output_dir + "/" + name + ".csv";
    table.write(path);
    size_t failed = 0;
    for (size_t i = 0; i < table.rows().size(); ++i) failed += table.cell(i, "status") != "ok";
    std::cout << "wrote " << path << " (" << table.rows().size() << " runs, " << failed << " failed)\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Config ? kConfigError : kSolverError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled fluid / finite-strain poroelastic CutFEM solver"};
  app.require_subcommand(1);

  std::string config, out;
  bool verbose = false;
  auto* run_cmd = app.add_subcommand("run", "run the study described by a config file");
  run_cmd->add_option("config", config, "config file (key = value)")->required();
  run_cmd->add_option("--out", out, "output directory (overrides output_dir)");
  run_cmd->add_flag("--verbose", verbose, "print Newton residuals");

  auto* keys_cmd = app.add_subcommand("keys", "list the configuration keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  if (*keys_cmd) {
    std::cout << fpi::config_reference();
    return 0;
  }
  return run(config, out, verbose);
}
