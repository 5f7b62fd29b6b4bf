// Command-line driver: `conefrac run <config>` executes a simulation and
// writes the output family; `conefrac check <config>` validates the config
// and mesh without solving.

#include <Eigen/Core>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "conefrac/config.hpp"
#include "conefrac/output.hpp"
#include "conefrac/stepper.hpp"

namespace {

void print_problem_summary(const conefrac::config::RunConfig& cfg,
                           const conefrac::config::BuiltProblem& prob) {
  const auto& sys = prob.sys;
  std::printf("mesh: %s\n", cfg.mesh_path.c_str());
  std::printf("  parts %d, elements %zu, nodes %d (%d dofs)\n",
              sys.fm.n_parts, sys.fm.elements.size(), sys.fm.n_nodes(),
              sys.n_dofs());
  std::printf("  interfaces %zu (%d gauss points), constrained dofs %d, "
              "contact rows %d\n",
              sys.fm.interfaces.size(), sys.n_gp(), sys.bc.n_constrained(),
              sys.contact.n_rows());
  std::printf("steps: %d at dt = %g s\n", cfg.n_step, cfg.dt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"implicit cohesive-fracture simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  int threads = 1;
  app.add_option("--threads", threads,
                 "linear-algebra thread budget (default 1, deterministic)");

  std::string config_path;
  std::string output_dir;
  int max_steps = -1;

  CLI::App* run = app.add_subcommand("run", "execute a simulation");
  run->add_option("config", config_path, "run configuration file")
      ->required();
  run->add_option("--output-dir", output_dir,
                  "override the configured output directory");
  run->add_option("--max-steps", max_steps,
                  "truncate the run after this many steps");

  CLI::App* check = app.add_subcommand(
      "check", "validate config and mesh without solving");
  check->add_option("config", config_path, "run configuration file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (!std::filesystem::exists(config_path)) {
    std::fprintf(stderr, "config not found: %s\n", config_path.c_str());
    return 2;
  }

  Eigen::setNbThreads(threads);

  try {
    conefrac::config::RunConfig cfg =
        conefrac::config::load_run_config(config_path);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (max_steps >= 0 && max_steps < cfg.n_step) cfg.n_step = max_steps;

    conefrac::config::BuiltProblem prob = conefrac::config::build_problem(cfg);
    print_problem_summary(cfg, prob);
    if (check->parsed()) {
      std::printf("check ok\n");
      return 0;
    }

    auto records = conefrac::stepper::run(
        prob.sys, prob.u0, prob.v0, cfg.n_step, cfg.solver,
        [&](const conefrac::stepper::StepRecord& rec) {
          int iters = rec.diag.phase1_stats.n_iter;
          for (const auto& s : rec.diag.phase2_stats) iters += s.n_iter;
          std::printf("step %d/%d: %d newton iterations, damage max %g\n",
                      rec.tau, cfg.n_step, iters,
                      rec.d.size() ? rec.d.maxCoeff() : 0.0);
          std::fflush(stdout);
        });

    conefrac::output::emit_all(cfg, prob.sys, prob.u0, prob.v0, records);
    std::printf("wrote %s\n", cfg.output_dir.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
