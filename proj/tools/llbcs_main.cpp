#include <CLI11.hpp>
#include <iostream>

#include "llbcs/cli_commands.hpp"
#include "llbcs/config.hpp"

namespace {

void add_common_flags(CLI::App* cmd, llbcs::CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "Experiment config (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Base seed for all randomness");
  cmd->add_option("--sgnr-db", o.sgnr_db, "Gaussian-noise SNR in dB");
  cmd->add_option("--out", o.out_dir, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "llbcs - sparse Bayesian time-delay estimation under impulsive noise"};
  app.require_subcommand(1);

  llbcs::CliOverrides sim_opts, sweep_opts, validate_opts;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run one realization with every requested method");
  add_common_flags(simulate, sim_opts);
  simulate->add_option("--methods", sim_opts.methods,
                       "Comma-separated subset of ll-bcs,l-bcs,bcs,l1")
      ->delimiter(',');
  simulate->add_option("--sinr-db", sim_opts.sinr_db,
                       "Impulsive-noise SNR in dB");
  simulate->add_flag("--trace", sim_opts.trace,
                     "Write per-iteration solver trace CSV (ll-bcs)");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Monte Carlo RMSE sweep over a SINR grid");
  add_common_flags(sweep, sweep_opts);
  sweep->add_option("--methods", sweep_opts.methods,
                    "Comma-separated subset of ll-bcs,l-bcs,bcs,l1")
      ->delimiter(',');
  sweep->add_option("--trials", sweep_opts.trials, "Monte Carlo trials per cell");
  sweep->add_option("--sinr-list", sweep_opts.sinr_list_db,
                    "Comma-separated SINR grid in dB")
      ->delimiter(',');
  sweep->add_option("--workers", sweep_opts.workers,
                    "Worker threads (0 = all cores)");

  CLI::App* validate = app.add_subcommand(
      "validate", "Check a config and print derived sizes");
  validate->add_option("--config", validate_opts.config_path,
                       "Experiment config (JSON)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return llbcs::cmd_simulate(sim_opts);
    if (sweep->parsed()) return llbcs::cmd_sweep(sweep_opts);
    if (validate->parsed()) return llbcs::cmd_validate(validate_opts);
  } catch (const llbcs::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
