#include "llbcs/cli_commands.hpp"

#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "llbcs/csv.hpp"
#include "llbcs/harness.hpp"
#include "llbcs/report.hpp"

namespace llbcs {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentConfig resolve_config(const CliOverrides& o) {
  ExperimentConfig cfg;
  if (o.config_path) cfg = load_config_file(*o.config_path);

  if (o.seed) cfg.run.base_seed = *o.seed;
  if (o.trials) cfg.run.trials = *o.trials;
  if (o.methods) {
    cfg.run.methods.clear();
    for (const auto& name : *o.methods)
      cfg.run.methods.push_back(parse_method(name));
  }
  if (o.sinr_db) cfg.noise.sinr_db = *o.sinr_db;
  if (o.sinr_list_db) cfg.noise.sinr_list_db = *o.sinr_list_db;
  if (o.sgnr_db) cfg.noise.sgnr_db = *o.sgnr_db;
  if (o.out_dir) cfg.run.output_dir = *o.out_dir;
  if (o.workers) cfg.run.workers = *o.workers;
  if (o.trace) cfg.run.trace = true;

  cfg.validate();
  return cfg;
}

int cmd_simulate(const CliOverrides& o) {
  const ExperimentConfig cfg = resolve_config(o);
  const Workspace ws = make_workspace(cfg);
  const std::uint64_t seed = cfg.run.base_seed;
  const Scene scene = make_scene(ws, cfg, seed);

  const fs::path dir = fs::path(cfg.run.output_dir) /
                       ("simulate-seed" + std::to_string(seed));
  fs::create_directories(dir);

  write_series_csv(dir / "waveform.csv", ws.waveform.samples);
  write_series_csv(dir / "channel.csv", scene.channel.dense());
  write_series_csv(dir / "received.csv", scene.received);
  write_series_csv(dir / "noise.csv", scene.received - scene.clean);

  json summary;
  summary["seed"] = seed;
  summary["sgnr_db"] = cfg.noise.sgnr_db;
  summary["sinr_db"] = cfg.noise.sinr_db;
  summary["true_delays_s"] = scene.true_delays_s;

  json per_method = json::object();
  for (Method m : cfg.run.methods) {
    ExperimentConfig method_cfg = cfg;
    if (cfg.run.trace && m == Method::LlBcs)
      method_cfg.solver.ll_bcs.trace_path = (dir / "trace_ll-bcs.csv").string();

    const TrialResult r = solve_scene(ws, method_cfg, m, scene, seed);
    const std::string name = method_name(m);
    write_series_csv(dir / ("spectrum_" + name + ".csv"), r.spectrum.values);
    per_method[name] = {{"est_delays_s", r.est_delays_s},
                        {"converged", r.converged},
                        {"iterations", r.iterations}};
    if (!r.converged)
      std::cerr << "warning: " << name << " did not converge within "
                << r.iterations << " iterations\n";
  }
  summary["methods"] = std::move(per_method);

  write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  write_text_file(dir / "resolved_config.json", config_to_json_text(cfg));
  std::cout << "simulate: wrote " << dir.string() << "\n";
  return 0;
}

int cmd_sweep(const CliOverrides& o) {
  const ExperimentConfig cfg = resolve_config(o);
  const SweepResult sweep = run_sweep(cfg, cfg.run.methods, cfg.run.trials,
                                      cfg.run.base_seed, cfg.run.workers);

  int unconverged = 0;
  for (const auto& r : sweep.records)
    if (!r.converged) ++unconverged;
  if (unconverged > 0)
    std::cerr << "warning: " << unconverged << " of " << sweep.records.size()
              << " solves stopped at the iteration cap\n";

  const fs::path dir = fs::path(cfg.run.output_dir) /
                       ("sweep-seed" + std::to_string(cfg.run.base_seed));
  write_sweep_outputs(dir, sweep);
  std::cout << "sweep: wrote " << dir.string() << "\n";
  return 0;
}

int cmd_validate(const CliOverrides& o) {
  const ExperimentConfig cfg = resolve_config(o);
  const DerivedSizes d = derived_sizes(cfg);
  std::cout << "config ok\n"
            << "I=" << d.waveform_len << " N=" << d.n_bins << " M=" << d.m_rows
            << " d=" << d.shift << "\n";
  return 0;
}

}  // namespace llbcs
