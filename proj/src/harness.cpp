#include "llbcs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "llbcs/parallel.hpp"

namespace llbcs {

std::vector<double> pick_peaks(const DelaySpectrum& spectrum, int k) {
  const Eigen::VectorXd& v = spectrum.values;
  const int n = static_cast<int>(v.size());
  if (k < 1 || k > n)
    throw std::invalid_argument("pick_peaks: k must lie in [1, n_bins]");

  auto is_local_max = [&](int i) {
    const bool left_ok = (i == 0) || v[i] > v[i - 1];
    const bool right_ok = (i == n - 1) || v[i] > v[i + 1];
    return left_ok && right_ok;
  };

  // Bins ranked by value; local maxima win ties against equal-valued
  // neighbors (so the crest of a flat-ish lobe is taken before its sides)
  // and remaining ties break toward the lower index. Ranking by value keeps
  // a large shoulder bin ahead of noise-level wiggles when two true delays
  // sit in adjacent bins.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (v[a] != v[b]) return v[a] > v[b];
    const bool pa = is_local_max(a), pb = is_local_max(b);
    if (pa != pb) return pa;
    return a < b;
  });

  std::vector<double> delays;
  delays.reserve(k);
  for (int c = 0; c < k; ++c)
    delays.push_back(static_cast<double>(order[c]) /
                     spectrum.grid.grid_rate_hz);
  std::sort(delays.begin(), delays.end());
  return delays;
}

RmseValue rmse(const std::vector<TrialResult>& trials) {
  if (trials.empty()) throw std::invalid_argument("rmse: no trials");
  const std::size_t k = trials.front().true_delays_s.size();
  if (k == 0) throw std::invalid_argument("rmse: empty delay lists");

  double ssq = 0.0;
  for (const auto& t : trials) {
    if (t.true_delays_s.size() != k || t.est_delays_s.size() != k)
      throw std::invalid_argument("rmse: trials disagree on path count");
    for (std::size_t i = 0; i < k; ++i) {
      const double d = t.est_delays_s[i] - t.true_delays_s[i];
      ssq += d * d;
    }
  }
  const double mk = static_cast<double>(trials.size() * k);
  return RmseValue{std::sqrt(ssq) / mk, std::sqrt(ssq / mk)};
}

Workspace make_workspace(const ExperimentConfig& cfg) {
  Waveform w = generate_lfm(cfg.signal.f_start_hz, cfg.signal.f_end_hz,
                            cfg.signal.duration_s, cfg.signal.sample_rate_hz);
  TimeGrid grid = make_time_grid(cfg.grid.grid_rate_hz, cfg.grid.tau_max_s,
                                 cfg.signal.sample_rate_hz);
  SensingMatrix a = build_sensing_matrix(w, grid);
  return Workspace{std::move(w), grid, std::move(a)};
}

Scene make_scene(const Workspace& ws, const ExperimentConfig& cfg,
                 std::uint64_t seed) {
  const RngStream root(seed);
  SparseChannel ch;
  if (!cfg.channel.pinned_indices.empty()) {
    ch = SparseChannel{cfg.channel.pinned_indices,
                       std::vector<double>(cfg.channel.pinned_indices.size(),
                                           1.0),
                       ws.grid.n_bins};
  } else {
    ch = random_channel(cfg.channel.k, ws.grid, root.child("channel"));
  }

  Scene scene;
  scene.clean = synthesize_clean(ws.a, ch);
  const NoiseConfig noise_cfg{cfg.noise.gmm, cfg.noise.sgnr_db,
                              cfg.noise.sinr_db};
  scene.received =
      scene.clean + compose_noise(static_cast<int>(ws.a.rows()), scene.clean,
                                  noise_cfg, root.child("noise"));
  scene.true_delays_s.reserve(ch.grid_indices.size());
  for (int idx : ch.grid_indices)
    scene.true_delays_s.push_back(static_cast<double>(idx) /
                                  ws.grid.grid_rate_hz);
  scene.channel = std::move(ch);
  return scene;
}

TrialResult solve_scene(const Workspace& ws, const ExperimentConfig& cfg,
                        Method method, const Scene& scene,
                        std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();

  DelaySpectrum spectrum;
  switch (method) {
    case Method::LlBcs: {
      spectrum = ll_bcs_solve(ws.a, scene.received, cfg.solver.ll_bcs).spectrum;
      break;
    }
    case Method::LBcs: {
      BaselineOptions o;
      o.method = Method::LBcs;
      o.eps_min = cfg.solver.l_bcs.eps_min;
      o.max_iter = cfg.solver.l_bcs.max_iter;
      spectrum = l_bcs_solve(ws.a, scene.received, o);
      break;
    }
    case Method::Bcs: {
      BaselineOptions o;
      o.method = Method::Bcs;
      o.eps_min = cfg.solver.bcs.eps_min;
      o.max_iter = cfg.solver.bcs.max_iter;
      spectrum = bcs_solve(ws.a, scene.received, o);
      break;
    }
    case Method::L1: {
      BaselineOptions o;
      o.method = Method::L1;
      o.eps_min = cfg.solver.l1.eps_min;
      o.max_iter = cfg.solver.l1.max_iter;
      o.l1_penalty = cfg.solver.l1.penalty > 0.0
                         ? cfg.solver.l1.penalty
                         : cfg.solver.l1.penalty_scale *
                               default_l1_penalty(ws.a, scene.received);
      spectrum = lasso_solve(ws.a, scene.received, o);
      break;
    }
  }

  TrialResult r;
  r.method = method_name(method);
  r.true_delays_s = scene.true_delays_s;
  r.est_delays_s = pick_peaks(spectrum, cfg.channel.k);
  r.seed = seed;
  r.converged = spectrum.converged;
  r.iterations = spectrum.iterations_used;
  r.spectrum = std::move(spectrum);
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return r;
}

TrialResult run_trial_in(const Workspace& ws, const ExperimentConfig& cfg,
                         Method method, std::uint64_t seed) {
  const Scene scene = make_scene(ws, cfg, seed);
  return solve_scene(ws, cfg, method, scene, seed);
}

TrialResult run_trial(const ExperimentConfig& cfg, Method method,
                      std::uint64_t seed) {
  const Workspace ws = make_workspace(cfg);
  return run_trial_in(ws, cfg, method, seed);
}

const SweepCell& SweepResult::cell(std::size_t sinr_index,
                                   std::size_t method_index) const {
  return cells.at(sinr_index * methods.size() + method_index);
}

SweepResult run_sweep(const ExperimentConfig& cfg,
                      const std::vector<Method>& methods, int trials,
                      std::uint64_t base_seed, int workers) {
  if (trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  if (methods.empty())
    throw std::invalid_argument("run_sweep: no methods requested");

  const Workspace ws = make_workspace(cfg);
  const std::vector<double>& sinr_grid = cfg.noise.sinr_list_db;
  const std::size_t n_cells = sinr_grid.size() * methods.size();
  const std::size_t n_tasks = n_cells * static_cast<std::size_t>(trials);

  SweepResult result;
  result.sinr_db = sinr_grid;
  result.methods = methods;
  result.trials = trials;
  result.config = cfg;
  result.records.resize(n_tasks);

  const RngStream base(base_seed);
  parallel_for_each_index(n_tasks, workers, [&](std::size_t task) {
    const std::size_t trial = task % trials;
    const std::size_t cell = task / trials;
    const std::size_t mi = cell % methods.size();
    const std::size_t si = cell / methods.size();

    ExperimentConfig trial_cfg = cfg;
    trial_cfg.noise.sinr_db = sinr_grid[si];
    trial_cfg.solver.ll_bcs.trace_path.clear();  // one file cannot serve all trials
    const std::uint64_t seed = base.child("sweep")
                                   .child(si)
                                   .child(method_name(methods[mi]))
                                   .child(trial)
                                   .seed();
    result.records[task] = run_trial_in(ws, trial_cfg, methods[mi], seed);
  });

  result.cells.resize(n_cells);
  for (std::size_t si = 0; si < sinr_grid.size(); ++si) {
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const std::size_t cell = si * methods.size() + mi;
      const auto first = result.records.begin() + cell * trials;
      std::vector<TrialResult> slice(first, first + trials);
      result.cells[cell] =
          SweepCell{sinr_grid[si], methods[mi], rmse(slice)};
    }
  }
  return result;
}

}  // namespace llbcs
