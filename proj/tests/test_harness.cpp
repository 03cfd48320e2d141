#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "llbcs/harness.hpp"
#include "llbcs/report.hpp"

using namespace llbcs;

namespace {

DelaySpectrum spectrum_of(std::vector<double> values, double grid_rate_hz) {
  Eigen::VectorXd v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  TimeGrid grid{grid_rate_hz, values.size() / grid_rate_hz,
                static_cast<int>(values.size()),
                1};
  return DelaySpectrum{v, grid, 0, true};
}

TrialResult trial_with(std::vector<double> truth, std::vector<double> est) {
  TrialResult t;
  t.method = "test";
  t.true_delays_s = std::move(truth);
  t.est_delays_s = std::move(est);
  return t;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.signal.duration_s = 0.01;
  cfg.grid.tau_max_s = 0.005;
  cfg.channel.k = 2;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("pick_peaks selects clear local maxima") {
  const DelaySpectrum s = spectrum_of({0, 5, 1, 0, 3, 0}, 2000);
  const auto d = pick_peaks(s, 2);
  REQUIRE(d.size() == 2);
  CHECK(d[0] == doctest::Approx(0.0005));
  CHECK(d[1] == doctest::Approx(0.002));
}

TEST_CASE("pick_peaks treats boundaries as one-sided peaks") {
  const DelaySpectrum s = spectrum_of({1, 2, 3}, 1000);
  const auto d = pick_peaks(s, 1);
  REQUIRE(d.size() == 1);
  CHECK(d[0] == doctest::Approx(0.002));  // index 2
}

TEST_CASE("pick_peaks breaks plateau ties toward the lower index") {
  const DelaySpectrum s = spectrum_of({0, 3, 3, 0}, 1000);
  const auto d = pick_peaks(s, 1);
  REQUIRE(d.size() == 1);
  CHECK(d[0] == doctest::Approx(0.001));  // index 1 over the tied index 2
}

TEST_CASE("pick_peaks validates k") {
  const DelaySpectrum s = spectrum_of({1, 2}, 1000);
  CHECK_THROWS_AS(pick_peaks(s, 3), std::invalid_argument);
  CHECK_THROWS_AS(pick_peaks(s, 0), std::invalid_argument);
}

TEST_CASE("rmse reproduces hand-computed values") {
  // Single trial, single path, half-millisecond error.
  const RmseValue r1 = rmse({trial_with({0.001}, {0.0015})});
  CHECK(r1.flat == doctest::Approx(0.0005));

  // Single trial, two paths, 3 ms and 4 ms errors.
  const RmseValue r2 = rmse({trial_with({0.001, 0.010}, {0.004, 0.014})});
  CHECK(r2.flat == doctest::Approx(0.0025));

  // Perfect estimates.
  const RmseValue r3 = rmse({trial_with({0.001, 0.002}, {0.001, 0.002})});
  CHECK(r3.flat == 0.0);
  CHECK(r3.conventional == 0.0);
}

TEST_CASE("rmse normalizations are related by sqrt(trials * k)") {
  std::vector<TrialResult> trials = {
      trial_with({0.001, 0.004}, {0.0015, 0.004}),
      trial_with({0.002, 0.009}, {0.002, 0.0095}),
      trial_with({0.000, 0.003}, {0.0005, 0.0035})};
  const RmseValue r = rmse(trials);
  CHECK(r.conventional ==
        doctest::Approx(std::sqrt(3.0 * 2.0) * r.flat).epsilon(1e-12));
}

TEST_CASE("rmse is invariant to trial order and rejects ragged input") {
  std::vector<TrialResult> trials = {
      trial_with({0.001, 0.004}, {0.0015, 0.004}),
      trial_with({0.002, 0.009}, {0.002, 0.0095}),
      trial_with({0.000, 0.003}, {0.0005, 0.0035})};
  const RmseValue forward = rmse(trials);
  std::reverse(trials.begin(), trials.end());
  const RmseValue backward = rmse(trials);
  CHECK(forward.flat == backward.flat);

  trials.push_back(trial_with({0.001}, {0.001}));
  CHECK_THROWS_AS(rmse(trials), std::invalid_argument);
  CHECK_THROWS_AS(rmse({}), std::invalid_argument);
}

TEST_CASE("rmse grows when any single estimate worsens") {
  std::vector<TrialResult> trials = {
      trial_with({0.001, 0.004}, {0.0012, 0.004}),
      trial_with({0.002, 0.009}, {0.002, 0.0095})};
  const double base = rmse(trials).flat;
  trials[1].est_delays_s[1] = 0.0098;  // push further from 0.009, order kept
  CHECK(rmse(trials).flat > base);
}

TEST_CASE("run_trial is deterministic and exact without noise") {
  ExperimentConfig cfg = small_config();
  cfg.noise.sgnr_db = 300;
  cfg.noise.sinr_db = 300;

  for (Method m : {Method::LlBcs, Method::LBcs, Method::Bcs, Method::L1}) {
    const TrialResult a = run_trial(cfg, m, 321);
    const TrialResult b = run_trial(cfg, m, 321);
    CHECK(a.est_delays_s == b.est_delays_s);
    CHECK(a.spectrum.values == b.spectrum.values);
    CHECK(a.est_delays_s == a.true_delays_s);
    CHECK(a.seed == 321);
  }
}

TEST_CASE("pinned channels override the random draw") {
  ExperimentConfig cfg = small_config();
  cfg.channel.k = 2;
  cfg.channel.pinned_indices = {1, 7};
  const Workspace ws = make_workspace(cfg);
  const Scene scene = make_scene(ws, cfg, 5);
  CHECK(scene.channel.grid_indices == std::vector<int>{1, 7});
  CHECK(scene.true_delays_s[0] == doctest::Approx(1.0 / 2000.0));
  CHECK(scene.true_delays_s[1] == doctest::Approx(7.0 / 2000.0));
}

TEST_CASE("received signal is spike-dominated under strong impulses") {
  ExperimentConfig cfg;  // full reference scale
  cfg.noise.sgnr_db = 20;
  cfg.noise.sinr_db = -10;
  const Workspace ws = make_workspace(cfg);
  const Scene scene = make_scene(ws, cfg, 2026);

  Eigen::VectorXd mags = scene.received.cwiseAbs();
  std::vector<double> v(mags.data(), mags.data() + mags.size());
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  const double median = v[v.size() / 2];
  CHECK(mags.maxCoeff() / median > 10.0);
}

TEST_CASE("a one-cell sweep wraps a single trial's rmse") {
  ExperimentConfig cfg = small_config();
  cfg.noise.sinr_list_db = {-5.0};
  const SweepResult s = run_sweep(cfg, {Method::Bcs}, 1, 9, 1);
  REQUIRE(s.cells.size() == 1);
  REQUIRE(s.records.size() == 1);
  const RmseValue direct = rmse({s.records[0]});
  CHECK(s.cells[0].rmse.flat == direct.flat);
  CHECK(s.cells[0].rmse.conventional == direct.conventional);
}

TEST_CASE("sweeps are byte-identical across worker counts") {
  ExperimentConfig cfg = small_config();
  cfg.noise.sinr_list_db = {-10.0, 5.0};
  const std::vector<Method> methods = {Method::LlBcs, Method::L1};

  const SweepResult s1 = run_sweep(cfg, methods, 4, 77, 1);
  const SweepResult s3 = run_sweep(cfg, methods, 4, 77, 3);
  const SweepResult s8 = run_sweep(cfg, methods, 4, 77, 8);

  // One data row per (sinr, method) cell plus the header.
  const std::string csv = sweep_csv_text(s1);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 2);

  CHECK(sweep_csv_text(s1) == sweep_csv_text(s3));
  CHECK(sweep_csv_text(s1) == sweep_csv_text(s8));
  CHECK(sweep_json_text(s1) == sweep_json_text(s3));
  REQUIRE(s1.records.size() == s3.records.size());
  for (std::size_t i = 0; i < s1.records.size(); ++i) {
    CHECK(s1.records[i].seed == s3.records[i].seed);
    CHECK(s1.records[i].est_delays_s == s3.records[i].est_delays_s);
  }
}

TEST_CASE("desk-scale sweep reproduces the qualitative ordering") {
  // Reference scale, 50 trials, 5-point grid: the robust solver is never
  // worse at the two lowest noise ratios and every method is within one
  // grid cell at the highest.
  ExperimentConfig cfg;
  cfg.noise.sinr_list_db = {-20, -10, 0, 10, 20};
  const std::vector<Method> methods = {Method::LlBcs, Method::LBcs,
                                       Method::Bcs, Method::L1};
  const SweepResult s = run_sweep(cfg, methods, 50, 20250808, 0);

  for (std::size_t si : {std::size_t{0}, std::size_t{1}}) {
    const double robust = s.cell(si, 0).rmse.conventional;
    for (std::size_t mi = 1; mi < methods.size(); ++mi)
      CHECK(robust <= s.cell(si, mi).rmse.conventional);
  }
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    CHECK(s.cell(4, mi).rmse.conventional <= 0.0005);
}

TEST_SUITE_END();
