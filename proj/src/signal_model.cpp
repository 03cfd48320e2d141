#include "llbcs/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace llbcs {

TimeGrid make_time_grid(double grid_rate_hz, double tau_max_s,
                        double sample_rate_hz) {
  if (!(grid_rate_hz > 0.0))
    throw std::invalid_argument("time grid: grid_rate_hz must be > 0");
  if (!(tau_max_s > 0.0))
    throw std::invalid_argument("time grid: tau_max_s must be > 0");
  if (!(sample_rate_hz > 0.0))
    throw std::invalid_argument("time grid: sample_rate_hz must be > 0");

  const double ratio = sample_rate_hz / grid_rate_hz;
  const long shift = std::lround(ratio);
  if (shift < 1 || std::abs(ratio - static_cast<double>(shift)) > 1e-9 * ratio)
    throw std::invalid_argument(
        "time grid: sample_rate_hz / grid_rate_hz must be a positive integer");

  const long n_bins = std::lround(tau_max_s * grid_rate_hz);
  if (n_bins < 1)
    throw std::invalid_argument("time grid: tau_max_s * grid_rate_hz < 1 bin");

  return TimeGrid{grid_rate_hz, tau_max_s, static_cast<int>(n_bins),
                  static_cast<int>(shift)};
}

Eigen::VectorXd SparseChannel::dense() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_bins);
  for (std::size_t i = 0; i < grid_indices.size(); ++i)
    x[grid_indices[i]] = amplitudes[i];
  return x;
}

Waveform generate_lfm(double f_start_hz, double f_end_hz, double duration_s,
                      double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0))
    throw std::invalid_argument("lfm: sample_rate_hz must be > 0");
  if (!(duration_s > 0.0))
    throw std::invalid_argument("lfm: duration_s must be > 0");
  const double nyquist = sample_rate_hz / 2.0;
  if (!(f_start_hz > 0.0) || !(f_start_hz < nyquist))
    throw std::invalid_argument("lfm: f_start_hz must lie in (0, rate/2)");
  if (!(f_end_hz > 0.0) || !(f_end_hz < nyquist))
    throw std::invalid_argument("lfm: f_end_hz must lie in (0, rate/2)");

  const long n = std::lround(duration_s * sample_rate_hz) + 1;
  const double sweep = (f_end_hz - f_start_hz) / (2.0 * duration_s);
  Eigen::VectorXd s(n);
  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate_hz;
    s[i] = std::cos(2.0 * std::numbers::pi * (f_start_hz * t + sweep * t * t));
  }
  return Waveform{std::move(s), sample_rate_hz};
}

namespace {

Eigen::MatrixXd shifted_copies(const Eigen::VectorXd& samples, int shift,
                               int n_bins, int m_rows) {
  if (samples.size() == 0)
    throw std::invalid_argument("sensing matrix: empty waveform");
  if (shift < 1)
    throw std::invalid_argument("sensing matrix: shift must be >= 1");
  if (n_bins < 1 || m_rows < 1)
    throw std::invalid_argument("sensing matrix: dimensions must be >= 1");

  const long len = samples.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m_rows, n_bins);
  for (int j = 0; j < n_bins; ++j) {
    const long offset = static_cast<long>(j) * shift;
    const long count = std::min<long>(len, m_rows - offset);
    if (count > 0) a.col(j).segment(offset, count) = samples.head(count);
  }
  return a;
}

}  // namespace

SensingMatrix make_sensing_matrix(const Eigen::VectorXd& samples, int shift,
                                  int n_bins, int m_rows) {
  TimeGrid unit_grid{1.0, static_cast<double>(n_bins), n_bins, shift};
  return SensingMatrix(shifted_copies(samples, shift, n_bins, m_rows),
                       unit_grid);
}

SensingMatrix build_sensing_matrix(const Waveform& w, const TimeGrid& grid) {
  const double ratio = w.sample_rate_hz / grid.grid_rate_hz;
  if (std::abs(ratio - static_cast<double>(grid.shift)) > 1e-9 * ratio)
    throw std::invalid_argument(
        "sensing matrix: grid shift does not match sample_rate/grid_rate "
        "(integer ratio required)");

  const long m_rows =
      std::lround((w.duration_s() + grid.tau_max_s) * w.sample_rate_hz);
  return SensingMatrix(shifted_copies(w.samples, grid.shift, grid.n_bins,
                                      static_cast<int>(m_rows)),
                       grid);
}

SparseChannel random_channel(int k, const TimeGrid& grid, RngStream rng) {
  if (k < 1) throw std::invalid_argument("channel: k must be >= 1");
  if (k > grid.n_bins)
    throw std::invalid_argument("channel: k exceeds number of grid bins");

  // Partial Fisher-Yates gives k distinct indices, uniform w/o replacement.
  std::vector<int> pool(grid.n_bins);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i)
    std::swap(pool[i], pool[rng.uniform_int(i, grid.n_bins - 1)]);
  std::vector<int> picked(pool.begin(), pool.begin() + k);
  std::sort(picked.begin(), picked.end());

  return SparseChannel{std::move(picked), std::vector<double>(k, 1.0),
                       grid.n_bins};
}

Eigen::VectorXd synthesize_clean(const SensingMatrix& a,
                                 const SparseChannel& ch) {
  if (ch.n_bins != a.cols())
    throw std::invalid_argument("synthesize: channel bins != matrix columns");
  return a.matrix() * ch.dense();
}

}  // namespace llbcs
