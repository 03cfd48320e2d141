#pragma once

#include <Eigen/Core>
#include <vector>

#include "llbcs/rng.hpp"

namespace llbcs {

/// Sampled real transmit signal together with its sample rate.
struct Waveform {
  Eigen::VectorXd samples;
  double sample_rate_hz = 0.0;

  double duration_s() const {
    return static_cast<double>(samples.size() - 1) / sample_rate_hz;
  }
};

/// Discrete delay search grid. The grid rate is an integer downsampling of
/// the signal sample rate; `shift` is the number of signal samples per bin.
struct TimeGrid {
  double grid_rate_hz = 0.0;
  double tau_max_s = 0.0;
  int n_bins = 0;
  int shift = 0;
};

/// Builds a TimeGrid, rejecting non-integer sample_rate/grid_rate ratios.
TimeGrid make_time_grid(double grid_rate_hz, double tau_max_s,
                        double sample_rate_hz);

/// Grid-indexed multipath channel: the sparse vector of path amplitudes.
struct SparseChannel {
  std::vector<int> grid_indices;  // strictly increasing, in [0, n_bins)
  std::vector<double> amplitudes;
  int n_bins = 0;

  Eigen::VectorXd dense() const;
};

/// Shifted-waveform convolution matrix. Column j holds the waveform placed
/// at row offset j*shift; all other entries are zero.
class SensingMatrix {
 public:
  SensingMatrix(Eigen::MatrixXd entries, TimeGrid grid)
      : entries_(std::move(entries)), grid_(grid) {}

  const Eigen::MatrixXd& matrix() const { return entries_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  int shift() const { return grid_.shift; }
  const TimeGrid& grid() const { return grid_; }

 private:
  Eigen::MatrixXd entries_;
  TimeGrid grid_;
};

/// Real linear chirp with unit amplitude and zero initial phase, sweeping
/// f_start..f_end over the given duration. Length is duration*rate + 1.
Waveform generate_lfm(double f_start_hz, double f_end_hz, double duration_s,
                      double sample_rate_hz);

/// Convolution matrix for a waveform on a delay grid. Row count is
/// round((duration + tau_max) * sample_rate).
SensingMatrix build_sensing_matrix(const Waveform& w, const TimeGrid& grid);

/// By-definition constructor with an explicit row count: entry (r, j) equals
/// samples[r - j*shift] where out-of-range sample indices read as zero.
/// Carries a unit grid (grid_rate 1 Hz) for callers that only need shape.
SensingMatrix make_sensing_matrix(const Eigen::VectorXd& samples, int shift,
                                  int n_bins, int m_rows);

/// Draws k distinct grid indices uniformly without replacement, sorted
/// ascending, all amplitudes 1.
SparseChannel random_channel(int k, const TimeGrid& grid, RngStream rng);

/// Noiseless received signal A*x for the channel's dense form.
Eigen::VectorXd synthesize_clean(const SensingMatrix& a,
                                 const SparseChannel& ch);

}  // namespace llbcs
