#pragma once

#include <Eigen/Core>
#include <vector>

#include "llbcs/rng.hpp"

namespace llbcs {

/// Zero-mean Gaussian mixture: component weights and variances.
struct GmmSpec {
  std::vector<double> weights;
  std::vector<double> variances;

  /// Variance of the mixture, sum of weight * variance.
  double mixture_variance() const;

  /// Throws invalid_argument unless weights sum to 1 (within 1e-12),
  /// all weights are nonnegative and all variances positive.
  void validate() const;
};

/// Noise settings for one scenario: mixture shape plus the two SNR targets
/// (Gaussian and impulsive), each relative to the clean signal power.
struct NoiseConfig {
  GmmSpec gmm;
  double sgnr_db = 0.0;
  double sinr_db = 0.0;
};

/// m i.i.d. zero-mean normal draws with the given variance.
Eigen::VectorXd sample_gaussian(int m, double variance, RngStream rng);

/// m i.i.d. draws from the zero-mean Gaussian mixture: pick a component by
/// weight, then draw from that component. `labels`, when non-null, receives
/// the chosen component index per sample (used by statistical tests).
Eigen::VectorXd sample_gmm_impulse(int m, const GmmSpec& gmm, RngStream rng,
                                   std::vector<int>* labels = nullptr);

/// Scales `noise` so that 10*log10(P_signal/P_noise) equals the target,
/// with P the mean square over all samples.
Eigen::VectorXd scale_to_snr(const Eigen::VectorXd& noise,
                             const Eigen::VectorXd& clean_signal,
                             double target_snr_db);

/// Total noise: a Gaussian part scaled to sgnr_db plus an impulsive part
/// scaled to sinr_db. The two parts use independent substreams derived from
/// the passed stream, so toggling one never perturbs the other.
Eigen::VectorXd compose_noise(int m, const Eigen::VectorXd& clean_signal,
                              const NoiseConfig& cfg, const RngStream& rng);

}  // namespace llbcs
