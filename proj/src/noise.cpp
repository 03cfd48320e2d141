#include "llbcs/noise.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace llbcs {

double GmmSpec::mixture_variance() const {
  double v = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) v += weights[i] * variances[i];
  return v;
}

void GmmSpec::validate() const {
  if (weights.empty() || weights.size() != variances.size())
    throw std::invalid_argument(
        "gmm: weights and variances must be non-empty and equal length");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("gmm: weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("gmm: weights must sum to 1");
  for (double v : variances)
    if (!(v > 0.0)) throw std::invalid_argument("gmm: variances must be > 0");
}

Eigen::VectorXd sample_gaussian(int m, double variance, RngStream rng) {
  if (m < 1) throw std::invalid_argument("gaussian: m must be >= 1");
  if (variance < 0.0)
    throw std::invalid_argument("gaussian: variance must be >= 0");
  const double sd = std::sqrt(variance);
  Eigen::VectorXd e(m);
  for (int i = 0; i < m; ++i) e[i] = sd * rng.normal();
  return e;
}

Eigen::VectorXd sample_gmm_impulse(int m, const GmmSpec& gmm, RngStream rng,
                                   std::vector<int>* labels) {
  if (m < 1) throw std::invalid_argument("gmm: m must be >= 1");
  gmm.validate();
  const int n_comp = static_cast<int>(gmm.weights.size());
  std::vector<double> sd(n_comp);
  for (int c = 0; c < n_comp; ++c) sd[c] = std::sqrt(gmm.variances[c]);
  if (labels) labels->assign(m, 0);

  Eigen::VectorXd e(m);
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform01();
    int c = 0;
    double cum = gmm.weights[0];
    while (c + 1 < n_comp && u >= cum) cum += gmm.weights[++c];
    e[i] = sd[c] * rng.normal();
    if (labels) (*labels)[i] = c;
  }
  return e;
}

Eigen::VectorXd scale_to_snr(const Eigen::VectorXd& noise,
                             const Eigen::VectorXd& clean_signal,
                             double target_snr_db) {
  const double p_signal = clean_signal.squaredNorm() / clean_signal.size();
  const double p_noise = noise.squaredNorm() / noise.size();
  if (!(p_signal > 0.0))
    throw std::invalid_argument("scale_to_snr: clean signal has zero power");
  if (!(p_noise > 0.0))
    throw std::invalid_argument("scale_to_snr: noise has zero power");
  const double p_target = p_signal * std::pow(10.0, -target_snr_db / 10.0);
  return std::sqrt(p_target / p_noise) * noise;
}

Eigen::VectorXd compose_noise(int m, const Eigen::VectorXd& clean_signal,
                              const NoiseConfig& cfg, const RngStream& rng) {
  cfg.gmm.validate();
  Eigen::VectorXd gaussian = sample_gaussian(m, 1.0, rng.child("gaussian"));
  Eigen::VectorXd impulse = sample_gmm_impulse(m, cfg.gmm, rng.child("impulse"));
  return scale_to_snr(gaussian, clean_signal, cfg.sgnr_db) +
         scale_to_snr(impulse, clean_signal, cfg.sinr_db);
}

}  // namespace llbcs
