#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

#include "llbcs/solver.hpp"

namespace llbcs {

/// Canonical method identifiers, as used in CLI flags and result files.
enum class Method { LlBcs, LBcs, Bcs, L1 };

std::string method_name(Method m);              // "ll-bcs", "l-bcs", "bcs", "l1"
Method parse_method(std::string_view name);     // throws on unknown name

struct BaselineOptions {
  Method method = Method::Bcs;
  double l1_penalty = 1.0;  // L1 only; must be > 0
  double eps_min = 1e-3;
  int max_iter = 1000;
  double gamma_floor = kVarianceFloor;
  double noise_var_init = 1.0;  // scalar noise variance at start (Bayesian ones)
};

/// Default L1 penalty by the universal-threshold rule scaled to a robust
/// noise-floor proxy: mad(y)/0.6745 * max column norm * sqrt(2 ln N).
double default_l1_penalty(const SensingMatrix& a, const Eigen::VectorXd& y);

/// L1-penalized least squares, 0.5*||y - A x||^2 + penalty*||x||_1, solved
/// by monotone accelerated proximal gradient descent. Spectrum is |x|.
/// `objective_trace`, when non-null, receives the objective value after each
/// iteration (non-increasing by construction).
DelaySpectrum lasso_solve(const SensingMatrix& a, const Eigen::VectorXd& y,
                          const BaselineOptions& opts,
                          std::vector<double>* objective_trace = nullptr);

/// Evidence-maximization sparse Bayesian learning with Gaussian prior and
/// scalar Gaussian noise: gamma_j <- mu_j^2 + sigma_jj, noise variance from
/// the mean expected squared residual.
DelaySpectrum bcs_solve(const SensingMatrix& a, const Eigen::VectorXd& y,
                        const BaselineOptions& opts);

/// Sparsity-promoting variant with the same prior updates as the robust
/// solver but a homoscedastic Gaussian noise model (one shared variance).
DelaySpectrum l_bcs_solve(const SensingMatrix& a, const Eigen::VectorXd& y,
                          const BaselineOptions& opts);

}  // namespace llbcs
