#pragma once

#include <Eigen/Core>
#include <string>

#include "llbcs/signal_model.hpp"

namespace llbcs {

/// Shared positivity floor for variance hyperparameters: entries never drop
/// below this, which keeps diag(.)^{-1} finite without pruning bins.
inline constexpr double kVarianceFloor = 1e-8;

/// Iteration controls and initial hyperparameters for the robust solver.
struct SolverOptions {
  double eps_min = 1e-3;     // stop when relative L1 change of gamma drops below
  int max_iter = 1000;
  double lambda_init = 0.1;  // prior rate
  double beta_init = 0.1;    // noise rate
  double gamma_floor = kVarianceFloor;
  double tau_init = 1.0;     // per-sample noise variance at start
  std::string trace_path;    // when set, per-iteration CSV is written here
};

/// Posterior moments plus hyperparameters of one solver iteration.
///
/// gamma holds per-bin prior variances (the delay spectrum being learned),
/// tau per-sample noise variances; lambda and beta are the rates of the
/// exponential hyperpriors tying them together.
struct SolverState {
  Eigen::VectorXd mu;     // posterior mean of the channel vector
  Eigen::MatrixXd sigma;  // posterior covariance, symmetric positive definite
  Eigen::VectorXd gamma;
  Eigen::VectorXd tau;
  double lambda = 0.0;
  double beta = 0.0;
  int iterations = 0;
};

/// Converged per-bin variance profile read out as a delay spectrum.
struct DelaySpectrum {
  Eigen::VectorXd values;  // nonnegative, one per grid bin
  TimeGrid grid;
  int iterations_used = 0;
  bool converged = false;
};

struct Posterior {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

/// Gaussian posterior of x given per-bin prior variances and per-sample
/// noise variances: sigma = (diag(gamma)^-1 + A' diag(tau)^-1 A)^-1 via a
/// symmetric positive-definite factorization; mu = sigma A' diag(tau)^-1 y.
Posterior posterior_update(const SensingMatrix& a, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& gamma,
                           const Eigen::VectorXd& tau);

/// Closed-form per-bin prior variance update: the positive root of
/// lambda*g^2 + g = mu_j^2 + sigma_jj, floored for positivity.
Eigen::VectorXd update_gamma(const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& sigma_diag, double lambda,
                             double floor = kVarianceFloor);

/// Prior rate update: 2N / sum(gamma).
double update_lambda(const Eigen::VectorXd& gamma);

/// Noise rate update: 2M / sum(tau).
double update_beta(const Eigen::VectorXd& tau);

/// Expected squared residual per sample under the posterior:
/// r_i = y_i^2 - 2 y_i [A mu]_i + [A (sigma + mu mu') A']_ii, computed
/// without forming the M x M product, clamped to be nonnegative.
Eigen::VectorXd residual_moments(const SensingMatrix& a,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& mu,
                                 const Eigen::MatrixXd& sigma);

/// Closed-form per-sample noise variance update: positive root of
/// beta*t^2 + t = r_i, floored for positivity.
Eigen::VectorXd update_tau(const Eigen::VectorXd& r, double beta,
                           double floor = kVarianceFloor);

/// Expected complete-data log evidence for the current state, up to
/// additive constants independent of all hyperparameters.
double log_evidence_q(const SolverState& state, const SensingMatrix& a,
                      const Eigen::VectorXd& y);

/// Minimum-norm least squares solution A+ y (rank-revealing factorization,
/// never an explicit pseudoinverse matrix).
Eigen::VectorXd least_squares_solution(const SensingMatrix& a,
                                       const Eigen::VectorXd& y);

struct LlBcsResult {
  DelaySpectrum spectrum;
  SolverState state;  // final state, for diagnostics
};

/// Robust sparse Bayesian solver: per-sample noise variances absorb
/// impulsive outliers while per-bin prior variances learn the sparse delay
/// profile. EM iteration of posterior and hyperparameter updates until the
/// relative L1 change of gamma drops below eps_min or max_iter is reached.
/// Non-convergence is reported via the spectrum flag, not as an error.
LlBcsResult ll_bcs_solve(const SensingMatrix& a, const Eigen::VectorXd& y,
                         const SolverOptions& opts = {});

}  // namespace llbcs
