#include "llbcs/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace llbcs {

namespace {

void check_positive(const Eigen::VectorXd& v, const char* name) {
  if ((v.array() <= 0.0).any()) {
    throw std::invalid_argument(std::string(name) +
                                " must be strictly positive elementwise");
  }
}

// Positive root of rate*v^2 + v = c, written in the conjugate form that
// avoids cancellation for small rate*c and any division by the rate.
inline double variance_root(double c, double rate) {
  return 2.0 * c / (1.0 + std::sqrt(1.0 + 4.0 * rate * c));
}

double q_from_parts(const SolverState& s, const Eigen::VectorXd& r) {
  const auto n = s.gamma.size();
  const auto m = s.tau.size();
  const Eigen::ArrayXd second_moment =
      s.mu.array().square() + s.sigma.diagonal().array();
  double q = 0.0;
  q += -0.5 * s.gamma.array().log().sum();
  q += -0.5 * (second_moment / s.gamma.array()).sum();
  q += -0.5 * s.tau.array().log().sum();
  q += -0.5 * (r.array() / s.tau.array()).sum();
  q += static_cast<double>(m) * std::log(s.beta / 2.0) -
       s.beta * s.tau.sum() / 2.0;
  q += static_cast<double>(n) * std::log(s.lambda / 2.0) -
       s.lambda * s.gamma.sum() / 2.0;
  return q;
}

}  // namespace

Posterior posterior_update(const SensingMatrix& a, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& gamma,
                           const Eigen::VectorXd& tau) {
  const auto& mat = a.matrix();
  if (y.size() != mat.rows() || gamma.size() != mat.cols() ||
      tau.size() != mat.rows())
    throw std::invalid_argument("posterior: dimension mismatch");
  check_positive(gamma, "posterior: gamma");
  check_positive(tau, "posterior: tau");

  const Eigen::VectorXd w = tau.cwiseInverse();
  const Eigen::MatrixXd b = w.cwiseSqrt().asDiagonal() * mat;

  Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(mat.cols(), mat.cols());
  precision.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
  precision = precision.selfadjointView<Eigen::Lower>();
  precision.diagonal() += gamma.cwiseInverse();

  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "posterior: factorization failed (ill-conditioned input)");

  Posterior post;
  post.mu = llt.solve(mat.transpose() * w.cwiseProduct(y));
  post.sigma = llt.solve(Eigen::MatrixXd::Identity(mat.cols(), mat.cols()));
  post.sigma = 0.5 * (post.sigma + post.sigma.transpose()).eval();
  return post;
}

Eigen::VectorXd update_gamma(const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& sigma_diag, double lambda,
                             double floor) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("update_gamma: lambda must be > 0");
  if ((sigma_diag.array() < 0.0).any())
    throw std::invalid_argument("update_gamma: sigma_diag must be >= 0");
  Eigen::VectorXd gamma(mu.size());
  for (Eigen::Index j = 0; j < mu.size(); ++j)
    gamma[j] = std::max(variance_root(mu[j] * mu[j] + sigma_diag[j], lambda),
                        floor);
  return gamma;
}

double update_lambda(const Eigen::VectorXd& gamma) {
  if (gamma.size() == 0)
    throw std::invalid_argument("update_lambda: empty gamma");
  check_positive(gamma, "update_lambda: gamma");
  return 2.0 * static_cast<double>(gamma.size()) / gamma.sum();
}

double update_beta(const Eigen::VectorXd& tau) {
  if (tau.size() == 0) throw std::invalid_argument("update_beta: empty tau");
  check_positive(tau, "update_beta: tau");
  return 2.0 * static_cast<double>(tau.size()) / tau.sum();
}

Eigen::VectorXd residual_moments(const SensingMatrix& a,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& mu,
                                 const Eigen::MatrixXd& sigma) {
  const auto& mat = a.matrix();
  if (y.size() != mat.rows() || mu.size() != mat.cols() ||
      sigma.rows() != mat.cols() || sigma.cols() != mat.cols())
    throw std::invalid_argument("residual_moments: dimension mismatch");

  // diag(A S A') via row-wise products: only the M x N intermediate A*S is
  // formed, never the M x M product.
  Eigen::MatrixXd second_moment = sigma;
  second_moment.noalias() += mu * mu.transpose();
  const Eigen::MatrixXd as = mat * second_moment;
  const Eigen::VectorXd quad = (as.array() * mat.array()).rowwise().sum();
  const Eigen::VectorXd fit = mat * mu;

  Eigen::VectorXd r =
      (y.array().square() - 2.0 * y.array() * fit.array() + quad.array())
          .matrix();
  return r.cwiseMax(0.0);
}

Eigen::VectorXd update_tau(const Eigen::VectorXd& r, double beta,
                           double floor) {
  if (!(beta > 0.0))
    throw std::invalid_argument("update_tau: beta must be > 0");
  if ((r.array() < 0.0).any())
    throw std::invalid_argument("update_tau: residual moments must be >= 0");
  Eigen::VectorXd tau(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i)
    tau[i] = std::max(variance_root(r[i], beta), floor);
  return tau;
}

double log_evidence_q(const SolverState& state, const SensingMatrix& a,
                      const Eigen::VectorXd& y) {
  check_positive(state.gamma, "log_evidence_q: gamma");
  check_positive(state.tau, "log_evidence_q: tau");
  if (!(state.lambda > 0.0) || !(state.beta > 0.0))
    throw std::invalid_argument("log_evidence_q: rates must be > 0");
  const Eigen::VectorXd r = residual_moments(a, y, state.mu, state.sigma);
  return q_from_parts(state, r);
}

Eigen::VectorXd least_squares_solution(const SensingMatrix& a,
                                       const Eigen::VectorXd& y) {
  if (y.size() != a.rows())
    throw std::invalid_argument("least_squares: dimension mismatch");
  return a.matrix().colPivHouseholderQr().solve(y);
}

LlBcsResult ll_bcs_solve(const SensingMatrix& a, const Eigen::VectorXd& y,
                         const SolverOptions& opts) {
  const auto m = a.rows();
  const auto n = a.cols();
  if (m < 1 || n < 1 || y.size() != m)
    throw std::invalid_argument("ll_bcs_solve: dimension mismatch");
  if (!(opts.eps_min > 0.0) || opts.max_iter < 1 ||
      !(opts.lambda_init > 0.0) || !(opts.beta_init > 0.0) ||
      !(opts.gamma_floor > 0.0) || !(opts.tau_init > 0.0))
    throw std::invalid_argument("ll_bcs_solve: invalid options");

  // Least-squares warm start for gamma, made positive and floored.
  Eigen::VectorXd gamma =
      least_squares_solution(a, y).cwiseAbs().cwiseMax(opts.gamma_floor);
  Eigen::VectorXd tau = Eigen::VectorXd::Constant(m, opts.tau_init);
  double lambda = opts.lambda_init;
  double beta = opts.beta_init;

  std::ofstream trace;
  if (!opts.trace_path.empty()) {
    trace.open(opts.trace_path);
    if (!trace)
      throw std::runtime_error("ll_bcs_solve: cannot open trace file " +
                               opts.trace_path);
    trace << "iteration,eps,lambda,beta,q\n";
  }

  Posterior post;
  bool converged = false;
  int iter = 0;
  while (iter < opts.max_iter) {
    post = posterior_update(a, y, gamma, tau);

    const Eigen::VectorXd gamma_old = gamma;
    gamma = update_gamma(post.mu, post.sigma.diagonal(), lambda,
                         opts.gamma_floor);
    lambda = update_lambda(gamma);
    beta = update_beta(tau);  // rate from the pre-update noise variances
    const Eigen::VectorXd r = residual_moments(a, y, post.mu, post.sigma);
    tau = update_tau(r, beta, opts.gamma_floor);
    ++iter;

    const double eps = (gamma - gamma_old).lpNorm<1>() / gamma_old.lpNorm<1>();
    if (trace.is_open()) {
      SolverState snapshot{post.mu, post.sigma, gamma, tau, lambda, beta,
                           iter};
      trace << iter << ',' << eps << ',' << lambda << ',' << beta << ','
            << q_from_parts(snapshot, r) << '\n';
    }
    if (eps < opts.eps_min) {
      converged = true;
      break;
    }
  }

  LlBcsResult result;
  result.state = SolverState{post.mu,  post.sigma, gamma, tau,
                             lambda,   beta,       iter};
  result.spectrum = DelaySpectrum{gamma, a.grid(), iter, converged};
  return result;
}

}  // namespace llbcs
