#include "llbcs/baselines.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace llbcs {

std::string method_name(Method m) {
  switch (m) {
    case Method::LlBcs: return "ll-bcs";
    case Method::LBcs: return "l-bcs";
    case Method::Bcs: return "bcs";
    case Method::L1: return "l1";
  }
  throw std::logic_error("unknown method tag");
}

Method parse_method(std::string_view name) {
  if (name == "ll-bcs") return Method::LlBcs;
  if (name == "l-bcs") return Method::LBcs;
  if (name == "bcs") return Method::Bcs;
  if (name == "l1") return Method::L1;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected ll-bcs, l-bcs, bcs or l1)");
}

namespace {

void check_dims(const SensingMatrix& a, const Eigen::VectorXd& y,
                const char* who) {
  if (y.size() != a.rows() || a.rows() < 1 || a.cols() < 1)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (hi + v[mid - 1]);
  }
  return hi;
}

// Largest eigenvalue of A'A by power iteration, slightly inflated so the
// proximal step 1/L stays on the safe side.
double gram_spectral_bound(const Eigen::MatrixXd& a) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.cols()).normalized();
  double lam = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd gv = a.transpose() * (a * v);
    const double norm = gv.norm();
    if (norm == 0.0) return 1.0;
    gv /= norm;
    const double lam_new = (a * gv).squaredNorm();
    if (std::abs(lam_new - lam) <= 1e-12 * lam_new) {
      lam = lam_new;
      break;
    }
    lam = lam_new;
    v = gv;
  }
  return lam * 1.01 + 1e-300;
}

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

double lasso_objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& x, double penalty) {
  return 0.5 * (y - a * x).squaredNorm() + penalty * x.lpNorm<1>();
}

}  // namespace

double default_l1_penalty(const SensingMatrix& a, const Eigen::VectorXd& y) {
  if (y.size() == 0)
    throw std::invalid_argument("default_l1_penalty: empty observation");
  std::vector<double> v(y.data(), y.data() + y.size());
  const double med = median_of(v);
  for (double& x : v) x = std::abs(x - med);
  const double sigma_hat = median_of(std::move(v)) / 0.6745;
  const double col_norm = a.matrix().colwise().norm().maxCoeff();
  const double n = static_cast<double>(a.cols());
  const double p = sigma_hat * col_norm * std::sqrt(2.0 * std::log(n));
  return p > 0.0 ? p : 1e-12;
}

DelaySpectrum lasso_solve(const SensingMatrix& a, const Eigen::VectorXd& y,
                          const BaselineOptions& opts,
                          std::vector<double>* objective_trace) {
  check_dims(a, y, "lasso");
  if (!(opts.l1_penalty > 0.0))
    throw std::invalid_argument("lasso: l1_penalty must be > 0");
  if (!(opts.eps_min > 0.0) || opts.max_iter < 1)
    throw std::invalid_argument("lasso: invalid options");

  const auto& mat = a.matrix();
  const double step = 1.0 / gram_spectral_bound(mat);
  const double thresh = opts.l1_penalty * step;
  if (objective_trace) objective_trace->clear();

  // Monotone FISTA: keep the best iterate so the objective never increases,
  // while the momentum point retains the accelerated rate.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(mat.cols());
  Eigen::VectorXd momentum = x;
  double fx = lasso_objective(mat, y, x, opts.l1_penalty);
  double t = 1.0;
  bool converged = false;
  int iter = 0;

  while (iter < opts.max_iter) {
    const Eigen::VectorXd grad = mat.transpose() * (mat * momentum - y);
    Eigen::VectorXd prox = momentum - step * grad;
    for (Eigen::Index j = 0; j < prox.size(); ++j)
      prox[j] = soft_threshold(prox[j], thresh);

    const double f_prox = lasso_objective(mat, y, prox, opts.l1_penalty);
    const Eigen::VectorXd x_old = x;
    double fx_new = fx;
    if (f_prox <= fx) {
      x = prox;
      fx_new = f_prox;
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    momentum = x + (t / t_new) * (prox - x) + ((t - 1.0) / t_new) * (x - x_old);
    t = t_new;
    fx = fx_new;
    ++iter;
    if (objective_trace) objective_trace->push_back(fx);

    // A rejected prox step leaves x in place, which must not read as
    // convergence; require the candidate itself to have settled too.
    const double denom = std::max(x_old.lpNorm<1>(), 1e-12);
    const double moved = (x - x_old).lpNorm<1>() / denom;
    const double candidate_gap =
        (prox - x).lpNorm<1>() / std::max(x.lpNorm<1>(), 1e-12);
    if (std::max(moved, candidate_gap) < opts.eps_min) {
      converged = true;
      break;
    }
  }

  return DelaySpectrum{x.cwiseAbs(), a.grid(), iter, converged};
}

DelaySpectrum bcs_solve(const SensingMatrix& a, const Eigen::VectorXd& y,
                        const BaselineOptions& opts) {
  check_dims(a, y, "bcs");
  if (!(opts.eps_min > 0.0) || opts.max_iter < 1 ||
      !(opts.gamma_floor > 0.0) || !(opts.noise_var_init > 0.0))
    throw std::invalid_argument("bcs: invalid options");

  const auto& mat = a.matrix();
  const auto n = mat.cols();
  const auto m = mat.rows();

  // The Gram matrix is fixed here (scalar noise), so it is formed once and
  // the per-iteration precision is assembled in O(N^2).
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(mat.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();
  const Eigen::VectorXd aty = mat.transpose() * y;
  const double yty = y.squaredNorm();

  Eigen::VectorXd gamma =
      least_squares_solution(a, y).cwiseAbs().cwiseMax(opts.gamma_floor);
  double noise_var = opts.noise_var_init;
  bool converged = false;
  int iter = 0;

  while (iter < opts.max_iter) {
    Eigen::MatrixXd precision = gram / noise_var;
    precision.diagonal() += gamma.cwiseInverse();
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("bcs: factorization failed");
    const Eigen::VectorXd mu = llt.solve(aty / noise_var);
    const Eigen::MatrixXd sigma =
        llt.solve(Eigen::MatrixXd::Identity(n, n));

    const Eigen::VectorXd gamma_old = gamma;
    gamma = (mu.array().square() + sigma.diagonal().array())
                .max(opts.gamma_floor)
                .matrix();

    // Mean expected squared residual; trace(S A'A) route is algebraically
    // the mean of the per-sample residual moments.
    Eigen::MatrixXd second_moment = sigma;
    second_moment.noalias() += mu * mu.transpose();
    const double sum_r =
        yty - 2.0 * mu.dot(aty) + (second_moment.array() * gram.array()).sum();
    noise_var = std::max(sum_r / static_cast<double>(m), opts.gamma_floor);
    ++iter;

    const double eps = (gamma - gamma_old).lpNorm<1>() / gamma_old.lpNorm<1>();
    if (eps < opts.eps_min) {
      converged = true;
      break;
    }
  }

  return DelaySpectrum{gamma, a.grid(), iter, converged};
}

DelaySpectrum l_bcs_solve(const SensingMatrix& a, const Eigen::VectorXd& y,
                          const BaselineOptions& opts) {
  check_dims(a, y, "l-bcs");
  if (!(opts.eps_min > 0.0) || opts.max_iter < 1 ||
      !(opts.gamma_floor > 0.0) || !(opts.noise_var_init > 0.0))
    throw std::invalid_argument("l-bcs: invalid options");

  const auto& mat = a.matrix();
  const auto m = mat.rows();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(mat.cols(), mat.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(mat.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();
  const Eigen::VectorXd aty = mat.transpose() * y;
  const double yty = y.squaredNorm();

  Eigen::VectorXd gamma =
      least_squares_solution(a, y).cwiseAbs().cwiseMax(opts.gamma_floor);
  double noise_var = opts.noise_var_init;
  double lambda = 0.1;
  bool converged = false;
  int iter = 0;

  while (iter < opts.max_iter) {
    const Eigen::VectorXd tau = Eigen::VectorXd::Constant(m, noise_var);
    const Posterior post = posterior_update(a, y, gamma, tau);

    const Eigen::VectorXd gamma_old = gamma;
    gamma = update_gamma(post.mu, post.sigma.diagonal(), lambda,
                         opts.gamma_floor);
    lambda = update_lambda(gamma);

    Eigen::MatrixXd second_moment = post.sigma;
    second_moment.noalias() += post.mu * post.mu.transpose();
    const double sum_r = yty - 2.0 * post.mu.dot(aty) +
                         (second_moment.array() * gram.array()).sum();
    noise_var = std::max(sum_r / static_cast<double>(m), opts.gamma_floor);
    ++iter;

    const double eps = (gamma - gamma_old).lpNorm<1>() / gamma_old.lpNorm<1>();
    if (eps < opts.eps_min) {
      converged = true;
      break;
    }
  }

  return DelaySpectrum{gamma, a.grid(), iter, converged};
}

}  // namespace llbcs
