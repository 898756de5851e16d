#include "smog/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "smog/prox.hpp"

namespace smog {

void SolverOptions::validate() const {
  if (!(eps_abs > 0) || !(eps_rel > 0))
    throw std::invalid_argument("tolerances must be positive");
  if (!(alpha > 1)) throw std::invalid_argument("alpha must exceed 1");
  if (!(L0 > 0)) throw std::invalid_argument("L0 must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
}

int FitResult::n_active_beta() const {
  int count = 0;
  for (Eigen::Index k = 0; k < coefficients.classes(); ++k)
    for (Eigen::Index j = 0; j < coefficients.d(); ++j)
      count += coefficients.beta(j, k) != 0.0;
  return count;
}

int FitResult::n_active_gamma() const {
  int count = 0;
  for (Eigen::Index k = 0; k < coefficients.classes(); ++k)
    for (Eigen::Index j = 0; j < coefficients.d(); ++j)
      count += coefficients.gamma(j, k) != 0.0;
  return count;
}

double majorize_step(const Loss& loss, ADMMState& state, double rho,
                     const SolverOptions& opts) {
  const LossEvaluation at = loss.eval(state.theta);
  double L = std::max(opts.L0, state.L / opts.alpha);
  const Eigen::VectorXd pull = rho * (state.z - state.u);
  Eigen::VectorXd candidate;
  for (;;) {
    candidate = (L * state.theta - at.gradient + pull) / (L + rho);
    const Eigen::VectorXd step = candidate - state.theta;
    const double quad =
        at.value + at.gradient.dot(step) + 0.5 * L * step.squaredNorm();
    const double f_next = loss.value(candidate);
    if (f_next <= quad) break;
    L *= opts.alpha;
    if (L > 1e30)
      throw std::runtime_error("backtracking exceeded L = 1e30 without majorizing; "
                               "the gradient is inconsistent with the loss");
  }
  state.theta = std::move(candidate);
  state.L = L;
  return L;
}

Eigen::VectorXd z_update(const Eigen::VectorXd& theta_next, const Eigen::VectorXd& u,
                         Eigen::Index d, Eigen::Index m, const PenaltyParams& penalty) {
  penalty.validate();
  Eigen::VectorXd z = theta_next + u;
  prox_full_inplace(z, d, m, penalty.lambda1 / penalty.rho,
                    penalty.lambda2 / penalty.rho, penalty.lambda3 / penalty.rho);
  return z;
}

FitResult fit(const Loss& loss, Eigen::Index d, const PenaltyParams& penalty,
              const SolverOptions& opts, const ADMMState* warm) {
  penalty.validate();
  opts.validate();
  const Eigen::Index m = loss.classes();
  const Eigen::Index P = loss.dim();
  if (P != m * (2 * d + 1))
    throw std::invalid_argument("loss dimension does not match 2d+1 per class");
  const double rho = penalty.rho;
  const double sqrt2p = std::sqrt(2.0 * double(P));

  ADMMState st;
  if (warm && warm->theta.size() == P) {
    st = *warm;
  } else {
    st.theta = Eigen::VectorXd::Zero(P);
    st.z = Eigen::VectorXd::Zero(P);
    st.u = Eigen::VectorXd::Zero(P);
    st.L = opts.L0;
  }
  st.z_prev = st.z;

  FitResult out;
  out.n_obs = loss.n();
  out.d = d;
  out.m = m;

  bool converged = false;
  int iter = 0;
  double eps_pri_limit = 0.0, eps_dual_limit = 0.0;
  while (iter < opts.max_iter) {
    ++iter;
    majorize_step(loss, st, rho, opts);
    st.z_prev = st.z;
    st.z = z_update(st.theta, st.u, d, m, penalty);
    st.u += st.theta - st.z;

    st.primal_residual = (st.theta - st.z).norm() / sqrt2p;
    st.dual_residual = (st.z - st.z_prev).norm() / sqrt2p;
    eps_pri_limit = opts.eps_abs +
                    opts.eps_rel * std::max(st.theta.norm(), st.z.norm()) / sqrt2p;
    eps_dual_limit = std::sqrt(double(loss.n()) / double(P)) * opts.eps_abs / rho +
                     opts.eps_rel * st.u.norm() / sqrt2p;
    if (opts.track_objective)
      out.objective_history.push_back(loss.value(st.z) +
                                      penalty_value(st.z, d, m, penalty));
    if (st.primal_residual <= eps_pri_limit && st.dual_residual <= eps_dual_limit) {
      converged = true;
      break;
    }
  }

  out.coefficients = Coefficients::from_flat(st.z, d, m);
  out.converged = converged;
  out.iterations = iter;
  out.primal_residual = st.primal_residual;
  out.dual_residual = st.dual_residual;
  out.eps_pri_limit = eps_pri_limit;
  out.eps_dual_limit = eps_dual_limit;
  out.loss_value = loss.value(st.z);
  out.penalty_value = penalty_value(st.z, d, m, penalty);
  out.theta = std::move(st.theta);
  out.z = std::move(st.z);
  out.z_prev = std::move(st.z_prev);
  out.u = std::move(st.u);
  out.L = st.L;
  return out;
}

FitResult fit(const Dataset& dataset, const PenaltyParams& penalty,
              const SolverOptions& opts, bool standardize) {
  const Design design = assemble_design(dataset, standardize);
  const auto loss = make_loss(design, dataset.response);
  FitResult out = fit(*loss, design.d(), penalty, opts);
  out.center = design.center;
  out.scale = design.scale;
  out.response_center = design.response_center;
  out.standardized = design.standardized;
  out.response = dataset.response.kind;
  return out;
}

double kkt_residual(const FitResult& fit, const Loss& loss, const PenaltyParams& penalty) {
  const Eigen::Index d = fit.d;
  const Eigen::Index m = fit.m;
  const Eigen::VectorXd grad = loss.eval(fit.z).gradient;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index base = k * (2 * d + 1);
    worst = std::max(worst, std::abs(grad[base]));
    for (Eigen::Index j = 0; j < d; ++j) {
      const double b = fit.z[base + 1 + j];
      const double g = fit.z[base + 1 + d + j];
      const double gb = grad[base + 1 + j];
      const double gg = grad[base + 1 + d + j];
      if (b == 0.0 && g == 0.0) {
        // a zero group is optimal when the soft-thresholded gradient block
        // fits inside the group-lasso ball
        const double excess =
            std::hypot(gb, soft_threshold(gg, penalty.lambda3)) - penalty.lambda1;
        worst = std::max(worst, std::max(0.0, excess));
        continue;
      }
      const double nrm = std::hypot(b, g);
      worst = std::max(worst, std::abs(gb + penalty.lambda1 * b / nrm +
                                       2.0 * penalty.lambda2 * b));
      if (g != 0.0) {
        worst = std::max(worst,
                         std::abs(gg + penalty.lambda1 * g / nrm +
                                  2.0 * penalty.lambda2 * g +
                                  penalty.lambda3 * (g > 0 ? 1.0 : -1.0)));
      } else {
        worst = std::max(worst, std::max(0.0, std::abs(gg) - penalty.lambda3));
      }
    }
  }
  return worst;
}

double kkt_residual(const FitResult& fit, const Dataset& dataset,
                    const PenaltyParams& penalty, bool standardize) {
  const Design design = assemble_design(dataset, standardize);
  const auto loss = make_loss(design, dataset.response);
  return kkt_residual(fit, *loss, penalty);
}

}  // namespace smog
