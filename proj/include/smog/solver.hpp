#pragma once

#include <Eigen/Core>

#include <vector>

#include "smog/loss.hpp"
#include "smog/types.hpp"

namespace smog {

struct SolverOptions {
  double eps_abs = 1e-5;   // absolute tolerance of the stopping criterion
  double eps_rel = 1e-5;   // relative tolerance
  double alpha = 2.0;      // backtracking multiplier, > 1
  double L0 = 1.0;         // initial Lipschitz guess
  int max_iter = 5000;
  bool track_objective = false;  // record f(z) + penalty(z) per iteration

  void validate() const;
};

struct ADMMState {
  Eigen::VectorXd theta;
  Eigen::VectorXd z;
  Eigen::VectorXd u;       // running sum of (theta - z) differences
  Eigen::VectorXd z_prev;
  double L = 1.0;          // accepted Lipschitz estimate of the last MM step
  int iteration = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct FitResult {
  Coefficients coefficients;  // taken from z, the exactly-sparse iterate
  bool converged = false;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double eps_pri_limit = 0.0;
  double eps_dual_limit = 0.0;
  double loss_value = 0.0;     // f(z) at termination
  double penalty_value = 0.0;  // lambda * Omega(z) at termination

  // final iterates, kept so the stopping inequalities can be re-checked
  Eigen::VectorXd theta;
  Eigen::VectorXd z;
  Eigen::VectorXd z_prev;
  Eigen::VectorXd u;
  double L = 1.0;  // accepted Lipschitz estimate at termination

  Eigen::Index n_obs = 0;
  Eigen::Index d = 0;
  Eigen::Index m = 1;

  std::vector<double> objective_history;  // filled when track_objective is set

  // transforms of the design the fit was produced on (empty for loss-level fits)
  Eigen::VectorXd center;
  Eigen::VectorXd scale;
  double response_center = 0.0;
  bool standardized = false;
  ResponseKind response = ResponseKind::gaussian;

  int n_active_beta() const;
  int n_active_gamma() const;
};

/// One MM update of theta: backtracks L (starting from max(L0, state.L/alpha))
/// until f(theta_next) <= Q(theta_next | theta), then commits theta_next and
/// the accepted L into the state. Returns the accepted L.
double majorize_step(const Loss& loss, ADMMState& state, double rho,
                     const SolverOptions& opts);

/// z = prox of the penalty with weights lambda/rho at theta_next + u.
Eigen::VectorXd z_update(const Eigen::VectorXd& theta_next, const Eigen::VectorXd& u,
                         Eigen::Index d, Eigen::Index m, const PenaltyParams& penalty);

/// MM-ADMM minimization of f(theta) + lambda Omega(z) subject to theta = z.
/// Stops when both the primal and dual residual fall under their limits:
///   eps_pri  = ||theta - z|| / sqrt(2P)   <= eps_abs + eps_rel max(||theta||,||z||)/sqrt(2P)
///   eps_dual = ||z - z_prev|| / sqrt(2P)  <= sqrt(n/P) eps_abs / rho + eps_rel ||u||/sqrt(2P)
/// with P the flat coefficient dimension. Warm starts continue from a prior state.
FitResult fit(const Loss& loss, Eigen::Index d, const PenaltyParams& penalty,
              const SolverOptions& opts = {}, const ADMMState* warm = nullptr);

/// Convenience overload: assembles the design, builds the matching loss and
/// records the transforms in the result.
FitResult fit(const Dataset& dataset, const PenaltyParams& penalty,
              const SolverOptions& opts = {}, bool standardize = true);

/// Largest subgradient-optimality violation over coordinates at the fitted z:
/// |grad| on active coordinates (plus the penalty gradient), the soft-thresholded
/// group norm excess on zero groups, and the lasso-gate excess on zero gammas
/// inside active groups.
double kkt_residual(const FitResult& fit, const Loss& loss, const PenaltyParams& penalty);
double kkt_residual(const FitResult& fit, const Dataset& dataset,
                    const PenaltyParams& penalty, bool standardize = true);

}  // namespace smog
