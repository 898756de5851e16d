#pragma once

#include <Eigen/Core>

#include "smog/types.hpp"

namespace smog {

/// sign(x) * (|x| - lam)_+
double soft_threshold(double x, double lam);

struct ProxPair {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

/// Closed-form minimizer of
///   1/2 ||theta - b||^2 + lam1 ||theta||_2 + lam2 ||theta||_2^2 + lam3 |theta_2|
/// over theta = (theta1, theta2):
///   s = soft_threshold(b2, lam3)
///   theta = (1 - lam1 / ||(b1, s)||)_+ (b1, s) / (1 + 2 lam2)
/// Returns exact zeros whenever ||(b1, s)|| <= lam1 (boundary maps to zero).
ProxPair prox_pair(double b1, double b2, double lam1, double lam2, double lam3);

/// Blockwise prox on a flat coefficient vector laid out as m class blocks of
/// (tau, beta_1..d, gamma_1..d). tau passes through unpenalized; each
/// (beta_j, gamma_j) pair is prox_pair of the matching entries.
Eigen::VectorXd prox_full(const Eigen::VectorXd& b, Eigen::Index d, Eigen::Index m,
                          double lam1, double lam2, double lam3);
void prox_full_inplace(Eigen::VectorXd& b, Eigen::Index d, Eigen::Index m,
                       double lam1, double lam2, double lam3);

/// Penalty value sum_j lam1 ||(beta_j, gamma_j)|| + lam2 ||.||^2 + lam3 |gamma_j|
/// summed over class blocks of the flat vector. rho plays no role here.
double penalty_value(const Eigen::VectorXd& theta, Eigen::Index d, Eigen::Index m,
                     const PenaltyParams& penalty);

}  // namespace smog
