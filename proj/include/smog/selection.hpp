#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smog/solver.hpp"

namespace smog {

enum class CriterionKind { cv_mse, gcv, aic, bic, caic };

std::string to_string(CriterionKind kind);
CriterionKind criterion_from_string(const std::string& name);

struct SelectionOptions {
  CriterionKind criterion = CriterionKind::cv_mse;
  int folds = 5;             // CV folds (criterion cv_mse only)
  std::uint64_t seed = 0;    // drives fold assignment
  double delta = 0.9;        // damping ratio of the pathway search
  int max_steps = 20;
  double lambda2 = 1e-6;     // ridge weight held fixed along the path
  double rho = 1.0;
  bool standardize = true;
  SolverOptions solver;
};

struct PathPoint {
  int step = 0;
  double lambda1 = 0.0;
  double lambda3 = 0.0;
  double criterion = 0.0;
  int n_active_beta = 0;
  int n_active_gamma = 0;
};

struct PathTrace {
  std::vector<PathPoint> points;
  int chosen = -1;  // argmin of criterion over points
  double lambda0 = 0.0;
  const PathPoint& best() const { return points.at(chosen); }
};

struct SearchResult {
  PathTrace trace;
  PenaltyParams penalty;  // chosen (lambda1, lambda3); lambda2/rho from options
  FitResult fit;          // full-data fit at the chosen pair
};

/// Deterministic fold assignment: a permutation of 0..n-1 drawn from `seed`
/// dealt round-robin into K folds. Depends only on (n, K, seed).
std::vector<int> cv_folds(Eigen::Index n, int K, std::uint64_t seed);
/// Survival-aware variant: reshuffles (bounded) until every fold holds an event.
std::vector<int> cv_folds(const Dataset& data, int K, std::uint64_t seed);

/// K-fold criterion: (1/K) sum_k ||y_k - yhat_(-k)||^2 for a continuous
/// response; held-out negative log-likelihood for the other response kinds.
double cv_mse(const Dataset& data, const PenaltyParams& penalty, int K,
              std::uint64_t seed = 0, const SolverOptions& opts = {},
              bool standardize = true);

/// Degrees of freedom tr{X_A (X_A'X_A + W_A)^-1 X_A'} on the active columns;
/// the treatment column always counts as active with zero weight, active
/// beta_j columns carry lambda1/||(beta_j,gamma_j)|| + 2 lambda2, and active
/// gamma_j columns add lambda3/|gamma_j|.
double effective_df(const FitResult& fit, const Design& design,
                    const PenaltyParams& penalty);
/// Count of nonzero coefficients (tau included), the d_lambda used by cAIC.
int active_count_df(const FitResult& fit);

double gcv(const FitResult& fit, const Dataset& data, const PenaltyParams& penalty,
           bool standardize = true);
double aic(const FitResult& fit, const Dataset& data, const PenaltyParams& penalty,
           bool standardize = true);
double bic(const FitResult& fit, const Dataset& data, const PenaltyParams& penalty,
           bool standardize = true);
double caic(const FitResult& fit, const Dataset& data, const PenaltyParams& penalty,
            bool standardize = true);

/// Starting penalty of the pathway search: 1.1 times the largest group norm
/// ||(x_j' r, w_j' r)|| of the loss gradient at the treatment-only fit, the
/// smallest value at which the all-zero model is stationary.
double lambda_zero(const Dataset& data, bool standardize = true);

/// Greedy two-parameter pathway search. Starting from lambda1 = lambda3 =
/// lambda0, each step evaluates c1 = c(l0 d^(m1+1), l0 d^m3), c2 = c(l0 d^m1,
/// l0 d^(m3+1)), c3 = c(l0 d^(m1+1), l0 d^(m3+1)) and advances the exponents by
/// m1 += I(min(c1,c3) <= c2), m3 += I(min(c2,c3) < c1); the walk stops when the
/// criterion first increases or after max_steps. The returned pair minimizes
/// the criterion over every point evaluated. Fits along the path warm-start
/// from the current anchor point.
SearchResult greedy_search(const Dataset& data, const SelectionOptions& options);

}  // namespace smog
