#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace smog {

enum class ResponseKind { gaussian, multinomial, cox };

std::string to_string(ResponseKind kind);
ResponseKind response_kind_from_string(const std::string& name);

/// Response block of a dataset. Exactly one layout is populated, selected by
/// `kind`:
///   gaussian     y
///   multinomial  labels in 1..K with K = n_classes; class K is the pivot
///   cox          time > 0 and status (1 = event, 0 = censored)
struct ResponseData {
  ResponseKind kind = ResponseKind::gaussian;
  Eigen::VectorXd y;
  std::vector<int> labels;
  int n_classes = 0;
  Eigen::VectorXd time;
  Eigen::VectorXi status;

  static ResponseData continuous(Eigen::VectorXd y);
  static ResponseData categorical(std::vector<int> labels, int n_classes);
  static ResponseData survival(Eigen::VectorXd time, Eigen::VectorXi status);

  Eigen::Index size() const;
  /// Number of coefficient blocks: K-1 for multinomial, 1 otherwise.
  int coefficient_classes() const;
  ResponseData subset(const std::vector<int>& rows) const;
  void validate() const;
};

struct Dataset {
  ResponseData response;
  Eigen::VectorXd treatment;       // entries are exactly -1 or +1
  Eigen::MatrixXd covariates;      // n x d
  std::vector<std::string> names;  // covariate names, size d
  bool treatment_remapped = false; // input coded {0,1} was remapped to {-1,+1}

  /// Validates invariants; {0,1} treatment coding is remapped to {-1,+1} and
  /// flagged via treatment_remapped. Generates names x1..xd when absent.
  static Dataset make(ResponseData response, Eigen::VectorXd treatment,
                      Eigen::MatrixXd covariates,
                      std::vector<std::string> names = {});
  Eigen::Index n() const { return covariates.rows(); }
  Eigen::Index d() const { return covariates.cols(); }
  Dataset subset(const std::vector<int>& rows) const;
  void validate() const;
};

struct PenaltyParams {
  double lambda1 = 0.0;  // group weight on (beta_j, gamma_j)
  double lambda2 = 0.0;  // ridge weight
  double lambda3 = 0.0;  // lasso weight on gamma_j
  double rho = 1.0;      // ADMM penalty

  void validate() const;
};

/// Fitted coefficients, one column per class block (K-1 blocks for a
/// multinomial response, otherwise one). The flat layout used by the solver
/// stacks per-class blocks of (tau, beta_1..d, gamma_1..d).
struct Coefficients {
  Eigen::VectorXd tau;    // m
  Eigen::MatrixXd beta;   // d x m
  Eigen::MatrixXd gamma;  // d x m

  static Coefficients zero(Eigen::Index d, Eigen::Index m = 1);
  static Coefficients from_flat(const Eigen::VectorXd& flat, Eigen::Index d,
                                Eigen::Index m);
  Eigen::VectorXd to_flat() const;
  Eigen::Index d() const { return beta.rows(); }
  Eigen::Index classes() const { return tau.size(); }
};

/// True iff gamma(j,k) != 0 implies beta(j,k) != 0 for every j and class k.
/// Exact zero comparison on stored values.
bool hierarchy_satisfied(const Coefficients& coef);

}  // namespace smog
