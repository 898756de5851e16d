#pragma once

#include <Eigen/Core>

#include <memory>
#include <vector>

#include "smog/design.hpp"
#include "smog/types.hpp"

namespace smog {

struct LossEvaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// Smooth convex part f(theta) of the objective, evaluated on the flat
/// coefficient layout (m class blocks of size 2d+1). Implementations keep a
/// pointer to the Design they were built on; the design must outlive the loss.
class Loss {
 public:
  virtual ~Loss() = default;
  virtual Eigen::Index dim() const = 0;
  virtual Eigen::Index classes() const = 0;
  virtual Eigen::Index n() const = 0;
  virtual double value(const Eigen::VectorXd& theta) const = 0;
  virtual LossEvaluation eval(const Eigen::VectorXd& theta) const = 0;
};

/// 1/2 ||y_c - M theta||^2 on the centered response y_c = y - response_center.
class GaussianLoss : public Loss {
 public:
  GaussianLoss(const Design& design, const Eigen::VectorXd& y);
  Eigen::Index dim() const override;
  Eigen::Index classes() const override { return 1; }
  Eigen::Index n() const override;
  double value(const Eigen::VectorXd& theta) const override;
  LossEvaluation eval(const Eigen::VectorXd& theta) const override;

 private:
  const Design* design_;
  Eigen::VectorXd yc_;
};

/// Negative multinomial log-likelihood with class K as the pivot:
///   sum_i log(1 + sum_k exp(psi_ik)) - sum_k sum_{i in G_k} psi_ik
/// evaluated with log-sum-exp stabilization.
class MultinomialLoss : public Loss {
 public:
  MultinomialLoss(const Design& design, const std::vector<int>& labels, int n_classes);
  Eigen::Index dim() const override;
  Eigen::Index classes() const override { return n_classes_ - 1; }
  Eigen::Index n() const override;
  double value(const Eigen::VectorXd& theta) const override;
  LossEvaluation eval(const Eigen::VectorXd& theta) const override;

 private:
  const Design* design_;
  std::vector<int> labels_;
  int n_classes_;
  Eigen::VectorXd label_counts_;  // per class k, number of i in G_k (unused in math, kept for checks)
  Eigen::MatrixXd indicator_;     // n x (K-1), 1 when label == k+1
};

/// Negative partial log-likelihood with Efron handling of tied event times:
/// per unique event time t with tie set H (m = |H|),
///   sum_{l=0..m-1} log( sum_{Y_j >= t} phi_j - (l/m) sum_{j in H} phi_j )
///   - sum_{j in H} psi_j.
/// Censored subjects at exactly t are included in the risk set.
class CoxLoss : public Loss {
 public:
  CoxLoss(const Design& design, const Eigen::VectorXd& time, const Eigen::VectorXi& status);
  Eigen::Index dim() const override;
  Eigen::Index classes() const override { return 1; }
  Eigen::Index n() const override;
  double value(const Eigen::VectorXd& theta) const override;
  LossEvaluation eval(const Eigen::VectorXd& theta) const override;

 private:
  // shared sweep; grad == nullptr for value-only evaluation
  double compute(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const;

  const Design* design_;
  Eigen::VectorXd time_;
  Eigen::VectorXi status_;
  std::vector<int> order_;  // indices sorted by time descending
};

std::unique_ptr<Loss> make_loss(const Design& design, const ResponseData& response);

// Single-evaluation helpers mirroring the per-response operations.
LossEvaluation gaussian_loss(const Design& design, const Eigen::VectorXd& y,
                             const Coefficients& coef);
LossEvaluation multinomial_loss(const Design& design, const std::vector<int>& labels,
                                int n_classes, const Coefficients& coef);
LossEvaluation cox_loss(const Design& design, const Eigen::VectorXd& time,
                        const Eigen::VectorXi& status, const Coefficients& coef);

}  // namespace smog
