#pragma once

#include <Eigen/Core>

#include "smog/types.hpp"

namespace smog {

/// Assembled model-matrix blocks. Covariate columns are centered (and scaled
/// to unit sample variance when standardized); W is recomputed from the
/// transformed X so that W(i,j) = X(i,j) * t(i) holds exactly. No intercept
/// column; the continuous response is centered via response_center instead.
struct Design {
  Eigen::VectorXd t;
  Eigen::MatrixXd X;
  Eigen::MatrixXd W;
  Eigen::VectorXd center;        // d column means removed from X
  Eigen::VectorXd scale;         // d column scales (ones when not standardized)
  double response_center = 0.0;  // mean of y, continuous responses only
  bool standardized = false;
  std::vector<std::string> names;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index d() const { return X.cols(); }
  Eigen::Index p() const { return 2 * d() + 1; }

  /// [t X W], n x (2d+1). Built by assemble_design / transform_like.
  const Eigen::MatrixXd& model_matrix() const { return mm; }
  /// Recomputes W and the cached model matrix from t and X. Needed after
  /// mutating the blocks in place (e.g. masking columns for a restricted fit).
  void rebuild();

  Eigen::MatrixXd mm;
};

/// Centers covariate columns (and scales them to unit sample variance when
/// `standardize` is set), records the mean of a continuous response, and
/// assembles the model matrix. Zero-variance columns are rejected by name.
Design assemble_design(const Dataset& dataset, bool standardize = true);

/// Applies the transforms stored in `fitted` to new rows; nothing is
/// re-estimated, so predictions are on the training scale.
Design transform_like(const Design& fitted, const Dataset& newdata);

/// Rebuilds a prediction design from stored transforms (as serialized in a
/// fit artifact) without access to the original Design object.
Design design_from_transforms(const Dataset& newdata, const Eigen::VectorXd& center,
                              const Eigen::VectorXd& scale, double response_center,
                              bool standardized);

/// psi_i = tau t_i + beta'x_i + gamma'w_i for one class block.
Eigen::VectorXd linear_predictor(const Design& design, const Coefficients& coef,
                                 int class_index = 0);

}  // namespace smog
