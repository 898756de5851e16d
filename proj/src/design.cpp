#include "smog/design.hpp"

#include <cmath>
#include <stdexcept>

namespace smog {

void Design::rebuild() {
  W = X.array().colwise() * t.array();
  mm.resize(n(), p());
  mm.col(0) = t;
  mm.middleCols(1, d()) = X;
  mm.middleCols(1 + d(), d()) = W;
}

Design assemble_design(const Dataset& dataset, bool standardize) {
  dataset.validate();
  const Eigen::Index n = dataset.n();
  const Eigen::Index d = dataset.d();

  Design design;
  design.t = dataset.treatment;
  design.names = dataset.names;
  design.standardized = standardize;
  design.center = dataset.covariates.colwise().mean();
  design.X = dataset.covariates.rowwise() - design.center.transpose();
  design.scale = Eigen::VectorXd::Ones(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double sd = std::sqrt(design.X.col(j).squaredNorm() / double(n - 1));
    if (sd < 1e-12)
      throw std::invalid_argument("covariate column '" + dataset.names[j] +
                                  "' has zero variance");
    if (standardize) {
      design.scale[j] = sd;
      design.X.col(j) /= sd;
    }
  }
  if (dataset.response.kind == ResponseKind::gaussian)
    design.response_center = dataset.response.y.mean();
  design.rebuild();
  return design;
}

Design transform_like(const Design& fitted, const Dataset& newdata) {
  return design_from_transforms(newdata, fitted.center, fitted.scale,
                                fitted.response_center, fitted.standardized);
}

Design design_from_transforms(const Dataset& newdata, const Eigen::VectorXd& center,
                              const Eigen::VectorXd& scale, double response_center,
                              bool standardized) {
  if (newdata.d() != center.size())
    throw std::invalid_argument("new data covariate count does not match the fitted design");
  Design design;
  design.t = newdata.treatment;
  design.names = newdata.names;
  design.center = center;
  design.scale = scale;
  design.response_center = response_center;
  design.standardized = standardized;
  design.X = newdata.covariates.rowwise() - center.transpose();
  for (Eigen::Index j = 0; j < design.X.cols(); ++j) design.X.col(j) /= scale[j];
  design.rebuild();
  return design;
}

Eigen::VectorXd linear_predictor(const Design& design, const Coefficients& coef,
                                 int class_index) {
  if (coef.d() != design.d())
    throw std::invalid_argument("coefficient dimension does not match design");
  if (class_index < 0 || class_index >= coef.classes())
    throw std::invalid_argument("class index out of range");
  return coef.tau[class_index] * design.t + design.X * coef.beta.col(class_index) +
         design.W * coef.gamma.col(class_index);
}

}  // namespace smog
