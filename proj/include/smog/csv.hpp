#pragma once

#include <string>
#include <vector>

#include "smog/types.hpp"

namespace smog {

/// Reads a dataset from CSV. Columns are located by header name: the response
/// block is `y` (gaussian values or multinomial labels) or `time`,`status`
/// (cox), the treatment column is `treatment`, and every remaining column is a
/// covariate. Missing cells and non-numeric values are rejected with the row
/// and column named.
Dataset read_dataset_csv(const std::string& path, ResponseKind kind);

/// Predictor-only table (treatment + covariates) for prediction pipelines;
/// response columns, when present, are ignored.
struct PredictorTable {
  Eigen::VectorXd treatment;
  Eigen::MatrixXd covariates;
  std::vector<std::string> names;
  bool treatment_remapped = false;
};

PredictorTable read_predictors_csv(const std::string& path);

}  // namespace smog
