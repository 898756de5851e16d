#pragma once

#include <optional>
#include <vector>

#include "smog/solver.hpp"

namespace smog {

/// Individual treatment contrast z_i = sum_j X(i,j) * gamma_j for one class
/// block. X must be on the fit's standardized scale.
Eigen::VectorXd treatment_contrast(const Coefficients& coef, const Eigen::MatrixXd& X,
                                   int class_index = 0);

enum class SubgroupLabel { positive, negative };

/// Biomarker-positive where z < threshold, biomarker-negative where
/// z > threshold; the boundary z == threshold goes to the negative group.
std::vector<SubgroupLabel> dichotomize(const Eigen::VectorXd& z, double threshold = 0.0);

struct SupportSets {
  std::vector<int> beta;   // zero-based covariate indices
  std::vector<int> gamma;  // must be a subset of beta
};

/// Refit on the selected support with lambda1 = lambda3 = 1e-6, lambda2 = 0;
/// coefficients outside the support stay exactly zero (their columns are
/// masked out of the model matrix).
FitResult relaxed_refit(const Dataset& data, const SupportSets& support,
                        const SolverOptions& opts = {}, bool standardize = true,
                        double rho = 1.0);

struct GroupSummary {
  int n = 0;
  int events = 0;  // survival responses only
  std::optional<double> hazard_ratio;  // treatment vs control within the group
  std::optional<double> ci_low;        // 95% Wald interval
  std::optional<double> ci_high;
};

struct SubgroupSummary {
  GroupSummary positive;
  GroupSummary negative;
};

/// Per-group treatment summary. For survival data each group gets an
/// unpenalized single-covariate Cox fit of the treatment (0/1 coding) with a
/// Wald confidence interval; degenerate groups report no estimate.
SubgroupSummary subgroup_summary(const Dataset& data,
                                 const std::vector<SubgroupLabel>& labels);

struct KMRow {
  SubgroupLabel group;
  double time = 0.0;
  int at_risk = 0;
  int events = 0;
  double survival = 1.0;
};

/// Kaplan-Meier table per subgroup (rows at event times only).
std::vector<KMRow> km_table(const Dataset& data, const std::vector<SubgroupLabel>& labels);

}  // namespace smog
