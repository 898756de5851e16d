#include "smog/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "smog/design.hpp"
#include "smog/loss.hpp"

namespace smog {

Eigen::VectorXd treatment_contrast(const Coefficients& coef, const Eigen::MatrixXd& X,
                                   int class_index) {
  if (X.cols() != coef.d())
    throw std::invalid_argument("covariate count does not match coefficients");
  if (class_index < 0 || class_index >= coef.classes())
    throw std::invalid_argument("class index out of range");
  return X * coef.gamma.col(class_index);
}

std::vector<SubgroupLabel> dichotomize(const Eigen::VectorXd& z, double threshold) {
  std::vector<SubgroupLabel> labels(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    labels[i] = z[i] < threshold ? SubgroupLabel::positive : SubgroupLabel::negative;
  return labels;
}

FitResult relaxed_refit(const Dataset& data, const SupportSets& support,
                        const SolverOptions& opts, bool standardize, double rho) {
  if (support.beta.empty())
    throw std::invalid_argument("relaxed refit needs a nonempty support");
  const std::set<int> beta_set(support.beta.begin(), support.beta.end());
  const std::set<int> gamma_set(support.gamma.begin(), support.gamma.end());
  for (int j : beta_set)
    if (j < 0 || j >= data.d())
      throw std::invalid_argument("support index out of range");
  for (int j : gamma_set)
    if (!beta_set.count(j))
      throw std::invalid_argument("invalid hierarchy support: gamma index " +
                                  std::to_string(j) + " lacks its beta index");

  Design design = assemble_design(data, standardize);
  const Eigen::Index d = design.d();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!beta_set.count(int(j))) design.X.col(j).setZero();
  }
  design.W = design.X.array().colwise() * design.t.array();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!gamma_set.count(int(j))) design.W.col(j).setZero();
  }
  design.mm.col(0) = design.t;
  design.mm.middleCols(1, d) = design.X;
  design.mm.middleCols(1 + d, d) = design.W;

  const auto loss = make_loss(design, data.response);
  const PenaltyParams penalty{1e-6, 0.0, 1e-6, rho};
  FitResult out = fit(*loss, d, penalty, opts);
  // transforms of the unmasked design; masked coefficients are exactly zero
  out.center = design.center;
  out.scale = design.scale;
  out.response_center = design.response_center;
  out.standardized = design.standardized;
  out.response = data.response.kind;
  return out;
}

namespace {

struct CoxEstimate {
  double coef = 0.0;
  double se = 0.0;
};

/// Unpenalized Newton fit of a single-covariate Cox model (Efron ties),
/// reusing the partial-likelihood kernel through a covariate-only design.
std::optional<CoxEstimate> cox_univariate(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& time,
                                          const Eigen::VectorXi& status) {
  if (x.size() < 2 || status.sum() == 0) return std::nullopt;
  if (x.maxCoeff() == x.minCoeff()) return std::nullopt;
  Design design;
  design.t = x;
  design.X.resize(x.size(), 0);
  design.W.resize(x.size(), 0);
  design.rebuild();
  const CoxLoss loss(design, time, status);

  const auto hessian_at = [&](double b) {
    const double h = 1e-4 * std::max(1.0, std::abs(b));
    Eigen::VectorXd hi(1), lo(1);
    hi[0] = b + h;
    lo[0] = b - h;
    return (loss.eval(hi).gradient[0] - loss.eval(lo).gradient[0]) / (2.0 * h);
  };

  double b = 0.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd tb(1);
    tb[0] = b;
    const double g = loss.eval(tb).gradient[0];
    if (std::abs(g) < 1e-9 * std::max(1.0, double(status.sum()))) break;
    const double h = hessian_at(b);
    if (!(h > 1e-12)) return std::nullopt;
    b -= std::clamp(g / h, -1.0, 1.0);
    if (std::abs(b) > 50.0) return std::nullopt;  // monotone likelihood
  }
  const double h = hessian_at(b);
  if (!(h > 1e-12)) return std::nullopt;
  return CoxEstimate{b, 1.0 / std::sqrt(h)};
}

GroupSummary summarize_group(const Dataset& data, const std::vector<int>& rows) {
  GroupSummary out;
  out.n = int(rows.size());
  if (data.response.kind != ResponseKind::cox || rows.empty()) return out;

  Eigen::VectorXd time(rows.size());
  Eigen::VectorXi status(rows.size());
  Eigen::VectorXd treat01(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    time[i] = data.response.time[rows[i]];
    status[i] = data.response.status[rows[i]];
    treat01[i] = (data.treatment[rows[i]] + 1.0) / 2.0;
    out.events += status[i];
  }
  if (const auto est = cox_univariate(treat01, time, status)) {
    out.hazard_ratio = std::exp(est->coef);
    out.ci_low = std::exp(est->coef - 1.96 * est->se);
    out.ci_high = std::exp(est->coef + 1.96 * est->se);
  }
  return out;
}

}  // namespace

SubgroupSummary subgroup_summary(const Dataset& data,
                                 const std::vector<SubgroupLabel>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != data.n())
    throw std::invalid_argument("label count does not match observations");
  std::vector<int> pos, neg;
  for (int i = 0; i < int(labels.size()); ++i)
    (labels[i] == SubgroupLabel::positive ? pos : neg).push_back(i);
  SubgroupSummary out;
  out.positive = summarize_group(data, pos);
  out.negative = summarize_group(data, neg);
  return out;
}

std::vector<KMRow> km_table(const Dataset& data, const std::vector<SubgroupLabel>& labels) {
  if (data.response.kind != ResponseKind::cox)
    throw std::invalid_argument("Kaplan-Meier table needs a survival response");
  if (static_cast<Eigen::Index>(labels.size()) != data.n())
    throw std::invalid_argument("label count does not match observations");

  std::vector<KMRow> rows;
  for (SubgroupLabel group : {SubgroupLabel::positive, SubgroupLabel::negative}) {
    std::vector<std::pair<double, int>> obs;  // (time, status)
    for (int i = 0; i < int(labels.size()); ++i)
      if (labels[i] == group)
        obs.emplace_back(data.response.time[i], data.response.status[i]);
    std::sort(obs.begin(), obs.end());
    double survival = 1.0;
    std::size_t idx = 0;
    while (idx < obs.size()) {
      const double t = obs[idx].first;
      const int at_risk = int(obs.size() - idx);
      int events = 0;
      while (idx < obs.size() && obs[idx].first == t) {
        events += obs[idx].second;
        ++idx;
      }
      if (events > 0) {
        survival *= 1.0 - double(events) / at_risk;
        rows.push_back({group, t, at_risk, events, survival});
      }
    }
  }
  return rows;
}

}  // namespace smog
