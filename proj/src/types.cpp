#include "smog/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace smog {

std::string to_string(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::gaussian: return "gaussian";
    case ResponseKind::multinomial: return "multinomial";
    case ResponseKind::cox: return "cox";
  }
  return "unknown";
}

ResponseKind response_kind_from_string(const std::string& name) {
  if (name == "gaussian") return ResponseKind::gaussian;
  if (name == "multinomial") return ResponseKind::multinomial;
  if (name == "cox") return ResponseKind::cox;
  throw std::invalid_argument("unknown response kind: " + name);
}

ResponseData ResponseData::continuous(Eigen::VectorXd y) {
  ResponseData r;
  r.kind = ResponseKind::gaussian;
  r.y = std::move(y);
  return r;
}

ResponseData ResponseData::categorical(std::vector<int> labels, int n_classes) {
  ResponseData r;
  r.kind = ResponseKind::multinomial;
  r.labels = std::move(labels);
  r.n_classes = n_classes;
  return r;
}

ResponseData ResponseData::survival(Eigen::VectorXd time, Eigen::VectorXi status) {
  ResponseData r;
  r.kind = ResponseKind::cox;
  r.time = std::move(time);
  r.status = std::move(status);
  return r;
}

Eigen::Index ResponseData::size() const {
  switch (kind) {
    case ResponseKind::gaussian: return y.size();
    case ResponseKind::multinomial: return static_cast<Eigen::Index>(labels.size());
    case ResponseKind::cox: return time.size();
  }
  return 0;
}

int ResponseData::coefficient_classes() const {
  return kind == ResponseKind::multinomial ? n_classes - 1 : 1;
}

ResponseData ResponseData::subset(const std::vector<int>& rows) const {
  ResponseData out;
  out.kind = kind;
  out.n_classes = n_classes;
  const auto m = static_cast<Eigen::Index>(rows.size());
  switch (kind) {
    case ResponseKind::gaussian:
      out.y.resize(m);
      for (Eigen::Index i = 0; i < m; ++i) out.y[i] = y[rows[i]];
      break;
    case ResponseKind::multinomial:
      out.labels.reserve(rows.size());
      for (int r : rows) out.labels.push_back(labels[r]);
      break;
    case ResponseKind::cox:
      out.time.resize(m);
      out.status.resize(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        out.time[i] = time[rows[i]];
        out.status[i] = status[rows[i]];
      }
      break;
  }
  return out;
}

void ResponseData::validate() const {
  switch (kind) {
    case ResponseKind::gaussian:
      if (y.size() == 0) throw std::invalid_argument("continuous response is empty");
      if (!y.allFinite()) throw std::invalid_argument("continuous response has missing or non-finite values");
      break;
    case ResponseKind::multinomial: {
      if (labels.empty()) throw std::invalid_argument("categorical response is empty");
      if (n_classes < 2) throw std::invalid_argument("categorical response needs at least 2 classes");
      for (int l : labels) {
        if (l < 1 || l > n_classes)
          throw std::invalid_argument("categorical label " + std::to_string(l) +
                                      " outside 1.." + std::to_string(n_classes));
      }
      break;
    }
    case ResponseKind::cox: {
      if (time.size() == 0) throw std::invalid_argument("survival response is empty");
      if (time.size() != status.size())
        throw std::invalid_argument("survival time and status lengths differ");
      if (!time.allFinite() || (time.array() <= 0.0).any())
        throw std::invalid_argument("survival times must be strictly positive");
      bool any_event = false;
      for (Eigen::Index i = 0; i < status.size(); ++i) {
        if (status[i] != 0 && status[i] != 1)
          throw std::invalid_argument("survival status must be 0 or 1");
        any_event |= status[i] == 1;
      }
      if (!any_event)
        throw std::invalid_argument("survival response has no events (all observations censored)");
      break;
    }
  }
}

Dataset Dataset::make(ResponseData response, Eigen::VectorXd treatment,
                      Eigen::MatrixXd covariates, std::vector<std::string> names) {
  Dataset ds;
  ds.response = std::move(response);
  ds.treatment = std::move(treatment);
  ds.covariates = std::move(covariates);
  ds.names = std::move(names);

  // Accept {0,1} coding: remap 0 -> -1 and flag it for the caller to warn.
  bool zero_one = false;
  for (Eigen::Index i = 0; i < ds.treatment.size(); ++i) {
    if (ds.treatment[i] == 0.0) zero_one = true;
  }
  if (zero_one) {
    for (Eigen::Index i = 0; i < ds.treatment.size(); ++i) {
      if (ds.treatment[i] == 0.0) ds.treatment[i] = -1.0;
      else if (ds.treatment[i] != 1.0)
        throw std::invalid_argument("treatment mixes {0,1} and other codes");
    }
    ds.treatment_remapped = true;
  }

  if (ds.names.empty()) {
    ds.names.reserve(ds.covariates.cols());
    for (Eigen::Index j = 0; j < ds.covariates.cols(); ++j)
      ds.names.push_back("x" + std::to_string(j + 1));
  }
  ds.validate();
  return ds;
}

Dataset Dataset::subset(const std::vector<int>& rows) const {
  Dataset out;
  out.response = response.subset(rows);
  const auto m = static_cast<Eigen::Index>(rows.size());
  out.treatment.resize(m);
  out.covariates.resize(m, covariates.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    out.treatment[i] = treatment[rows[i]];
    out.covariates.row(i) = covariates.row(rows[i]);
  }
  out.names = names;
  out.treatment_remapped = treatment_remapped;
  return out;
}

void Dataset::validate() const {
  const Eigen::Index nn = covariates.rows();
  const Eigen::Index dd = covariates.cols();
  if (nn < 2) throw std::invalid_argument("dataset needs at least 2 observations");
  if (dd < 1) throw std::invalid_argument("dataset needs at least 1 covariate");
  if (treatment.size() != nn)
    throw std::invalid_argument("treatment length does not match covariate rows");
  if (response.size() != nn)
    throw std::invalid_argument("response length does not match covariate rows");
  if (!covariates.allFinite())
    throw std::invalid_argument("covariates contain missing or non-finite values");
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (treatment[i] != 1.0 && treatment[i] != -1.0)
      throw std::invalid_argument("treatment entries must be -1 or +1");
  }
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != dd)
    throw std::invalid_argument("covariate name count does not match columns");
  response.validate();
}

void PenaltyParams::validate() const {
  if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0)
    throw std::invalid_argument("penalty weights must be nonnegative");
  if (!(rho > 0))
    throw std::invalid_argument("rho must be strictly positive");
}

Coefficients Coefficients::zero(Eigen::Index d, Eigen::Index m) {
  Coefficients c;
  c.tau = Eigen::VectorXd::Zero(m);
  c.beta = Eigen::MatrixXd::Zero(d, m);
  c.gamma = Eigen::MatrixXd::Zero(d, m);
  return c;
}

Coefficients Coefficients::from_flat(const Eigen::VectorXd& flat, Eigen::Index d,
                                     Eigen::Index m) {
  if (flat.size() != m * (2 * d + 1))
    throw std::invalid_argument("flat coefficient length does not match (2d+1)*classes");
  Coefficients c = zero(d, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index base = k * (2 * d + 1);
    c.tau[k] = flat[base];
    c.beta.col(k) = flat.segment(base + 1, d);
    c.gamma.col(k) = flat.segment(base + 1 + d, d);
  }
  return c;
}

Eigen::VectorXd Coefficients::to_flat() const {
  const Eigen::Index dd = d();
  const Eigen::Index m = classes();
  Eigen::VectorXd flat(m * (2 * dd + 1));
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index base = k * (2 * dd + 1);
    flat[base] = tau[k];
    flat.segment(base + 1, dd) = beta.col(k);
    flat.segment(base + 1 + dd, dd) = gamma.col(k);
  }
  return flat;
}

bool hierarchy_satisfied(const Coefficients& coef) {
  for (Eigen::Index k = 0; k < coef.classes(); ++k) {
    for (Eigen::Index j = 0; j < coef.d(); ++j) {
      if (coef.gamma(j, k) != 0.0 && coef.beta(j, k) == 0.0) return false;
    }
  }
  return true;
}

}  // namespace smog
