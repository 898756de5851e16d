#include "smog/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smog {

namespace {

void check_dim(const Loss& loss, const Eigen::VectorXd& theta) {
  if (theta.size() != loss.dim())
    throw std::invalid_argument("coefficient vector length does not match the loss dimension");
}

}  // namespace

// ---------------------------------------------------------------------------
// Gaussian

GaussianLoss::GaussianLoss(const Design& design, const Eigen::VectorXd& y)
    : design_(&design) {
  if (y.size() != design.n())
    throw std::invalid_argument("response length does not match design rows");
  yc_ = y.array() - design.response_center;
}

Eigen::Index GaussianLoss::dim() const { return design_->p(); }
Eigen::Index GaussianLoss::n() const { return design_->n(); }

double GaussianLoss::value(const Eigen::VectorXd& theta) const {
  check_dim(*this, theta);
  return 0.5 * (yc_ - design_->model_matrix() * theta).squaredNorm();
}

LossEvaluation GaussianLoss::eval(const Eigen::VectorXd& theta) const {
  check_dim(*this, theta);
  const Eigen::VectorXd resid = yc_ - design_->model_matrix() * theta;
  LossEvaluation out;
  out.value = 0.5 * resid.squaredNorm();
  out.gradient = -design_->model_matrix().transpose() * resid;
  return out;
}

// ---------------------------------------------------------------------------
// Multinomial

MultinomialLoss::MultinomialLoss(const Design& design, const std::vector<int>& labels,
                                 int n_classes)
    : design_(&design), labels_(labels), n_classes_(n_classes) {
  if (static_cast<Eigen::Index>(labels.size()) != design.n())
    throw std::invalid_argument("label count does not match design rows");
  if (n_classes < 2) throw std::invalid_argument("multinomial needs at least 2 classes");
  indicator_ = Eigen::MatrixXd::Zero(design.n(), n_classes_ - 1);
  label_counts_ = Eigen::VectorXd::Zero(n_classes_ - 1);
  for (Eigen::Index i = 0; i < design.n(); ++i) {
    const int l = labels_[i];
    if (l < 1 || l > n_classes_)
      throw std::invalid_argument("label " + std::to_string(l) + " outside 1.." +
                                  std::to_string(n_classes_));
    if (l < n_classes_) {
      indicator_(i, l - 1) = 1.0;
      label_counts_[l - 1] += 1.0;
    }
  }
}

Eigen::Index MultinomialLoss::dim() const { return (n_classes_ - 1) * design_->p(); }
Eigen::Index MultinomialLoss::n() const { return design_->n(); }

double MultinomialLoss::value(const Eigen::VectorXd& theta) const {
  check_dim(*this, theta);
  const Eigen::Index m = classes();
  const Eigen::Index p = design_->p();
  const Eigen::Index nn = design_->n();
  Eigen::MatrixXd psi(nn, m);
  for (Eigen::Index k = 0; k < m; ++k)
    psi.col(k) = design_->model_matrix() * theta.segment(k * p, p);
  double total = 0.0;
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double a = std::max(0.0, psi.row(i).maxCoeff());
    double acc = std::exp(-a);
    for (Eigen::Index k = 0; k < m; ++k) acc += std::exp(psi(i, k) - a);
    total += a + std::log(acc);
  }
  total -= indicator_.cwiseProduct(psi).sum();
  return total;
}

LossEvaluation MultinomialLoss::eval(const Eigen::VectorXd& theta) const {
  check_dim(*this, theta);
  const Eigen::Index m = classes();
  const Eigen::Index p = design_->p();
  const Eigen::Index nn = design_->n();
  Eigen::MatrixXd psi(nn, m);
  for (Eigen::Index k = 0; k < m; ++k)
    psi.col(k) = design_->model_matrix() * theta.segment(k * p, p);

  LossEvaluation out;
  out.gradient.resize(dim());
  Eigen::MatrixXd prob(nn, m);
  double total = 0.0;
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double a = std::max(0.0, psi.row(i).maxCoeff());
    double acc = std::exp(-a);
    for (Eigen::Index k = 0; k < m; ++k) acc += std::exp(psi(i, k) - a);
    const double lse = a + std::log(acc);
    total += lse;
    for (Eigen::Index k = 0; k < m; ++k) prob(i, k) = std::exp(psi(i, k) - lse);
  }
  total -= indicator_.cwiseProduct(psi).sum();
  out.value = total;
  for (Eigen::Index k = 0; k < m; ++k)
    out.gradient.segment(k * p, p) =
        design_->model_matrix().transpose() * (prob.col(k) - indicator_.col(k));
  return out;
}

// ---------------------------------------------------------------------------
// Cox

CoxLoss::CoxLoss(const Design& design, const Eigen::VectorXd& time,
                 const Eigen::VectorXi& status)
    : design_(&design), time_(time), status_(status) {
  if (time.size() != design.n() || status.size() != design.n())
    throw std::invalid_argument("survival data length does not match design rows");
  if ((time.array() <= 0.0).any())
    throw std::invalid_argument("survival times must be strictly positive");
  if (status.sum() == 0)
    throw std::invalid_argument("all observations censored; the partial likelihood is undefined");
  order_.resize(design.n());
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](int a, int b) { return time_[a] > time_[b]; });
}

Eigen::Index CoxLoss::dim() const { return design_->p(); }
Eigen::Index CoxLoss::n() const { return design_->n(); }

double CoxLoss::compute(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
  check_dim(*this, theta);
  const Eigen::MatrixXd& M = design_->model_matrix();
  const Eigen::Index nn = design_->n();
  const Eigen::Index p = dim();
  const Eigen::VectorXd psi = M * theta;
  if (!psi.allFinite())
    throw std::runtime_error("non-finite linear predictor in the partial likelihood; "
                             "consider standardizing the covariates");
  // The partial likelihood is invariant to a common shift of psi, so the
  // risk sums are computed with exp(psi - max) and the shift restored on the
  // log terms afterwards.
  const double shift = psi.maxCoeff();
  const Eigen::VectorXd phi = (psi.array() - shift).exp();

  double value = 0.0;
  double risk_sum = 0.0;
  Eigen::VectorXd risk_x;
  if (grad) {
    grad->setZero(p);
    risk_x = Eigen::VectorXd::Zero(p);
  }

  int total_events = 0;
  std::size_t idx = 0;
  while (idx < order_.size()) {
    const double t = time_[order_[idx]];
    // everyone with time == t enters the risk set before terms at t
    std::size_t end = idx;
    double tie_sum = 0.0;
    double tie_psi = 0.0;
    int ties = 0;
    Eigen::VectorXd tie_x = grad ? Eigen::VectorXd::Zero(p) : Eigen::VectorXd();
    Eigen::VectorXd event_x = grad ? Eigen::VectorXd::Zero(p) : Eigen::VectorXd();
    while (end < order_.size() && time_[order_[end]] == t) {
      const int subject = order_[end];
      risk_sum += phi[subject];
      if (grad) risk_x += phi[subject] * M.row(subject).transpose();
      if (status_[subject] == 1) {
        ++ties;
        tie_sum += phi[subject];
        tie_psi += psi[subject];
        if (grad) {
          tie_x += phi[subject] * M.row(subject).transpose();
          event_x += M.row(subject).transpose();
        }
      }
      ++end;
    }
    if (ties > 0) {
      for (int l = 0; l < ties; ++l) {
        const double c = double(l) / double(ties);
        const double denom = risk_sum - c * tie_sum;
        if (!(denom > 0.0) || !std::isfinite(denom))
          throw std::runtime_error("degenerate risk set in the partial likelihood; "
                                   "consider standardizing the covariates");
        value += std::log(denom);
        if (grad) *grad += (risk_x - c * tie_x) / denom;
      }
      value -= tie_psi;
      if (grad) *grad -= event_x;
      total_events += ties;
    }
    idx = end;
  }
  value += shift * total_events;
  (void)nn;
  return value;
}

double CoxLoss::value(const Eigen::VectorXd& theta) const { return compute(theta, nullptr); }

LossEvaluation CoxLoss::eval(const Eigen::VectorXd& theta) const {
  LossEvaluation out;
  out.value = compute(theta, &out.gradient);
  return out;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Loss> make_loss(const Design& design, const ResponseData& response) {
  switch (response.kind) {
    case ResponseKind::gaussian:
      return std::make_unique<GaussianLoss>(design, response.y);
    case ResponseKind::multinomial:
      return std::make_unique<MultinomialLoss>(design, response.labels, response.n_classes);
    case ResponseKind::cox:
      return std::make_unique<CoxLoss>(design, response.time, response.status);
  }
  throw std::invalid_argument("unknown response kind");
}

LossEvaluation gaussian_loss(const Design& design, const Eigen::VectorXd& y,
                             const Coefficients& coef) {
  return GaussianLoss(design, y).eval(coef.to_flat());
}

LossEvaluation multinomial_loss(const Design& design, const std::vector<int>& labels,
                                int n_classes, const Coefficients& coef) {
  return MultinomialLoss(design, labels, n_classes).eval(coef.to_flat());
}

LossEvaluation cox_loss(const Design& design, const Eigen::VectorXd& time,
                        const Eigen::VectorXi& status, const Coefficients& coef) {
  return CoxLoss(design, time, status).eval(coef.to_flat());
}

}  // namespace smog
