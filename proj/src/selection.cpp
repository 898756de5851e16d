#include "smog/selection.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

#include "smog/design.hpp"
#include "smog/loss.hpp"
#include "smog/rng.hpp"

namespace smog {

std::string to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::cv_mse: return "cv";
    case CriterionKind::gcv: return "gcv";
    case CriterionKind::aic: return "aic";
    case CriterionKind::bic: return "bic";
    case CriterionKind::caic: return "caic";
  }
  return "unknown";
}

CriterionKind criterion_from_string(const std::string& name) {
  if (name == "cv" || name == "cv_mse" || name == "mse") return CriterionKind::cv_mse;
  if (name == "gcv") return CriterionKind::gcv;
  if (name == "aic") return CriterionKind::aic;
  if (name == "bic") return CriterionKind::bic;
  if (name == "caic") return CriterionKind::caic;
  throw std::invalid_argument("unknown criterion: " + name);
}

std::vector<int> cv_folds(Eigen::Index n, int K, std::uint64_t seed) {
  if (K < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (n < K) throw std::invalid_argument("fewer observations than folds");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> fold(n);
  for (Eigen::Index i = 0; i < n; ++i) fold[perm[i]] = int(i % K);
  return fold;
}

std::vector<int> cv_folds(const Dataset& data, int K, std::uint64_t seed) {
  if (data.response.kind != ResponseKind::cox) return cv_folds(data.n(), K, seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, 1000 + attempt);
    auto fold = cv_folds(data.n(), K, s);
    std::vector<int> events(K, 0);
    for (Eigen::Index i = 0; i < data.n(); ++i)
      if (data.response.status[i] == 1) ++events[fold[i]];
    if (*std::min_element(events.begin(), events.end()) > 0) return fold;
  }
  throw std::runtime_error("could not assign survival folds with an event in every fold");
}

// ---------------------------------------------------------------------------
// fold machinery

namespace {

struct FoldProblem {
  Dataset train;
  Dataset heldout;
  std::unique_ptr<Design> design;
  std::unique_ptr<Loss> loss;
  std::unique_ptr<Design> heldout_design;
  std::unique_ptr<Loss> heldout_loss;  // non-gaussian responses only
};

FoldProblem make_fold_problem(const Dataset& data, const std::vector<int>& fold, int k,
                              bool standardize) {
  std::vector<int> train_rows, heldout_rows;
  for (int i = 0; i < int(fold.size()); ++i)
    (fold[i] == k ? heldout_rows : train_rows).push_back(i);
  FoldProblem fp;
  fp.train = data.subset(train_rows);
  fp.heldout = data.subset(heldout_rows);
  fp.design = std::make_unique<Design>(assemble_design(fp.train, standardize));
  fp.loss = make_loss(*fp.design, fp.train.response);
  fp.heldout_design = std::make_unique<Design>(transform_like(*fp.design, fp.heldout));
  if (data.response.kind != ResponseKind::gaussian)
    fp.heldout_loss = make_loss(*fp.heldout_design, fp.heldout.response);
  return fp;
}

double heldout_metric(const FoldProblem& fp, const Eigen::VectorXd& z) {
  if (fp.train.response.kind == ResponseKind::gaussian) {
    const Eigen::VectorXd yhat =
        (fp.heldout_design->model_matrix() * z).array() + fp.design->response_center;
    return (fp.heldout.response.y - yhat).squaredNorm();
  }
  return fp.heldout_loss->value(z);
}

/// Minimizes the loss over the tau coordinates only (backtracking gradient
/// steps); used to anchor the pathway search at the null model.
Eigen::VectorXd tau_only_fit(const Loss& loss, Eigen::Index d, Eigen::Index m) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(loss.dim());
  const Eigen::Index block = 2 * d + 1;
  double L = 1.0;
  for (int it = 0; it < 500; ++it) {
    const LossEvaluation at = loss.eval(theta);
    double grad_sq = 0.0, grad_max = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double g = at.gradient[k * block];
      grad_sq += g * g;
      grad_max = std::max(grad_max, std::abs(g));
    }
    if (grad_max <= 1e-9 * std::max(1.0, std::abs(at.value))) break;
    for (;;) {
      Eigen::VectorXd cand = theta;
      for (Eigen::Index k = 0; k < m; ++k) cand[k * block] -= at.gradient[k * block] / L;
      if (loss.value(cand) <= at.value - 0.5 * grad_sq / L) {
        theta = std::move(cand);
        L = std::max(1.0, L / 2.0);
        break;
      }
      L *= 2.0;
      if (L > 1e30) return theta;
    }
  }
  return theta;
}

/// theta = z = the treatment-only fit with u = -grad/rho is a fixed point of
/// the iteration whenever lambda1 kills every group, which makes the first
/// path fit converge immediately.
ADMMState null_anchor(const Loss& loss, Eigen::Index d, double rho) {
  ADMMState st;
  st.theta = tau_only_fit(loss, d, loss.classes());
  st.z = st.theta;
  st.u = -loss.eval(st.theta).gradient / rho;
  st.L = 1.0;
  return st;
}

double lambda_bound(const Loss& loss, Eigen::Index d, const Eigen::VectorXd& tau_point) {
  const Eigen::VectorXd grad = loss.eval(tau_point).gradient;
  const Eigen::Index block = 2 * d + 1;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < loss.classes(); ++k)
    for (Eigen::Index j = 0; j < d; ++j)
      worst = std::max(worst, std::hypot(grad[k * block + 1 + j], grad[k * block + 1 + d + j]));
  return 1.1 * worst;
}

double criterion_from_fit(CriterionKind kind, const FitResult& fr, const Design& design,
                          const ResponseData& response, const PenaltyParams& penalty,
                          double loss_value) {
  const double n = double(design.n());
  const bool gaussian = response.kind == ResponseKind::gaussian;
  // rss = 2 f(z) for the gaussian loss; 2 x negative log-likelihood otherwise
  const double deviance = 2.0 * loss_value;
  switch (kind) {
    case CriterionKind::gcv: {
      const double df = effective_df(fr, design, penalty);
      if (df >= n) throw std::runtime_error("saturated model: degrees of freedom reach n");
      return deviance / (n * (1.0 - df / n) * (1.0 - df / n));
    }
    case CriterionKind::aic: {
      const double df = effective_df(fr, design, penalty);
      if (gaussian) {
        if (!(deviance > 0.0)) throw std::runtime_error("zero residual sum of squares");
        return std::log(deviance / n) + 2.0 * df / n;
      }
      return deviance / n + 2.0 * df / n;
    }
    case CriterionKind::bic: {
      const double df = effective_df(fr, design, penalty);
      if (gaussian) {
        if (!(deviance > 0.0)) throw std::runtime_error("zero residual sum of squares");
        return std::log(deviance / n) + std::log(n) * df / n;
      }
      return deviance / n + std::log(n) * df / n;
    }
    case CriterionKind::caic: {
      const double k = double(active_count_df(fr));
      const double corr_denom = 1.0 - (k + 2.0) / n;
      if (!(corr_denom > 0.0)) throw std::runtime_error("saturated model for cAIC");
      const double corr = 0.5 * n * (1.0 + k / n) / corr_denom;
      if (gaussian) {
        if (!(deviance > 0.0)) throw std::runtime_error("zero residual sum of squares");
        return 0.5 * n * std::log(deviance) + corr;
      }
      return loss_value + corr;
    }
    case CriterionKind::cv_mse:
      throw std::logic_error("cv criterion is not a single-fit formula");
  }
  throw std::logic_error("unknown criterion");
}

}  // namespace

double cv_mse(const Dataset& data, const PenaltyParams& penalty, int K,
              std::uint64_t seed, const SolverOptions& opts, bool standardize) {
  const auto fold = cv_folds(data, K, seed);
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    FoldProblem fp = make_fold_problem(data, fold, k, standardize);
    const FitResult fr = fit(*fp.loss, fp.design->d(), penalty, opts);
    total += heldout_metric(fp, fr.z);
  }
  return total / double(K);
}

double effective_df(const FitResult& fit, const Design& design,
                    const PenaltyParams& penalty) {
  const Eigen::MatrixXd& M = design.model_matrix();
  const Eigen::Index d = design.d();
  double total = 0.0;
  for (Eigen::Index k = 0; k < fit.m; ++k) {
    std::vector<Eigen::Index> cols{0};  // treatment column, unpenalized
    std::vector<double> weights{0.0};
    for (Eigen::Index j = 0; j < d; ++j) {
      const double b = fit.coefficients.beta(j, k);
      const double g = fit.coefficients.gamma(j, k);
      if (b == 0.0 && g == 0.0) continue;
      const double nrm = std::hypot(b, g);
      if (b != 0.0) {
        cols.push_back(1 + j);
        weights.push_back(penalty.lambda1 / nrm + 2.0 * penalty.lambda2);
      }
      if (g != 0.0) {
        cols.push_back(1 + d + j);
        weights.push_back(penalty.lambda1 / nrm + 2.0 * penalty.lambda2 +
                          penalty.lambda3 / std::abs(g));
      }
    }
    const Eigen::Index a = Eigen::Index(cols.size());
    Eigen::MatrixXd active(design.n(), a);
    for (Eigen::Index c = 0; c < a; ++c) active.col(c) = M.col(cols[c]);
    const Eigen::MatrixXd gram = active.transpose() * active;
    Eigen::MatrixXd reg = gram;
    for (Eigen::Index c = 0; c < a; ++c) reg(c, c) += weights[c];
    total += reg.ldlt().solve(gram).trace();
  }
  return total;
}

int active_count_df(const FitResult& fit) {
  int count = 0;
  for (Eigen::Index k = 0; k < fit.coefficients.classes(); ++k)
    count += fit.coefficients.tau[k] != 0.0;
  return count + fit.n_active_beta() + fit.n_active_gamma();
}

namespace {

double formula_criterion(CriterionKind kind, const FitResult& fit, const Dataset& data,
                         const PenaltyParams& penalty, bool standardize) {
  const Design design = assemble_design(data, standardize);
  const auto loss = make_loss(design, data.response);
  return criterion_from_fit(kind, fit, design, data.response, penalty,
                            loss->value(fit.z));
}

}  // namespace

double gcv(const FitResult& fit, const Dataset& data, const PenaltyParams& penalty,
           bool standardize) {
  return formula_criterion(CriterionKind::gcv, fit, data, penalty, standardize);
}

double aic(const FitResult& fit, const Dataset& data, const PenaltyParams& penalty,
           bool standardize) {
  return formula_criterion(CriterionKind::aic, fit, data, penalty, standardize);
}

double bic(const FitResult& fit, const Dataset& data, const PenaltyParams& penalty,
           bool standardize) {
  return formula_criterion(CriterionKind::bic, fit, data, penalty, standardize);
}

double caic(const FitResult& fit, const Dataset& data, const PenaltyParams& penalty,
            bool standardize) {
  return formula_criterion(CriterionKind::caic, fit, data, penalty, standardize);
}

double lambda_zero(const Dataset& data, bool standardize) {
  const Design design = assemble_design(data, standardize);
  const auto loss = make_loss(design, data.response);
  const Eigen::VectorXd tau_point = tau_only_fit(*loss, design.d(), loss->classes());
  return lambda_bound(*loss, design.d(), tau_point);
}

// ---------------------------------------------------------------------------
// greedy pathway search

namespace {

struct WarmSet {
  ADMMState full;
  std::vector<ADMMState> folds;
};

struct EvalPoint {
  double criterion = std::numeric_limits<double>::infinity();
  int n_active_beta = 0;
  int n_active_gamma = 0;
  bool fit_ok = false;
  FitResult full_fit;
  WarmSet states;
};

ADMMState state_from(const FitResult& fr) {
  ADMMState st;
  st.theta = fr.theta;
  st.z = fr.z;
  st.u = fr.u;
  st.L = fr.L;
  return st;
}

class PathEvaluator {
 public:
  PathEvaluator(const Dataset& data, const SelectionOptions& opt)
      : data_(data), opt_(opt) {
    full_design_ = std::make_unique<Design>(assemble_design(data, opt.standardize));
    full_loss_ = make_loss(*full_design_, data.response);
    d_ = full_design_->d();
    if (opt.criterion == CriterionKind::cv_mse) {
      const auto fold = cv_folds(data, opt.folds, opt.seed);
      for (int k = 0; k < opt.folds; ++k)
        folds_.push_back(make_fold_problem(data, fold, k, opt.standardize));
    }
    anchor_.full = null_anchor(*full_loss_, d_, opt.rho);
    for (auto& fp : folds_)
      anchor_.folds.push_back(null_anchor(*fp.loss, d_, opt.rho));
    lambda0_ = lambda_bound(*full_loss_, d_, anchor_.full.theta);
  }

  double lambda0() const { return lambda0_; }
  double lambda_at(int exponent) const { return lambda0_ * std::pow(opt_.delta, exponent); }
  const Design& design() const { return *full_design_; }

  const EvalPoint& eval(int m1, int m3) {
    const auto key = std::make_pair(m1, m3);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    EvalPoint pt;
    const PenaltyParams pen{lambda_at(m1), opt_.lambda2, lambda_at(m3), opt_.rho};
    try {
      pt.full_fit = fit(*full_loss_, d_, pen, opt_.solver, &anchor_.full);
      pt.states.full = state_from(pt.full_fit);
      pt.n_active_beta = pt.full_fit.n_active_beta();
      pt.n_active_gamma = pt.full_fit.n_active_gamma();
      pt.fit_ok = true;
      if (opt_.criterion == CriterionKind::cv_mse) {
        double total = 0.0;
        pt.states.folds.resize(folds_.size());
        for (std::size_t k = 0; k < folds_.size(); ++k) {
          const FitResult fr =
              fit(*folds_[k].loss, d_, pen, opt_.solver, &anchor_.folds[k]);
          pt.states.folds[k] = state_from(fr);
          total += heldout_metric(folds_[k], fr.z);
        }
        pt.criterion = total / double(folds_.size());
      } else {
        pt.criterion = criterion_from_fit(opt_.criterion, pt.full_fit, *full_design_,
                                          data_.response, pen, pt.full_fit.loss_value);
      }
    } catch (const std::exception&) {
      // failed grid point: record +infinity and keep searching
      pt.criterion = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(pt.criterion))
      pt.criterion = std::numeric_limits<double>::infinity();
    return memo_.emplace(key, std::move(pt)).first->second;
  }

  void set_anchor(const EvalPoint& pt) {
    if (!pt.fit_ok) return;
    anchor_.full = pt.states.full;
    if (!pt.states.folds.empty()) anchor_.folds = pt.states.folds;
  }

 private:
  const Dataset& data_;
  SelectionOptions opt_;
  std::unique_ptr<Design> full_design_;
  std::unique_ptr<Loss> full_loss_;
  std::vector<FoldProblem> folds_;
  Eigen::Index d_ = 0;
  double lambda0_ = 0.0;
  WarmSet anchor_;
  std::map<std::pair<int, int>, EvalPoint> memo_;
};

}  // namespace

SearchResult greedy_search(const Dataset& data, const SelectionOptions& options) {
  if (!(options.delta > 0.0 && options.delta < 1.0))
    throw std::invalid_argument("delta must lie in (0, 1)");
  if (options.max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");

  PathEvaluator evaluator(data, options);
  PathTrace trace;
  trace.lambda0 = evaluator.lambda0();

  std::map<std::pair<int, int>, int> recorded;
  std::vector<std::pair<int, int>> exponents;
  auto record = [&](int step, int m1, int m3, const EvalPoint& pt) {
    if (recorded.count({m1, m3})) return;
    trace.points.push_back({step, evaluator.lambda_at(m1), evaluator.lambda_at(m3),
                            pt.criterion, pt.n_active_beta, pt.n_active_gamma});
    exponents.emplace_back(m1, m3);
    recorded[{m1, m3}] = int(trace.points.size()) - 1;
  };

  int m1 = 0, m3 = 0;
  const EvalPoint* current = &evaluator.eval(0, 0);
  evaluator.set_anchor(*current);
  record(0, 0, 0, *current);
  double previous = current->criterion;

  for (int step = 1; step <= options.max_steps; ++step) {
    const double c1 = evaluator.eval(m1 + 1, m3).criterion;
    const double c2 = evaluator.eval(m1, m3 + 1).criterion;
    const double c3 = evaluator.eval(m1 + 1, m3 + 1).criterion;
    record(step, m1 + 1, m3, evaluator.eval(m1 + 1, m3));
    record(step, m1, m3 + 1, evaluator.eval(m1, m3 + 1));
    record(step, m1 + 1, m3 + 1, evaluator.eval(m1 + 1, m3 + 1));

    const bool move1 = std::min(c1, c3) <= c2;
    const bool move3 = std::min(c2, c3) < c1;
    if (!move1 && !move3) break;
    m1 += move1;
    m3 += move3;

    const EvalPoint& next = evaluator.eval(m1, m3);
    evaluator.set_anchor(next);
    if (next.criterion > previous) break;  // first increase ends the walk
    previous = next.criterion;
  }

  int best = 0;
  for (int i = 1; i < int(trace.points.size()); ++i)
    if (trace.points[i].criterion < trace.points[best].criterion) best = i;
  trace.chosen = best;
  if (!std::isfinite(trace.points[best].criterion))
    throw std::runtime_error("criterion evaluation failed at every path point");

  SearchResult out;
  out.trace = std::move(trace);
  const auto [bm1, bm3] = exponents[best];
  const EvalPoint& chosen = evaluator.eval(bm1, bm3);
  out.penalty = PenaltyParams{evaluator.lambda_at(bm1), options.lambda2,
                              evaluator.lambda_at(bm3), options.rho};
  out.fit = chosen.full_fit;
  out.fit.center = evaluator.design().center;
  out.fit.scale = evaluator.design().scale;
  out.fit.response_center = evaluator.design().response_center;
  out.fit.standardized = evaluator.design().standardized;
  out.fit.response = data.response.kind;
  return out;
}

}  // namespace smog
