#include "smog/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "smog/design.hpp"
#include "smog/loss.hpp"
#include "smog/parallel.hpp"
#include "smog/rng.hpp"

namespace smog {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::I: return "I";
    case ScenarioKind::II: return "II";
    case ScenarioKind::III: return "III";
    case ScenarioKind::IV: return "IV";
  }
  return "unknown";
}

ScenarioKind scenario_from_string(const std::string& name) {
  if (name == "I" || name == "1" || name == "i") return ScenarioKind::I;
  if (name == "II" || name == "2" || name == "ii") return ScenarioKind::II;
  if (name == "III" || name == "3" || name == "iii") return ScenarioKind::III;
  if (name == "IV" || name == "4" || name == "iv") return ScenarioKind::IV;
  throw std::invalid_argument("unknown scenario: " + name);
}

void Scenario::validate() const {
  const int min_d = kind == ScenarioKind::IV ? 15 : 5;
  if (d < min_d)
    throw std::invalid_argument("scenario " + to_string(kind) + " needs d >= " +
                                std::to_string(min_d));
  if (n < 2) throw std::invalid_argument("scenario needs n >= 2");
  if (!(noise_variance > 0)) throw std::invalid_argument("noise variance must be positive");
  if (!(censor_rate > 0 && censor_rate < 1))
    throw std::invalid_argument("censor rate must lie in (0, 1)");
  if (!(max_time > 0)) throw std::invalid_argument("max survival time must be positive");
}

Coefficients scenario_truth(const Scenario& scenario) {
  scenario.validate();
  Coefficients truth = Coefficients::zero(scenario.d, 1);
  truth.tau[0] = scenario.treatment_effect;
  switch (scenario.kind) {
    case ScenarioKind::I:
      for (int j = 0; j < 5; ++j) truth.beta(j, 0) = 0.2;
      break;
    case ScenarioKind::II:
      for (int j = 0; j < 5; ++j) truth.gamma(j, 0) = 0.2;
      break;
    case ScenarioKind::III:
      for (int j = 0; j < 5; ++j) {
        truth.beta(j, 0) = 0.2;
        truth.gamma(j, 0) = 0.2;
      }
      break;
    case ScenarioKind::IV:
      for (int j = 0; j < 5; ++j) truth.beta(j, 0) = 0.14;
      for (int j = 5; j < 10; ++j) truth.gamma(j, 0) = 0.14;
      for (int j = 10; j < 15; ++j) {
        truth.beta(j, 0) = 0.14;
        truth.gamma(j, 0) = 0.14;
      }
      break;
  }
  return truth;
}

namespace {

double draw_unit(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  if (u <= 0.0) u = std::numeric_limits<double>::min();
  if (u >= 1.0) u = std::nextafter(1.0, 0.0);
  return u;
}

/// Empirical calibration of the censoring scale: C ~ Uniform(0, c_max) with
/// c_max solved so the pooled fraction of censored observations (uniform
/// censoring plus truncation at max_time) matches the requested ratio.
double calibrate_censoring(const Scenario& scenario, const Coefficients& truth) {
  Rng rng(derive_seed(0x5C0CAB1E5ULL, static_cast<std::uint64_t>(scenario.kind)));
  std::normal_distribution<double> norm(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  const double noise_sd = std::sqrt(scenario.noise_variance);

  const int draws = 20000;
  std::vector<double> event_time(draws), censor_unit(draws);
  for (int i = 0; i < draws; ++i) {
    const double t = coin(rng) ? 1.0 : -1.0;
    double psi = scenario.treatment_effect * t;
    for (int j = 0; j < scenario.d; ++j) {
      const double b = truth.beta(j, 0), g = truth.gamma(j, 0);
      if (b == 0.0 && g == 0.0) continue;
      const double x = norm(rng);
      psi += b * x + g * x * t;
    }
    psi += noise_sd * norm(rng);
    event_time[i] = -std::log(draw_unit(rng)) / std::exp(psi);
    censor_unit[i] = draw_unit(rng);
  }
  const auto censored_fraction = [&](double c_max) {
    int censored = 0;
    for (int i = 0; i < draws; ++i) {
      const double limit = std::min(censor_unit[i] * c_max, scenario.max_time);
      if (!(event_time[i] <= limit)) ++censored;
    }
    return double(censored) / draws;
  };
  double lo = 1e-9, hi = 1e12;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (censored_fraction(mid) > scenario.censor_rate) lo = mid;
    else hi = mid;
  }
  return std::sqrt(lo * hi);
}

Dataset draw_dataset(const Scenario& scenario, const Coefficients& truth, double c_max,
                     Rng& rng) {
  std::normal_distribution<double> norm(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  const int n = scenario.n, d = scenario.d;

  Eigen::MatrixXd X(n, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = norm(rng);
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t[i] = coin(rng) ? 1.0 : -1.0;

  Eigen::VectorXd y = scenario.treatment_effect * t;
  y += X * truth.beta.col(0);
  y += (X.array().colwise() * t.array()).matrix() * truth.gamma.col(0);
  const double noise_sd = std::sqrt(scenario.noise_variance);
  for (int i = 0; i < n; ++i) y[i] += noise_sd * norm(rng);

  std::vector<std::string> names;
  names.reserve(d);
  for (int j = 0; j < d; ++j) names.push_back("g" + std::to_string(j + 1));

  ResponseData response;
  switch (scenario.response) {
    case ResponseKind::gaussian:
      response = ResponseData::continuous(y);
      break;
    case ResponseKind::multinomial: {
      std::vector<int> labels(n);
      for (int i = 0; i < n; ++i) {
        const double p = 1.0 / (1.0 + std::exp(-y[i]));
        labels[i] = draw_unit(rng) < p ? 1 : 2;
      }
      response = ResponseData::categorical(std::move(labels), 2);
      break;
    }
    case ResponseKind::cox: {
      Eigen::VectorXd time(n);
      Eigen::VectorXi status(n);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        for (int i = 0; i < n; ++i) {
          const double event = -std::log(draw_unit(rng)) / std::exp(y[i]);
          const double censor = draw_unit(rng) * c_max;
          time[i] = std::min({event, censor, scenario.max_time});
          status[i] = (event <= censor && event <= scenario.max_time) ? 1 : 0;
        }
        if (status.sum() > 0) break;
      }
      response = ResponseData::survival(std::move(time), std::move(status));
      break;
    }
  }
  return Dataset::make(std::move(response), std::move(t), std::move(X), std::move(names));
}

double sample_variance(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / double(v.size() - 1);
}

}  // namespace

SimData generate(const Scenario& scenario) {
  scenario.validate();
  SimData out;
  out.truth = scenario_truth(scenario);
  const double c_max = scenario.response == ResponseKind::cox
                           ? calibrate_censoring(scenario, out.truth)
                           : 0.0;
  Rng rng(scenario.seed);
  out.train = draw_dataset(scenario, out.truth, c_max, rng);
  out.test = draw_dataset(scenario, out.truth, c_max, rng);

  const Eigen::VectorXd prognostic = out.train.covariates * out.truth.beta.col(0);
  const Eigen::VectorXd predictive =
      (out.train.covariates.array().colwise() * out.train.treatment.array()).matrix() *
      out.truth.gamma.col(0);
  out.snr_prognostic = sample_variance(prognostic) / scenario.noise_variance;
  out.snr_predictive = sample_variance(predictive) / scenario.noise_variance;
  return out;
}

namespace {

std::optional<double> f1_of_supports(const std::vector<bool>& claimed,
                                     const std::vector<bool>& truth) {
  int tp = 0, n_claimed = 0, n_truth = 0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    n_claimed += claimed[j];
    n_truth += truth[j];
    tp += claimed[j] && truth[j];
  }
  if (n_claimed == 0 && n_truth == 0) return std::nullopt;
  const double sens = n_truth == 0 ? 0.0 : double(tp) / n_truth;
  const double ppv = n_claimed == 0 ? 0.0 : double(tp) / n_claimed;
  if (sens + ppv == 0.0) return 0.0;
  return 2.0 * sens * ppv / (sens + ppv);
}

std::vector<bool> support_of(const Eigen::MatrixXd& coef) {
  std::vector<bool> sup(coef.rows(), false);
  for (Eigen::Index j = 0; j < coef.rows(); ++j)
    for (Eigen::Index k = 0; k < coef.cols(); ++k)
      if (coef(j, k) != 0.0) sup[j] = true;
  return sup;
}

}  // namespace

F1Scores f1_scores(const Coefficients& fitted, const Coefficients& truth) {
  if (fitted.d() != truth.d())
    throw std::invalid_argument("coefficient dimensions do not match");
  F1Scores out;
  out.prognostic = f1_of_supports(support_of(fitted.beta), support_of(truth.beta));
  out.predictive = f1_of_supports(support_of(fitted.gamma), support_of(truth.gamma));
  return out;
}

EvalReport evaluate(const FitResult& fitted, const Coefficients& truth,
                    const Dataset& test) {
  if (fitted.center.size() != test.d())
    throw std::invalid_argument("fit carries no transforms for this data");
  EvalReport report;
  const F1Scores f1 = f1_scores(fitted.coefficients, truth);
  report.f1_prognostic = f1.prognostic;
  report.f1_predictive = f1.predictive;
  report.hierarchy_ok = hierarchy_satisfied(fitted.coefficients);

  const Design design = design_from_transforms(test, fitted.center, fitted.scale,
                                               fitted.response_center, fitted.standardized);
  const Eigen::VectorXd flat = fitted.coefficients.to_flat();
  switch (test.response.kind) {
    case ResponseKind::gaussian: {
      const Eigen::VectorXd yhat =
          (design.model_matrix() * flat).array() + fitted.response_center;
      report.test_error = (test.response.y - yhat).squaredNorm() / double(test.n());
      break;
    }
    case ResponseKind::multinomial:
      report.test_error =
          MultinomialLoss(design, test.response.labels, test.response.n_classes)
              .value(flat) /
          double(test.n());
      break;
    case ResponseKind::cox:
      report.test_error =
          CoxLoss(design, test.response.time, test.response.status).value(flat);
      break;
  }
  return report;
}

StudyConfig::StudyConfig() {
  selection.criterion = CriterionKind::cv_mse;
  selection.folds = 5;
  selection.delta = 0.9;
  selection.max_steps = 20;
  selection.lambda2 = 0.0;  // the simulation protocol drops the ridge term
  selection.rho = 50.0;     // same minimizers, far fewer ADMM iterations
}

StudyResult run_study(const Scenario& scenario, const StudyConfig& config) {
  if (config.replicates < 1) throw std::invalid_argument("need at least one replicate");
  scenario.validate();

  StudyResult out;
  out.scenario = scenario;
  out.rows.resize(config.replicates);

  parallel_for(config.replicates, config.threads, [&](int i) {
    ReplicateResult row;
    row.replicate = i;
    row.seed = derive_seed(scenario.seed, static_cast<std::uint64_t>(i));
    try {
      Scenario rep = scenario;
      rep.seed = row.seed;
      const SimData sim = generate(rep);
      SelectionOptions selection = config.selection;
      selection.seed = derive_seed(row.seed, 0xF01D);
      const SearchResult search = greedy_search(sim.train, selection);
      row.lambda1 = search.penalty.lambda1;
      row.lambda3 = search.penalty.lambda3;
      row.report = evaluate(search.fit, sim.truth, sim.test);
      row.n_active_beta = search.fit.n_active_beta();
      row.n_active_gamma = search.fit.n_active_gamma();
      row.converged = search.fit.converged;
    } catch (const std::exception& err) {
      row.failed = true;
      row.error = err.what();
    }
    out.rows[i] = std::move(row);
  });

  double prog_sum = 0.0, pred_sum = 0.0, err_sum = 0.0;
  int prog_n = 0, pred_n = 0, ok_n = 0, hier_n = 0;
  for (const auto& row : out.rows) {
    if (row.failed) {
      ++out.failures;
      continue;
    }
    ++ok_n;
    hier_n += row.report.hierarchy_ok;
    err_sum += row.report.test_error;
    if (row.report.f1_prognostic) {
      prog_sum += *row.report.f1_prognostic;
      ++prog_n;
    }
    if (row.report.f1_predictive) {
      pred_sum += *row.report.f1_predictive;
      ++pred_n;
    }
  }
  out.f1_prognostic = prog_n > 0 ? prog_sum / prog_n : 0.0;
  out.f1_predictive = pred_n > 0 ? pred_sum / pred_n : 0.0;
  out.hierarchy_rate = ok_n > 0 ? double(hier_n) / ok_n : 0.0;
  out.test_error = ok_n > 0 ? err_sum / ok_n : 0.0;
  return out;
}

}  // namespace smog
