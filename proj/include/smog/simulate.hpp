#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smog/selection.hpp"

namespace smog {

/// The four effect layouts of the simulation study:
///   I   weak hierarchy   beta = 0.2 on 1..5
///   II  anti-hierarchy   gamma = 0.2 on 1..5
///   III strong hierarchy beta = gamma = 0.2 on 1..5
///   IV  mixture          beta = 0.14 on 1..5, gamma = 0.14 on 6..10,
///                        both = 0.14 on 11..15
enum class ScenarioKind { I = 1, II, III, IV };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& name);

struct Scenario {
  ScenarioKind kind = ScenarioKind::III;
  int n = 100;
  int d = 200;
  ResponseKind response = ResponseKind::gaussian;
  std::uint64_t seed = 0;
  double treatment_effect = 0.63;
  double noise_variance = 0.2;
  double censor_rate = 0.1;  // survival responses
  double max_time = 100.0;   // administrative truncation of survival times

  void validate() const;
};

Coefficients scenario_truth(const Scenario& scenario);

struct SimData {
  Dataset train;
  Dataset test;
  Coefficients truth;
  double snr_prognostic = 0.0;  // realized Var(X beta) / noise variance
  double snr_predictive = 0.0;  // realized Var(W gamma) / noise variance
};

/// Draws train and test sets of equal size the same way: X standard normal,
/// t uniform on {-1,+1}, y = tau t + X beta + (X*t) gamma + eps with
/// eps ~ N(0, noise_variance). Binary labels are Bernoulli with probability
/// 1/(1+exp(-y)) on the noisy y; survival times come from a unit-rate
/// exponential baseline T = -log(U)/exp(y) with uniform censoring calibrated
/// once per scenario to the requested censoring ratio and truncation at
/// max_time. Fixed seed gives bit-identical output.
SimData generate(const Scenario& scenario);

struct F1Scores {
  std::optional<double> prognostic;  // empty when truth and claim are both empty
  std::optional<double> predictive;
};

/// F1 = 2*sens*ppv/(sens+ppv) over the beta and gamma supports separately.
F1Scores f1_scores(const Coefficients& fitted, const Coefficients& truth);

struct EvalReport {
  std::optional<double> f1_prognostic;
  std::optional<double> f1_predictive;
  bool hierarchy_ok = false;
  double test_error = 0.0;  // mean squared error / mean negloglik / total partial negloglik
};

/// Scores a fit against the truth and the held-out test set. The fit must
/// carry its design transforms (fits from greedy_search or the dataset-level
/// fit overload do).
EvalReport evaluate(const FitResult& fitted, const Coefficients& truth,
                    const Dataset& test);

struct StudyConfig {
  SelectionOptions selection;  // simulation defaults: lambda2 = 0, rho = 50
  int replicates = 20;
  int threads = 0;  // 0 = hardware concurrency

  StudyConfig();
};

struct ReplicateResult {
  int replicate = 0;
  std::uint64_t seed = 0;
  double lambda1 = 0.0;
  double lambda3 = 0.0;
  EvalReport report;
  int n_active_beta = 0;
  int n_active_gamma = 0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

struct StudyResult {
  Scenario scenario;
  std::vector<ReplicateResult> rows;
  // aggregate means over successful replicates (prog F1, pred F1, hierarchy
  // enforcement rate, test error); F1 means skip not-applicable replicates
  // and print 0 when every replicate is not applicable
  double f1_prognostic = 0.0;
  double f1_predictive = 0.0;
  double hierarchy_rate = 0.0;
  double test_error = 0.0;
  int failures = 0;
};

/// Runs `replicates` independent draws of the scenario; replicate i derives
/// its RNG stream from (scenario.seed, i), tunes (lambda1, lambda3) by the
/// greedy pathway search and scores the chosen fit on the test set.
/// Replicates run in parallel and merge by index.
StudyResult run_study(const Scenario& scenario, const StudyConfig& config);

}  // namespace smog
