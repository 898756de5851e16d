// Scratch driver used while bringing the solver up; not part of the test suite.
#include <chrono>
#include <cstdio>
#include <random>

#include <Eigen/Dense>

#include "smog/design.hpp"
#include "smog/loss.hpp"
#include "smog/rng.hpp"
#include "smog/solver.hpp"

using namespace smog;

int main() {
  Rng rng(42);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);

  // Scenario-III-like data: n=200, d=200, 5 true groups with beta=gamma=0.2
  const int n = 200, d = 200;
  Eigen::MatrixXd X(n, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = norm(rng);
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t[i] = coin(rng) ? 1.0 : -1.0;
  Eigen::VectorXd y = 0.63 * t;
  for (int j = 0; j < 5; ++j)
    y += 0.2 * X.col(j) + 0.2 * X.col(j).cwiseProduct(t);
  for (int i = 0; i < n; ++i) y[i] += std::sqrt(0.2) * norm(rng);

  Dataset ds = Dataset::make(ResponseData::continuous(y), t, X);
  Design design = assemble_design(ds, true);
  GaussianLoss loss(design, y);

  // gradient-at-treatment-only bound for the null model
  const double tau0 = t.dot((y.array() - y.mean()).matrix()) / t.dot(t);
  Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(design.p());
  theta0[0] = tau0;
  Eigen::VectorXd g = loss.eval(theta0).gradient;
  double lam_max = 0;
  for (int j = 0; j < d; ++j)
    lam_max = std::max(lam_max, std::hypot(g[1 + j], g[1 + d + j]));
  std::printf("lambda_max (null bound) = %.3f\n", lam_max);

  for (double rho : {1.0, 10.0, 50.0, 100.0}) {
    SolverOptions opts;
    auto t0 = std::chrono::steady_clock::now();
    // path start: theta = z = treatment-only point, u = -grad/rho (KKT dual)
    double lam = 1.1 * lam_max;
    ADMMState warm;
    warm.theta = theta0;
    warm.z = theta0;
    warm.u = -g / rho;
    warm.L = 1.0;
    long total_iters = 0;
    FitResult fr;
    for (int k = 0; k <= 20; ++k) {
      PenaltyParams pk{lam, 0.0, lam, rho};
      fr = fit(loss, d, pk, opts, &warm);
      warm.theta = fr.theta; warm.z = fr.z; warm.u = fr.u; warm.L = 1.0;
      total_iters += fr.iterations;
      if (k % 5 == 0 || k == 20)
        std::printf("  rho=%5.1f step %2d: lam=%8.3f iters=%5d conv=%d b=%d g=%d\n",
                    rho, k, lam, fr.iterations, fr.converged, fr.n_active_beta(),
                    fr.n_active_gamma());
      lam *= 0.9;
    }
    auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    std::printf("rho=%5.1f: 21 path fits in %.2f s (%ld iterations)\n", rho, secs,
                total_iters);
  }

  // OLS sanity: small unpenalized fit vs normal equations
  {
    const int n2 = 100, d2 = 10;
    Eigen::MatrixXd X2(n2, d2);
    for (int j = 0; j < d2; ++j)
      for (int i = 0; i < n2; ++i) X2(i, j) = norm(rng);
    Eigen::VectorXd t2(n2);
    for (int i = 0; i < n2; ++i) t2[i] = coin(rng) ? 1.0 : -1.0;
    Eigen::VectorXd y2(n2);
    for (int i = 0; i < n2; ++i) y2[i] = 0.5 * t2[i] + X2(i, 0) + norm(rng);
    Dataset ds2 = Dataset::make(ResponseData::continuous(y2), t2, X2);
    Design de2 = assemble_design(ds2, true);
    GaussianLoss l2(de2, y2);
    SolverOptions o2;
    o2.eps_abs = o2.eps_rel = 1e-8;
    o2.max_iter = 100000;
    PenaltyParams p0{0, 0, 0, 1.0};
    FitResult f0 = fit(l2, d2, p0, o2);
    const Eigen::MatrixXd& M = de2.model_matrix();
    Eigen::VectorXd yc = y2.array() - y2.mean();
    Eigen::VectorXd ols = (M.transpose() * M).ldlt().solve(M.transpose() * yc);
    std::printf("OLS check: iters=%d conv=%d max|diff|=%.2e\n", f0.iterations,
                f0.converged, (f0.z - ols).cwiseAbs().maxCoeff());
  }
  return 0;
}
