#include "smog/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace smog {

double soft_threshold(double x, double lam) {
  const double mag = std::abs(x) - lam;
  if (mag <= 0.0) return 0.0;
  return x > 0.0 ? mag : -mag;
}

ProxPair prox_pair(double b1, double b2, double lam1, double lam2, double lam3) {
  const double s = soft_threshold(b2, lam3);
  const double nrm = std::hypot(b1, s);
  if (nrm <= lam1 || nrm == 0.0) return {0.0, 0.0};
  const double shrink = (1.0 - lam1 / nrm) / (1.0 + 2.0 * lam2);
  return {shrink * b1, shrink * s};
}

void prox_full_inplace(Eigen::VectorXd& b, Eigen::Index d, Eigen::Index m,
                       double lam1, double lam2, double lam3) {
  if (b.size() != m * (2 * d + 1))
    throw std::invalid_argument("prox_full: vector length does not match (2d+1)*classes");
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index base = k * (2 * d + 1);
    for (Eigen::Index j = 0; j < d; ++j) {
      const ProxPair pr = prox_pair(b[base + 1 + j], b[base + 1 + d + j], lam1, lam2, lam3);
      b[base + 1 + j] = pr.theta1;
      b[base + 1 + d + j] = pr.theta2;
    }
  }
}

Eigen::VectorXd prox_full(const Eigen::VectorXd& b, Eigen::Index d, Eigen::Index m,
                          double lam1, double lam2, double lam3) {
  Eigen::VectorXd out = b;
  prox_full_inplace(out, d, m, lam1, lam2, lam3);
  return out;
}

double penalty_value(const Eigen::VectorXd& theta, Eigen::Index d, Eigen::Index m,
                     const PenaltyParams& penalty) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index base = k * (2 * d + 1);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double bj = theta[base + 1 + j];
      const double gj = theta[base + 1 + d + j];
      const double nrm = std::hypot(bj, gj);
      total += penalty.lambda1 * nrm + penalty.lambda2 * nrm * nrm +
               penalty.lambda3 * std::abs(gj);
    }
  }
  return total;
}

}  // namespace smog
