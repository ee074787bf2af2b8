#include "frontburn/front_analysis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace frontburn {

Eigen::MatrixXd coupling_matrix(const LayerSystem& sys) {
  const Index n = sys.n_layers();
  const Eigen::VectorXd alpha = sys.alpha();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    k(j, (j + n - 1) % n) += alpha[j];
    k(j, (j + 1) % n) += alpha[j];
    k(j, j) -= 2.0 * alpha[j];
  }
  return k;
}

double perron_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  return solver.eigenvalues().real().maxCoeff();
}

namespace {

double spreading_speed(const LayerSystem& sys, const Eigen::MatrixXd& coupling, double mu) {
  Eigen::MatrixXd m = coupling;
  m.diagonal().array() += 1.0 + mu * sys.drifts.array();
  return mu + perron_eigenvalue(m) / mu;
}

double trailing_residual(const LayerSystem& sys, const Eigen::MatrixXd& coupling, double speed,
                         double nu) {
  Eigen::MatrixXd m = coupling;
  m.diagonal().array() += nu * nu - (sys.drifts.array() - speed) * nu - 1.0;
  return perron_eigenvalue(m);
}

}  // namespace

LinearFrontAnalysis analyze_linear_front(const LayerSystem& sys) {
  const Eigen::MatrixXd coupling = coupling_matrix(sys);
  LinearFrontAnalysis out;

  // c(mu) is unimodal on (0, inf): coarse log scan, then golden section.
  constexpr int kScan = 400;
  const double lo_mu = 1e-4;
  const double hi_mu = 50.0;
  const double ratio = std::pow(hi_mu / lo_mu, 1.0 / kScan);
  double best_mu = lo_mu;
  double best_c = spreading_speed(sys, coupling, lo_mu);
  for (int i = 1; i <= kScan; ++i) {
    const double mu = lo_mu * std::pow(ratio, i);
    const double c = spreading_speed(sys, coupling, mu);
    if (c < best_c) {
      best_c = c;
      best_mu = mu;
    }
  }
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = best_mu / ratio;
  double b = best_mu * ratio;
  for (int it = 0; it < 100 && b - a > 1e-12 * b; ++it) {
    const double m1 = b - golden * (b - a);
    const double m2 = a + golden * (b - a);
    if (spreading_speed(sys, coupling, m1) < spreading_speed(sys, coupling, m2)) {
      b = m2;
    } else {
      a = m1;
    }
  }
  out.leading_decay = 0.5 * (a + b);
  out.speed = spreading_speed(sys, coupling, out.leading_decay);

  // The residual is -1 at nu = 0 and grows like nu^2; bracket its first root.
  double lo = 0.0;
  double hi = 1e-3;
  while (trailing_residual(sys, coupling, out.speed, hi) < 0.0 && hi < 1e3) {
    lo = hi;
    hi *= 1.25;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (trailing_residual(sys, coupling, out.speed, mid) < 0.0 ? lo : hi) = mid;
  }
  out.trailing_decay = 0.5 * (lo + hi);
  return out;
}

double WindowPlan::target_fraction() const {
  return std::clamp(behind / width(), 0.1, 0.9);
}

WindowPlan plan_window(const LayerSystem& sys) {
  const LinearFrontAnalysis lin = analyze_linear_front(sys);
  const double decades = std::log(1.0 / kEdgeTolerance);
  const double max_drift = sys.max_abs_drift();

  WindowPlan plan;
  // Margins cover the stretched reaction zone between the layer fronts and
  // the transient before the tails settle at their linear decay rates.
  plan.behind = 20.0 + 1.25 * decades / lin.trailing_decay;
  plan.ahead = 20.0 + decades / lin.leading_decay + 2.5 * max_drift;

  const double min_width = 40.0 + 4.0 * max_drift;
  if (plan.width() < min_width) {
    const double grow = min_width / plan.width();
    plan.behind *= grow;
    plan.ahead *= grow;
  }
  return plan;
}

}  // namespace frontburn
