#pragma once

#include "frontburn/core.hpp"

namespace frontburn {

/// Linearization of the layer system about the unburnt (T = 0) and burnt
/// (T = 1) states.
///
/// Ahead of the front T_j ~ v_j exp(-mu (x - c t)), which requires
///   c(mu) = mu + lambda_max(I + mu diag(A) + K) / mu,
/// K being the cyclic coupling matrix. The spreading speed is the minimum of
/// c(mu). Behind the front 1 - T_j ~ w_j exp(nu (x - c t)) with nu the
/// smallest positive root of lambda_max(K + diag(nu^2 - (A_j - c) nu - 1)).
struct LinearFrontAnalysis {
  double speed = 0.0;
  double leading_decay = 0.0;
  double trailing_decay = 0.0;
};

/// Cyclic inter-layer coupling matrix: row j adds alpha_j to columns j-1 and
/// j+1 and subtracts 2 alpha_j on the diagonal.
Eigen::MatrixXd coupling_matrix(const LayerSystem& sys);

/// Largest real part of the spectrum of a Metzler matrix.
double perron_eigenvalue(const Eigen::MatrixXd& m);

LinearFrontAnalysis analyze_linear_front(const LayerSystem& sys);

/// Window around x = 0 sized so both tails reach kEdgeTolerance inside it.
struct WindowPlan {
  double behind = 0.0;
  double ahead = 0.0;

  double width() const { return behind + ahead; }
  /// Relative front position to maintain when recentering.
  double target_fraction() const;
  Window window(double dx) const { return {-behind, ahead, dx}; }
};

/// Never narrower than 40 + 4 max|A_j| length units.
WindowPlan plan_window(const LayerSystem& sys);

}  // namespace frontburn
