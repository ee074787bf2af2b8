#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frontburn/errors.hpp"

namespace frontburn {

using Index = Eigen::Index;

/// Relative tolerance on the weighted mean drift.
inline constexpr double kFlowTolerance = 1e-12;
/// Allowed overshoot outside [0, 1] before a state is considered corrupt.
inline constexpr double kMaxPrincipleTolerance = 1e-10;
/// Distance from the limiting values required at the window edges.
inline constexpr double kEdgeTolerance = 1e-6;

/// N diffusively coupled layers with drifts A_j and widths h_j.
///
/// Layers are periodic in j; layer j couples to j-1 and j+1 with strength
/// alpha_j = kappa / h_j. Reaction strength and along-layer diffusivity are 1.
struct LayerSystem {
  Eigen::VectorXd drifts;
  Eigen::VectorXd widths;
  double kappa = 1.0;

  Index n_layers() const { return drifts.size(); }
  double total_width() const { return widths.sum(); }
  Eigen::VectorXd alpha() const { return kappa * widths.cwiseInverse(); }
  double max_alpha() const { return kappa / widths.minCoeff(); }
  double max_abs_drift() const { return drifts.cwiseAbs().maxCoeff(); }

  /// 1 + max_j 1/h_j
  double r1() const;
  /// 1 + max_j h_j / h_{j-1}, cyclic in j
  double r2() const;

  /// Equal unit widths.
  static LayerSystem uniform(Eigen::VectorXd drifts, double kappa);
};

struct Violation {
  std::string invariant;
  std::optional<Index> index;
  std::string detail;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& invariant) const;
};

ValidationResult validate_system(const LayerSystem& sys);

/// Removes the width-weighted mean from raw drifts.
Eigen::VectorXd balance_drifts(const Eigen::VectorXd& raw, const Eigen::VectorXd& widths);

/// Discretized profiles T_j on a uniform window [offset, offset + (n-1) dx].
///
/// Column j of `profiles` holds layer j; rows are grid points.
struct FrontState {
  double dx = 0.0;
  double window_offset = 0.0;
  Eigen::ArrayXXd profiles;
  double time = 0.0;

  Index n_points() const { return profiles.rows(); }
  Index n_layers() const { return profiles.cols(); }
  double x(Index i) const { return window_offset + static_cast<double>(i) * dx; }
  double x_hi() const { return x(n_points() - 1); }
  Eigen::ArrayXd grid() const;
  double width() const { return static_cast<double>(n_points() - 1) * dx; }
};

/// True when every value lies in [-tol, 1 + tol].
bool within_unit_interval(const FrontState& state, double tol = kMaxPrincipleTolerance);

/// Leftmost values within delta of 1 and rightmost within delta of 0, all layers.
bool is_front_like(const FrontState& state, double delta = kEdgeTolerance);

struct Window {
  double x_lo;
  double x_hi;
  double dx;
};

/// Every layer set to the sigmoid 1 / (1 + exp(lambda x)).
///
/// Throws std::invalid_argument on a malformed window and WindowAdequacyError
/// when the sigmoid has not reached its limits at the window edges.
FrontState make_front_initial_data(const LayerSystem& sys, double lambda, const Window& window);

/// Exponential barrier C0 exp(-lambda (x - c1 t)) bounding the leading edge.
struct DecayEnvelope {
  double c0 = 1.0;
  double lambda = 1.0;
  double c1 = 0.0;

  bool admissible_for(const LayerSystem& sys) const;
};

/// Smallest admissible envelope speed max|A_j| + lambda + (1 + 2 max alpha_j) / lambda.
double decay_speed_bound(const LayerSystem& sys, double lambda);

}  // namespace frontburn
