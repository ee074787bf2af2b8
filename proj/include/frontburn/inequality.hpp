#pragma once

#include <cstdint>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

#include "frontburn/core.hpp"

namespace frontburn {

/// (pi/8)^2, the sharp lower bound of int (T_x)^2 dx * int T(1-T) dx.
inline constexpr double kFineqConstant = (std::numbers::pi / 8.0) * (std::numbers::pi / 8.0);

/// A sampled front x -> T(x) on a uniform grid, taken to be 1 to the left and
/// 0 to the right of the grid.
struct Profile {
  double x_lo = 0.0;
  double dx = 0.0;
  Eigen::ArrayXd values;

  Index size() const { return values.size(); }
  double x(Index i) const { return x_lo + static_cast<double>(i) * dx; }
  double x_hi() const { return x(size() - 1); }
  /// Linear interpolation, extended by the limits 1 and 0.
  double value_at(double x) const;
  bool admissible(double edge_tol = kEdgeTolerance) const;
};

/// Samples f on {x_lo + i dx} up to x_hi.
Profile sample_profile(const std::function<double(double)>& f, double x_lo, double x_hi,
                       double dx);

/// Re-samples p on another uniform grid.
Profile resample(const Profile& p, double x_lo, double dx, Index n);

/// Puts two profiles on the union of their grids at the finer spacing.
std::pair<Profile, Profile> align(const Profile& p, const Profile& q);

struct FineqTerms {
  double dirichlet = 0.0;
  double reaction = 0.0;
  double product = 0.0;
};

/// Trapezoid quadratures of (T_x)^2 (centered differences) and T(1-T).
FineqTerms fineq_product(const Profile& p);

/// int T_x sqrt(T(1-T)) dx, whose square the product dominates.
double fineq_cauchy_schwarz_term(const Profile& p);

/// 1 for x <= -pi/2, (1 - sin x)/2 in between, 0 for x >= pi/2.
double extremal_value(double x);

/// The extremal front sampled symmetrically about 0 on a grid covering
/// [-pi, pi]; x = 0 is a grid point.
Profile extremal_profile(double dx);

struct CouplingBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs <= rhs; }
};

/// lhs = int |T1 - T2|, rhs = 3 (int (T1 - T2)^2 + int T1(1-T1) + T2(1-T2)).
/// Throws GridMismatchError unless both profiles share one grid.
CouplingBound l1_coupling_bound(const Profile& p, const Profile& q);

/// Deterministic random front: a product of 1-4 decreasing sigmoids with
/// random centers and rates, times a bounded oscillating perturbation
/// T + a(x) T (1 - T), |a| < 1, that keeps values in [0, 1].
Profile random_admissible_profile(std::uint64_t seed, double dx);

/// Allowed relative shortfall of a sampled product below (pi/8)^2.
inline constexpr double kFineqQuadratureTolerance = 1e-3;
/// Allowed distance of the sampled extremal product from (pi/8)^2.
inline constexpr double kExtremalTolerance = 1e-5;

struct FineqSelftest {
  FineqTerms extremal;
  std::size_t seeds = 0;
  /// Smallest product / (pi/8)^2 over the random profiles.
  double worst_ratio = 0.0;
  std::uint64_t worst_seed = 0;
  double seconds = 0.0;

  bool extremal_ok() const;
  bool random_ok() const;
  bool pass() const { return extremal_ok() && random_ok(); }
};

/// Extremal profile plus seeds first_seed, first_seed + 1, ... at spacing dx.
FineqSelftest run_fineq_selftest(double dx, std::size_t seeds, std::uint64_t first_seed = 1);

}  // namespace frontburn
