#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontburn/core.hpp"
#include "frontburn/diagnostics.hpp"

namespace frontburn {

/// Relative slack granted to the measured side of every bound check.
inline constexpr double kBoundTolerance = 0.02;
/// Proven constant of the two-layer bound.
inline constexpr double kTwoLayerConstant = 1.0 / 48.0;

/// Piecewise-quadratic averaging kernel.
///
///   G(h, xi) = (h - |xi|)^2 / 2 - (h/2 - |xi|)^2   for |xi| <= h/2
///            = (h - |xi|)^2 / 2                    for h/2 <= |xi| <= h
///            = 0                                   for |xi| >= h
template <typename Scalar>
Scalar kernel_G(Scalar h, Scalar xi) {
  if (!(h > Scalar(0))) throw std::invalid_argument("kernel_G: h must be positive");
  const Scalar a = std::abs(xi);
  if (a >= h) return Scalar(0);
  const Scalar outer = Scalar(0.5) * (h - a) * (h - a);
  if (a <= Scalar(0.5) * h) {
    const Scalar inner = Scalar(0.5) * h - a;
    return outer - inner * inner;
  }
  return outer;
}

/// Trapezoidal time weight on [0, tau]: rises with slope 1, flat at tau/4
/// on [tau/4, 3 tau/4], then falls back to 0.
template <typename Scalar>
Scalar kernel_h(Scalar t, Scalar tau) {
  if (!(tau > Scalar(0))) throw std::invalid_argument("kernel_h: tau must be positive");
  if (t < Scalar(0) || t > tau) throw std::out_of_range("kernel_h: t outside [0, tau]");
  const Scalar quarter = Scalar(0.25) * tau;
  if (t <= quarter) return t;
  if (t <= Scalar(3) * quarter) return quarter;
  return tau - t;
}

/// C A / (1/(kappa tau^2) + 1/(kappa tau) + 1/tau + kappa + 1)
template <typename Scalar>
Scalar bound_two_layer(Scalar drift, Scalar kappa, Scalar tau,
                       Scalar constant = Scalar(kTwoLayerConstant)) {
  const Scalar denom = Scalar(1) / (kappa * tau * tau) + Scalar(1) / (kappa * tau) +
                       Scalar(1) / tau + kappa + Scalar(1);
  return constant * drift / denom;
}

/// C / (H R2) sum_j |A_{j-1} - A_j| h_j / (1/(kappa tau^2) + 1/(kappa tau)
///   + R1/tau + kappa R1 + 1), j - 1 taken cyclically.
double bound_multi_layer(const LayerSystem& sys, double tau, double constant);

/// pi^2/16 + exp(-2t) (v0^2 - pi^2/16), a lower bound for V(t)^2.
template <typename Scalar>
Scalar bound_universal(Scalar v0, Scalar t) {
  const Scalar floor = std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> / Scalar(16);
  return floor + std::exp(Scalar(-2) * t) * (v0 * v0 - floor);
}

enum class BoundKind { universal, two_layer, multi_layer };

std::string to_string(BoundKind kind);

struct BoundReport {
  BoundKind kind = BoundKind::universal;
  double tau = 0.0;
  /// For the universal bound: the value at the worst sample.
  double rhs = 0.0;
  /// (1/tau) int_0^tau V dt, or V(t)^2 at the worst sample.
  double measured = 0.0;
  double margin = 0.0;
  bool pass = false;
  /// The constant used has not been proven for this theorem.
  bool unverified_constant = false;
  /// Time of the worst sample (universal bound only).
  double worst_time = 0.0;
};

/// measured - rhs >= -kBoundTolerance |rhs|
bool passes_with_tolerance(double measured, double rhs);

struct BoundConstants {
  double two_layer = kTwoLayerConstant;
  double multi_layer = kTwoLayerConstant;
};

/// True for two unit-width layers with opposite drifts.
bool is_two_layer_system(const LayerSystem& sys);

/// Universal bound at every sample; averaged bounds over [0, tau]. The
/// two-layer report is produced only for two unit-width layers.
/// Throws std::out_of_range when the trace does not cover [0, tau].
std::vector<BoundReport> check_bounds(const LayerSystem& sys, const BurnTrace& trace, double tau,
                                      const BoundConstants& constants = {});

}  // namespace frontburn
