#pragma once

#include <Eigen/Dense>

namespace frontburn {

/// Composite trapezoid rule on a uniform grid of spacing dx.
template <typename Derived>
typename Derived::Scalar trapezoid(const Eigen::ArrayBase<Derived>& f,
                                   typename Derived::Scalar dx) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = f.size();
  if (n < 2) return Scalar(0);
  return dx * (f.sum() - Scalar(0.5) * (f(0) + f(n - 1)));
}

/// Centered differences inside, one-sided at the two ends.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> centered_derivative(
    const Eigen::ArrayBase<Derived>& f, typename Derived::Scalar dx) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = f.size();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> d(n);
  if (n < 2) {
    d.setZero();
    return d;
  }
  d(0) = (f(1) - f(0)) / dx;
  d(n - 1) = (f(n - 1) - f(n - 2)) / dx;
  if (n > 2) {
    d.segment(1, n - 2) = (f.segment(2, n - 2) - f.segment(0, n - 2)) / (Scalar(2) * dx);
  }
  return d;
}

}  // namespace frontburn
