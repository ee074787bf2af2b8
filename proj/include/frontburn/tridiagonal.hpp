#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frontburn/errors.hpp"

namespace frontburn {

/// LU factorization of a tridiagonal matrix, reusable across right-hand sides.
///
/// Row i reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]; lower[0] and
/// upper[n-1] are ignored. No pivoting: the matrix should be diagonally
/// dominant, and a vanishing pivot raises SingularSystemError.
template <typename Scalar>
class TridiagonalSolver {
 public:
  using Vector = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  TridiagonalSolver() = default;

  TridiagonalSolver(const Eigen::Ref<const Vector>& lower, const Eigen::Ref<const Vector>& diag,
                    const Eigen::Ref<const Vector>& upper)
      : scaled_lower_(diag.size()), inv_pivot_(diag.size()), sweep_(diag.size()) {
    const Eigen::Index n = diag.size();
    if (n == 0 || lower.size() != n || upper.size() != n) {
      throw SingularSystemError("tridiagonal: band lengths differ or system is empty");
    }
    const Scalar scale = diag.abs().maxCoeff() + lower.abs().maxCoeff() + upper.abs().maxCoeff();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon() * scale;

    Scalar pivot = diag[0];
    for (Eigen::Index i = 0;; ++i) {
      if (!(std::abs(pivot) > eps)) {
        throw SingularSystemError("tridiagonal: zero pivot at row " + std::to_string(i) +
                                  " (pivot " + std::to_string(static_cast<double>(pivot)) +
                                  ", scale " + std::to_string(static_cast<double>(scale)) + ")");
      }
      inv_pivot_[i] = Scalar(1) / pivot;
      scaled_lower_[i] = i == 0 ? Scalar(0) : lower[i] * inv_pivot_[i];
      if (i + 1 == n) break;
      sweep_[i] = upper[i] * inv_pivot_[i];
      pivot = diag[i + 1] - lower[i + 1] * sweep_[i];
    }
    sweep_[n - 1] = Scalar(0);
  }

  Eigen::Index size() const { return inv_pivot_.size(); }

  /// Overwrites rhs with the solution.
  template <typename Derived>
  void solve_in_place(Eigen::DenseBase<Derived>& rhs) const {
    const Eigen::Index n = size();
    rhs[0] *= inv_pivot_[0];
    for (Eigen::Index i = 1; i < n; ++i) {
      rhs[i] = rhs[i] * inv_pivot_[i] - scaled_lower_[i] * rhs[i - 1];
    }
    for (Eigen::Index i = n - 1; i-- > 0;) {
      rhs[i] -= sweep_[i] * rhs[i + 1];
    }
  }

  Vector solve(const Eigen::Ref<const Vector>& rhs) const {
    Vector x = rhs;
    solve_in_place(x);
    return x;
  }

 private:
  template <typename S, typename Derived>
  friend void solve_columns_in_place(const std::vector<TridiagonalSolver<S>>& solvers,
                                     Eigen::DenseBase<Derived>& block);

  // lower[i] / pivot[i]
  Vector scaled_lower_;
  Vector inv_pivot_;
  Vector sweep_;
};

/// Solves column j of `block` with solvers[j], all columns advancing row by
/// row together. Every solver must match the block's row count.
template <typename Scalar, typename Derived>
void solve_columns_in_place(const std::vector<TridiagonalSolver<Scalar>>& solvers,
                            Eigen::DenseBase<Derived>& block) {
  const Eigen::Index n = block.rows();
  const Eigen::Index m = block.cols();
  for (Eigen::Index j = 0; j < m; ++j) {
    block(0, j) *= solvers[static_cast<std::size_t>(j)].inv_pivot_[0];
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& s = solvers[static_cast<std::size_t>(j)];
      block(i, j) = block(i, j) * s.inv_pivot_[i] - s.scaled_lower_[i] * block(i - 1, j);
    }
  }
  for (Eigen::Index i = n - 1; i-- > 0;) {
    for (Eigen::Index j = 0; j < m; ++j) {
      block(i, j) -= solvers[static_cast<std::size_t>(j)].sweep_[i] * block(i + 1, j);
    }
  }
}

}  // namespace frontburn
