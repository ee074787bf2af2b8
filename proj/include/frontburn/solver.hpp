#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "frontburn/core.hpp"
#include "frontburn/tridiagonal.hpp"

namespace frontburn {

struct SolverConfig {
  double dt = 0.005;
  int recenter_every = 10;
  /// Desired front location as a fraction of the window width.
  double recenter_target = 0.5;
  /// Cells next to each edge that must stay at the edge value.
  int boundary_pad = 4;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct StepReport {
  double max_clamp = 0.0;
  long shifted_cells = 0;
};

/// Non-fatal conditions worth reporting before a run: advection resolution
/// and explicit-coupling stiffness.
std::vector<std::string> step_guard_warnings(const LayerSystem& sys, double dx, double dt);

/// IMEX Crank-Nicolson integrator for one system on one grid spacing.
///
/// Advection and diffusion along each layer are trapezoidal in time with
/// centered second-order differences; reaction and inter-layer coupling are
/// explicit. Each window edge is held at the value it has at the start of the
/// step. The per-layer tridiagonal factorizations are computed once, so the
/// stepper is bound to a window size.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(LayerSystem sys, double dx, double dt, Index n_points,
                       int boundary_pad = 4);

  const LayerSystem& system() const { return sys_; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }

  /// Advances by one time step. Throws WindowAdequacyError if the pad cells
  /// drift more than kEdgeTolerance away from the edge values.
  std::pair<FrontState, StepReport> advance(const FrontState& state) const;
  /// Same as advance, writing into `next` and reusing its storage.
  StepReport advance_into(const FrontState& state, FrontState& next) const;

 private:
  LayerSystem sys_;
  Eigen::VectorXd alpha_;
  double dx_;
  double dt_;
  Index n_points_;
  int pad_;
  // Off-diagonal weights of L per layer as (lower, upper).
  std::vector<Eigen::Array2d> stencils_;
  std::vector<TridiagonalSolver<double>> implicit_;
};

std::pair<FrontState, StepReport> step(const LayerSystem& sys, const FrontState& state,
                                       const SolverConfig& cfg);

/// Shifts the window by whole cells so the front sits at cfg.recenter_target.
/// Cells entering on the left are filled with 1, on the right with 0.
std::pair<FrontState, long> recenter(const LayerSystem& sys, const FrontState& state,
                                     const SolverConfig& cfg);

/// Shifts the window right by `cells` (left if negative), filling with 1 / 0.
FrontState shift_window(const FrontState& state, long cells);
void shift_window_in_place(FrontState& state, long cells);

using Observer = std::function<void(double time, const FrontState& state)>;

struct RunResult {
  FrontState state;
  long steps = 0;
  double max_clamp = 0.0;
  long total_shift = 0;
};

/// Steps until time >= t_end, recentering every cfg.recenter_every steps.
/// The observer sees each new state before any recentering is applied.
RunResult run(const LayerSystem& sys, const FrontState& state, const SolverConfig& cfg,
              double t_end, const Observer& observer = {});

}  // namespace frontburn
