#include "frontburn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "frontburn/diagnostics.hpp"

namespace frontburn {

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
  if (recenter_every < 1) throw std::invalid_argument("solver: recenter_every must be >= 1");
  if (!(recenter_target >= 0.1 && recenter_target <= 0.9)) {
    throw std::invalid_argument("solver: recenter_target must lie in [0.1, 0.9]");
  }
  if (boundary_pad < 1) throw std::invalid_argument("solver: boundary_pad must be >= 1");
}

std::vector<std::string> step_guard_warnings(const LayerSystem& sys, double dx, double dt) {
  std::vector<std::string> warnings;
  const double courant = dt * sys.max_abs_drift() / dx;
  if (courant > 1.0) {
    std::ostringstream os;
    os << "advection Courant number dt*max|A|/dx = " << courant << " exceeds 1";
    warnings.push_back(os.str());
  }
  const double stiffness = dt * (1.0 + 2.0 * sys.max_alpha());
  if (stiffness > 0.5) {
    std::ostringstream os;
    os << "explicit coupling dt*(1 + 2 max alpha) = " << stiffness << " exceeds 0.5";
    warnings.push_back(os.str());
  }
  return warnings;
}

namespace {

TridiagonalSolver<double> implicit_factor(double half_dt, double dx, double drift, Index n) {
  const double diffusion = 1.0 / (dx * dx);
  const double advection = drift / (2.0 * dx);
  using Vec = TridiagonalSolver<double>::Vector;
  const Vec lower = Vec::Constant(n, -half_dt * (diffusion + advection));
  const Vec diag = Vec::Constant(n, 1.0 + 2.0 * half_dt * diffusion);
  const Vec upper = Vec::Constant(n, -half_dt * (diffusion - advection));
  return TridiagonalSolver<double>(lower, diag, upper);
}

}  // namespace

CrankNicolsonStepper::CrankNicolsonStepper(LayerSystem sys, double dx, double dt,
                                           Index n_points, int boundary_pad)
    : sys_(std::move(sys)),
      alpha_(sys_.alpha()),
      dx_(dx),
      dt_(dt),
      n_points_(n_points),
      pad_(boundary_pad) {
  if (!(dx > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("stepper: dx and dt must be positive");
  }
  if (n_points < 2 * boundary_pad + 3) {
    throw WindowAdequacyError("stepper: window too small for the boundary pad");
  }
  const double diffusion = 1.0 / (dx * dx);
  for (Index j = 0; j < sys_.n_layers(); ++j) {
    const double advection = sys_.drifts[j] / (2.0 * dx);
    // (L T)_i = lower (T_{i-1} - T_i) + upper (T_{i+1} - T_i) discretizes -A T_x + T_xx.
    stencils_.emplace_back(diffusion + advection, diffusion - advection);
    implicit_.push_back(implicit_factor(0.5 * dt, dx, sys_.drifts[j], n_points - 2));
  }
}

std::pair<FrontState, StepReport> CrankNicolsonStepper::advance(const FrontState& state) const {
  FrontState next;
  StepReport report = advance_into(state, next);
  return {std::move(next), report};
}

StepReport CrankNicolsonStepper::advance_into(const FrontState& state, FrontState& next) const {
  const Index n = state.n_points();
  const Index layers = state.n_layers();
  if (layers != sys_.n_layers()) {
    throw GridMismatchError("stepper: state and system differ in layer count");
  }
  if (n != n_points_) {
    throw GridMismatchError("stepper: state has " + std::to_string(n) + " points, expected " +
                            std::to_string(n_points_));
  }
  if (std::abs(state.dx - dx_) > 1e-12 * dx_) {
    throw GridMismatchError("stepper: state grid spacing differs from the stepper's");
  }

  const Index interior = n - 2;
  const Eigen::ArrayXXd& old = state.profiles;

  next.dx = state.dx;
  next.window_offset = state.window_offset;
  next.time = state.time + dt_;
  next.profiles.resize(n, layers);

  // Increment form: (I - dt/2 L) (T' - T) = dt (L T + reaction + coupling), so
  // constant states 0 and 1 are reproduced exactly.
  StepReport report;
  for (Index j = 0; j < layers; ++j) {
    const auto layer = static_cast<std::size_t>(j);
    const double* t = &old(0, j);
    const double* below = &old(0, (j + layers - 1) % layers);
    const double* above = &old(0, (j + 1) % layers);
    const double lower = stencils_[layer][0];
    const double upper = stencils_[layer][1];
    const double a = alpha_[j];

    double* delta = &next.profiles(0, j);
    delta[0] = 0.0;
    delta[n - 1] = 0.0;
    for (Index i = 1; i + 1 < n; ++i) {
      const double mid = t[i];
      delta[i] = dt_ * (lower * (t[i - 1] - mid) + upper * (t[i + 1] - mid) + mid * (1.0 - mid) +
                        a * ((below[i] - mid) + (above[i] - mid)));
    }
  }
  auto rhs = next.profiles.middleRows(1, interior);
  solve_columns_in_place(implicit_, rhs);
  next.profiles += old;

  const double overshoot = std::max((next.profiles - 1.0).maxCoeff(), (-next.profiles).maxCoeff());
  report.max_clamp = std::max(0.0, overshoot);
  if (report.max_clamp > 0.0) {
    next.profiles = next.profiles.max(0.0).min(1.0);
  }

  for (Index j = 0; j < layers; ++j) {
    const auto col = next.profiles.col(j);
    const double left_gap = (col.head(pad_ + 1) - col(0)).abs().maxCoeff();
    const double right_gap = (col.tail(pad_ + 1) - col(n - 1)).abs().maxCoeff();
    if (left_gap > kEdgeTolerance || right_gap > kEdgeTolerance) {
      std::ostringstream os;
      os << "front reached the window edge in layer " << j << " at t = " << next.time
         << " (left gap " << left_gap << ", right gap " << right_gap << ")";
      throw WindowAdequacyError(os.str());
    }
  }
  return report;
}

std::pair<FrontState, StepReport> step(const LayerSystem& sys, const FrontState& state,
                                       const SolverConfig& cfg) {
  cfg.validate();
  return CrankNicolsonStepper(sys, state.dx, cfg.dt, state.n_points(), cfg.boundary_pad)
      .advance(state);
}

void shift_window_in_place(FrontState& state, long cells) {
  const Index n = state.n_points();
  const Index k = std::min<Index>(std::abs(cells), n);
  for (Index j = 0; j < state.n_layers(); ++j) {
    double* col = &state.profiles(0, j);
    if (cells > 0) {
      std::copy(col + k, col + n, col);
      std::fill(col + (n - k), col + n, 0.0);
    } else if (cells < 0) {
      std::copy_backward(col, col + (n - k), col + n);
      std::fill(col, col + k, 1.0);
    }
  }
  state.window_offset += static_cast<double>(cells) * state.dx;
}

FrontState shift_window(const FrontState& state, long cells) {
  FrontState out = state;
  shift_window_in_place(out, cells);
  return out;
}

std::pair<FrontState, long> recenter(const LayerSystem& sys, const FrontState& state,
                                     const SolverConfig& cfg) {
  const double front = front_position(sys, state);
  const double target = state.window_offset + cfg.recenter_target * state.width();
  const long shift = std::lround((front - target) / state.dx);
  if (shift == 0) return {state, 0};
  return {shift_window(state, shift), shift};
}

RunResult run(const LayerSystem& sys, const FrontState& state, const SolverConfig& cfg,
              double t_end, const Observer& observer) {
  cfg.validate();
  RunResult result{state};
  if (!(t_end > state.time)) return result;

  const CrankNicolsonStepper stepper(sys, state.dx, cfg.dt, state.n_points(), cfg.boundary_pad);
  const double t0 = state.time;
  const auto n_steps = static_cast<long>(std::ceil((t_end - t0) / cfg.dt - 1e-9));

  FrontState current = state;
  FrontState next;
  for (long k = 1; k <= n_steps; ++k) {
    const StepReport report = stepper.advance_into(current, next);
    next.time = t0 + static_cast<double>(k) * cfg.dt;
    result.max_clamp = std::max(result.max_clamp, report.max_clamp);
    if (observer) observer(next.time, next);
    if (k % cfg.recenter_every == 0) {
      const double front = front_position(sys, next);
      const double target = next.window_offset + cfg.recenter_target * next.width();
      const long shift = std::lround((front - target) / next.dx);
      if (shift != 0) shift_window_in_place(next, shift);
      result.total_shift += shift;
    }
    std::swap(current, next);
  }
  result.steps = n_steps;
  result.state = std::move(current);
  return result;
}

}  // namespace frontburn
