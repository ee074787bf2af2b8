#pragma once

#include <limits>
#include <vector>

#include "frontburn/core.hpp"

namespace frontburn {

/// Bulk burning rate samples along a run.
struct BurnTrace {
  std::vector<double> times;
  /// (1/H) sum_j h_j int T_j (1 - T_j) dx
  std::vector<double> v_reaction;
  /// (1/H) sum_j h_j d/dt int T_j dx, by backward differences
  std::vector<double> v_timederiv;
  std::vector<double> front_pos;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

double burning_rate_reaction(const LayerSystem& sys, const FrontState& state);

/// Window-independent mass of each layer, int (T_j - 1{x < 0}) dx.
///
/// Outside the window T_j is taken to be 1 on the left and 0 on the right, so
/// states whose windows differ by whole cells compare consistently.
Eigen::VectorXd layer_masses(const FrontState& state);

/// Finite-difference rate of change of the width-weighted mass.
///
/// Equal states at equal times give 0. Throws GridMismatchError when the grids
/// differ in spacing, size or layer count, or the offsets are not a whole
/// number of cells apart.
double burning_rate_timederiv(const LayerSystem& sys, const FrontState& prev,
                              const FrontState& next);

/// Rightmost linear-interpolated crossing of the h-weighted mean profile
/// through 1/2. Throws FrontNotFoundError when there is none.
double front_position(const LayerSystem& sys, const FrontState& state);

/// Trapezoidal average of v_reaction over [t_lo, t_hi], interpolating at the
/// interval ends. Throws std::out_of_range outside the sampled range.
double time_average(const BurnTrace& trace, double t_lo, double t_hi);

/// Same as time_average for an arbitrary series sampled at `times`.
double time_average(const std::vector<double>& times, const std::vector<double>& values,
                    double t_lo, double t_hi);

/// Resolution of 1 - T for T near 1 in double precision.
inline constexpr double kUnitRoundoff = 16 * std::numeric_limits<double>::epsilon();

/// Relative allowance on the leading envelope; far ahead of the front T and the envelope round to the same double.
inline constexpr double kEnvelopeSlack = 1e-3;

struct EnvelopeMargin {
  /// max of T_j - (1 + relative_slack) C0 exp(-lambda (x - c1 t))
  double leading = 0.0;
  /// max of (1 - T_j) - C0 exp(lambda (x + c1 t))
  double trailing = 0.0;

  double worst() const { return leading > trailing ? leading : trailing; }
};

EnvelopeMargin check_envelope(const LayerSystem& sys, const FrontState& state,
                              const DecayEnvelope& env, double relative_slack = 0.0);

/// Accumulates a BurnTrace from successive states of one run.
class TraceRecorder {
 public:
  explicit TraceRecorder(LayerSystem sys) : sys_(std::move(sys)) {}

  void record(const FrontState& state);
  void operator()(double /*time*/, const FrontState& state) { record(state); }

  const BurnTrace& trace() const { return trace_; }
  BurnTrace take() { return std::move(trace_); }

 private:
  LayerSystem sys_;
  BurnTrace trace_;
  Eigen::VectorXd last_masses_;
  double last_time_ = 0.0;
};

}  // namespace frontburn
