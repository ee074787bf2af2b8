#include "frontburn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "frontburn/quadrature.hpp"

namespace frontburn {

double burning_rate_reaction(const LayerSystem& sys, const FrontState& state) {
  double total = 0.0;
  for (Index j = 0; j < state.n_layers(); ++j) {
    const auto t = state.profiles.col(j);
    total += sys.widths[j] * trapezoid((t * (1.0 - t)).eval(), state.dx);
  }
  return total / sys.total_width();
}

Eigen::VectorXd layer_masses(const FrontState& state) {
  Eigen::VectorXd mass(state.n_layers());
  for (Index j = 0; j < state.n_layers(); ++j) {
    mass[j] = trapezoid(state.profiles.col(j), state.dx) + state.window_offset;
  }
  return mass;
}

namespace {

void require_compatible(const FrontState& a, const FrontState& b) {
  if (a.dx != b.dx || a.n_points() != b.n_points() || a.n_layers() != b.n_layers()) {
    throw GridMismatchError("states live on different grids");
  }
  const double cells = (b.window_offset - a.window_offset) / a.dx;
  if (std::abs(cells - std::round(cells)) > 1e-6) {
    std::ostringstream os;
    os << "window offsets " << a.window_offset << " and " << b.window_offset
       << " are not a whole number of cells apart";
    throw GridMismatchError(os.str());
  }
}

}  // namespace

double burning_rate_timederiv(const LayerSystem& sys, const FrontState& prev,
                              const FrontState& next) {
  require_compatible(prev, next);
  const double elapsed = next.time - prev.time;
  if (elapsed == 0.0) {
    if (prev.window_offset == next.window_offset && (prev.profiles == next.profiles).all()) {
      return 0.0;
    }
    throw std::invalid_argument("burning_rate_timederiv: distinct states at the same time");
  }
  if (elapsed < 0.0) {
    throw std::invalid_argument("burning_rate_timederiv: next precedes prev");
  }
  const Eigen::VectorXd delta = layer_masses(next) - layer_masses(prev);
  return sys.widths.dot(delta) / (sys.total_width() * elapsed);
}

double front_position(const LayerSystem& sys, const FrontState& state) {
  const Eigen::ArrayXd mean =
      (state.profiles.matrix() * sys.widths).array() / sys.total_width();
  for (Index i = state.n_points() - 1; i-- > 0;) {
    const double left = mean[i];
    const double right = mean[i + 1];
    if (left >= 0.5 && right < 0.5) {
      const double fraction = (left - 0.5) / (left - right);
      return state.x(i) + fraction * state.dx;
    }
  }
  throw FrontNotFoundError("mean profile does not cross 1/2 inside the window");
}

double time_average(const std::vector<double>& times, const std::vector<double>& values,
                    double t_lo, double t_hi) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("time_average: times and values differ in length");
  }
  if (!(t_lo < t_hi)) throw std::invalid_argument("time_average: empty interval");
  if (times.empty()) throw std::out_of_range("time_average: empty trace");
  const double slack = 1e-9 * std::max(1.0, std::abs(times.back()));
  if (t_lo < times.front() - slack || t_hi > times.back() + slack) {
    std::ostringstream os;
    os << "time_average: [" << t_lo << ", " << t_hi << "] outside sampled range ["
       << times.front() << ", " << times.back() << "]";
    throw std::out_of_range(os.str());
  }
  t_lo = std::max(t_lo, times.front());
  t_hi = std::min(t_hi, times.back());

  auto value_at = [&](double t) {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return values.front();
    if (it == times.end()) return values.back();
    const auto k = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * values[k - 1] + w * values[k];
  };

  double integral = 0.0;
  double t_prev = t_lo;
  double v_prev = value_at(t_lo);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] <= t_lo) continue;
    if (times[k] >= t_hi) break;
    integral += 0.5 * (v_prev + values[k]) * (times[k] - t_prev);
    t_prev = times[k];
    v_prev = values[k];
  }
  integral += 0.5 * (v_prev + value_at(t_hi)) * (t_hi - t_prev);
  return integral / (t_hi - t_lo);
}

double time_average(const BurnTrace& trace, double t_lo, double t_hi) {
  return time_average(trace.times, trace.v_reaction, t_lo, t_hi);
}

EnvelopeMargin check_envelope(const LayerSystem& sys, const FrontState& state,
                              const DecayEnvelope& env, double relative_slack) {
  (void)sys;
  const Eigen::ArrayXd x = state.grid();
  const double t = state.time;
  const Eigen::ArrayXd leading = (1.0 + relative_slack) * env.c0 * (-env.lambda * (x - env.c1 * t)).exp();
  const Eigen::ArrayXd trailing = env.c0 * (env.lambda * (x + env.c1 * t)).exp();

  EnvelopeMargin margin{-std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity()};
  for (Index j = 0; j < state.n_layers(); ++j) {
    const auto col = state.profiles.col(j);
    margin.leading = std::max(margin.leading, (col - leading).maxCoeff());
    margin.trailing = std::max(margin.trailing, ((1.0 - col) - trailing).maxCoeff());
  }
  return margin;
}

void TraceRecorder::record(const FrontState& state) {
  const Eigen::VectorXd masses = layer_masses(state);
  const double v_reaction = burning_rate_reaction(sys_, state);
  const double front = front_position(sys_, state);

  trace_.times.push_back(state.time);
  trace_.v_reaction.push_back(v_reaction);
  trace_.front_pos.push_back(front);
  if (trace_.times.size() == 1) {
    trace_.v_timederiv.push_back(0.0);
  } else {
    const double v = sys_.widths.dot(masses - last_masses_) /
                     (sys_.total_width() * (state.time - last_time_));
    trace_.v_timederiv.push_back(v);
    // The first sample has no predecessor; give it the first forward difference.
    if (trace_.times.size() == 2) trace_.v_timederiv.front() = v;
  }
  last_masses_ = masses;
  last_time_ = state.time;
}

}  // namespace frontburn
