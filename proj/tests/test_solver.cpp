#include <cmath>
#include <limits>

#include "doctest.h"
#include "frontburn/diagnostics.hpp"
#include "frontburn/experiment.hpp"
#include "frontburn/front_analysis.hpp"
#include "frontburn/solver.hpp"

using namespace frontburn;

namespace {

LayerSystem pair_system(double drift, double kappa) {
  return LayerSystem::uniform((Eigen::VectorXd(2) << drift, -drift).finished(), kappa);
}

FrontState constant_state(double value, Index n, Index layers) {
  FrontState s;
  s.dx = 0.05;
  s.window_offset = -10.0;
  s.profiles = Eigen::ArrayXXd::Constant(n, layers, value);
  return s;
}

// Independent reference: forward Euler for T_t = T_xx + T(1 - T) on a fixed
// coarse grid, front located where T crosses 1/2.
double explicit_kpp_speed(double t_lo, double t_hi) {
  const double dx = 0.2;
  const double dt = 0.01;
  const double x_lo = -20.0;
  const int n = static_cast<int>(2.0 * t_hi / dx + 200);
  std::vector<double> t(static_cast<std::size_t>(n)), next(t.size());
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = 1.0 / (1.0 + std::exp(x_lo + i * dx));
  auto crossing = [&] {
    for (int i = n - 2; i >= 0; --i) {
      const double a = t[static_cast<std::size_t>(i)];
      const double b = t[static_cast<std::size_t>(i + 1)];
      if (a >= 0.5 && b < 0.5) return x_lo + (i + (a - 0.5) / (a - b)) * dx;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  double x_at_lo = std::numeric_limits<double>::quiet_NaN();
  const int steps = static_cast<int>(std::lround(t_hi / dt));
  for (int k = 1; k <= steps; ++k) {
    next.front() = 1.0;
    next.back() = 0.0;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
      next[i] = t[i] + dt * ((t[i - 1] - 2 * t[i] + t[i + 1]) / (dx * dx) + t[i] * (1 - t[i]));
    }
    std::swap(t, next);
    if (k == std::lround(t_lo / dt)) x_at_lo = crossing();
  }
  return (crossing() - x_at_lo) / (t_hi - t_lo);
}

}  // namespace

TEST_CASE("zero state is a fixed point") {
  const auto sys = pair_system(7.0, 0.5);
  const auto state = constant_state(0.0, 400, 2);
  auto [next, report] = step(sys, state, SolverConfig{});
  CHECK((next.profiles == 0.0).all());
  CHECK(report.max_clamp == 0.0);
  CHECK(next.time == doctest::Approx(0.005));
}

TEST_CASE("burnt state is a fixed point") {
  const auto sys = pair_system(7.0, 0.5);
  FrontState state = constant_state(1.0, 400, 2);
  for (int k = 0; k < 50; ++k) state = step(sys, state, SolverConfig{}).first;
  CHECK((state.profiles == 1.0).all());
}

TEST_CASE("KPP front moves at speed 2, confirmed by an explicit reference") {
  const auto sys = pair_system(0.0, 1.0);
  const auto plan = plan_window(sys);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.recenter_target = plan.target_fraction();
  const auto initial = make_front_initial_data(sys, 1.0, plan.window(0.05));
  TraceRecorder recorder(sys);
  double max_clamp_seen = 0.0;
  const auto result = run(sys, initial, cfg, 80.0, [&](double t, const FrontState& s) {
    if (std::abs(t - 40.0) < 1e-9 || std::abs(t - 80.0) < 1e-9) recorder.record(s);
  });
  max_clamp_seen = result.max_clamp;
  const auto& trace = recorder.trace();
  REQUIRE(trace.size() == 2);
  const double speed = (trace.front_pos[1] - trace.front_pos[0]) / 40.0;
  const double reference = explicit_kpp_speed(40.0, 80.0);
  CHECK(speed == doctest::Approx(2.0).epsilon(0.05));
  CHECK(reference == doctest::Approx(2.0).epsilon(0.05));
  CHECK(speed == doctest::Approx(reference).epsilon(0.02));
  CHECK(max_clamp_seen <= 1e-8);
  CHECK(result.total_shift > 0);
}

TEST_CASE("recenter examples") {
  const auto sys = pair_system(0.0, 1.0);
  SolverConfig cfg;
  const auto state = make_front_initial_data(sys, 1.0, {-30, 30, 0.05});

  auto [same, none] = recenter(sys, state, cfg);
  CHECK(none == 0);
  CHECK(same.window_offset == state.window_offset);
  CHECK((same.profiles == state.profiles).all());

  const auto moved_front = make_front_initial_data(sys, 1.0, {-40, 20, 0.05});
  auto [moved, shift] = recenter(sys, moved_front, cfg);
  CHECK(shift == 200);  // front 10 length units = 200 cells right of the middle
  CHECK(moved.window_offset == doctest::Approx(moved_front.window_offset + 200 * 0.05));
  const double relative = (front_position(sys, moved) - moved.window_offset) / moved.width();
  CHECK(std::abs(relative - 0.5) * moved.width() <= moved.dx);
  CHECK(moved.profiles(moved.n_points() - 1, 0) == 0.0);

  cfg.recenter_target = 0.25;
  auto [left, back] = recenter(sys, state, cfg);
  CHECK(back == 300);
  const double rel = (front_position(sys, left) - left.window_offset) / left.width();
  CHECK(std::abs(rel - 0.25) * left.width() <= left.dx);

  cfg.recenter_target = 0.75;
  auto [right, ahead] = recenter(sys, state, cfg);
  CHECK(ahead == -300);
  CHECK(right.profiles(0, 1) == 1.0);
}

TEST_CASE("recenter without a front fails") {
  const auto sys = pair_system(0.0, 1.0);
  CHECK_THROWS_AS(recenter(sys, constant_state(0.0, 100, 2), SolverConfig{}), FrontNotFoundError);
}

TEST_CASE("run step counts") {
  const auto sys = pair_system(1.0, 1.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  const auto state = make_front_initial_data(sys, 1.0, {-25, 25, 0.05});

  int calls = 0;
  const auto empty = run(sys, state, cfg, state.time, [&](double, const FrontState&) { ++calls; });
  CHECK(calls == 0);
  CHECK(empty.steps == 0);
  CHECK((empty.state.profiles == state.profiles).all());

  double last_time = 0.0;
  const auto result = run(sys, state, cfg, 1.0, [&](double t, const FrontState& s) {
    ++calls;
    CHECK(t == s.time);
    last_time = t;
  });
  CHECK(calls == 100);
  CHECK(result.steps == 100);
  CHECK(last_time == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(result.state.time == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("identical layers without drift stay identical") {
  const auto sys = pair_system(0.0, 1.0);
  SolverConfig cfg;
  const auto state = make_front_initial_data(sys, 1.0, {-25, 35, 0.05});
  double worst = 0.0;
  run(sys, state, cfg, 10.0, [&](double, const FrontState& s) {
    worst = std::max(worst, (s.profiles.col(0) - s.profiles.col(1)).abs().maxCoeff());
  });
  CHECK(worst <= 1e-12);
}

TEST_CASE("layer swap with reflection is a symmetry for opposite drifts") {
  // T1(x) = T2(-x) initially; the swap maps drift A to -A, so it persists.
  const auto sys = pair_system(3.0, 0.7);
  FrontState state;
  state.dx = 0.05;
  state.window_offset = -30.0;
  state.profiles.resize(1201, 2);
  for (Index i = 0; i < state.n_points(); ++i) {
    const double x = state.x(i);
    state.profiles(i, 0) = 0.8 * std::exp(-(x - 2.0) * (x - 2.0) / 4.0) * (1.0 + 0.3 * std::sin(x));
    state.profiles(i, 1) = 0.8 * std::exp(-(x + 2.0) * (x + 2.0) / 4.0) * (1.0 - 0.3 * std::sin(x));
  }
  const CrankNicolsonStepper stepper(sys, 0.05, 0.005, state.n_points());
  FrontState current = state;
  FrontState next;
  for (int k = 1; k <= 400; ++k) {
    stepper.advance_into(current, next);
    std::swap(current, next);
  }
  const Eigen::ArrayXd mirrored = current.profiles.col(1).reverse();
  CHECK((current.profiles.col(0) - mirrored).abs().maxCoeff() <= 1e-10 * current.time);
  CHECK(current.time == doctest::Approx(2.0));
  CHECK((current.profiles.col(0) - state.profiles.col(0)).abs().maxCoeff() > 0.1);
}

TEST_CASE("solution stays under the decay envelope") {
  for (double drift : {0.0, 5.0, 20.0}) {
    const auto sys = pair_system(drift, 0.5);
    const double lambda = 1.0;
    const DecayEnvelope env{1.0, lambda, decay_speed_bound(sys, lambda)};
    REQUIRE(env.admissible_for(sys));
    const auto plan = plan_window(sys);
    SolverConfig cfg;
    cfg.recenter_target = plan.target_fraction();
    const auto state = make_front_initial_data(sys, lambda, plan.window(0.05));
    double worst_leading = -1.0;
    double worst_trailing = -1.0;
    long calls = 0;
    const auto result = run(sys, state, cfg, 10.0, [&](double, const FrontState& s) {
      if (++calls % 20 != 0) return;
      const auto margin = check_envelope(sys, s, env, kEnvelopeSlack);
      worst_leading = std::max(worst_leading, margin.leading);
      worst_trailing = std::max(worst_trailing, margin.trailing);
    });
    CHECK(worst_leading < 0.0);
    CHECK(worst_trailing < kUnitRoundoff);
    CHECK(result.max_clamp <= 1e-8);
  }
}

TEST_CASE("front hitting the window edge is reported") {
  const auto sys = pair_system(0.0, 1.0);
  SolverConfig cfg;
  cfg.recenter_every = 1000000;
  const auto state = make_front_initial_data(sys, 1.0, {-20, 20, 0.05});
  CHECK_THROWS_AS(run(sys, state, cfg, 20.0), WindowAdequacyError);
}

TEST_CASE("stepper rejects mismatched states") {
  const auto sys = pair_system(1.0, 1.0);
  const CrankNicolsonStepper stepper(sys, 0.05, 0.005, 100);
  CHECK_THROWS_AS(stepper.advance(constant_state(0.0, 101, 2)), GridMismatchError);
  CHECK_THROWS_AS(stepper.advance(constant_state(0.0, 100, 3)), GridMismatchError);
  CHECK_THROWS_AS(CrankNicolsonStepper(sys, 0.05, 0.005, 10), WindowAdequacyError);
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.recenter_target = 0.95;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.recenter_target = 0.5;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("step guard warnings") {
  CHECK(step_guard_warnings(pair_system(5.0, 1.0), 0.05, 0.005).empty());
  CHECK(step_guard_warnings(pair_system(20.0, 1.0), 0.05, 0.005).size() == 1);
  CHECK(step_guard_warnings(pair_system(0.0, 100.0), 0.05, 0.005).size() == 1);
}

TEST_CASE("halving dx and dt changes the averaged rate by under 2%") {
  ExperimentConfig cfg;
  cfg.t_transient = 20.0;
  cfg.t_end = 60.0;
  cfg.record_wall_time = false;
  const auto coarse = run_point(cfg, 10.0, 0.5);
  cfg.dx /= 2;
  cfg.dt /= 2;
  const auto fine = run_point(cfg, 10.0, 0.5);
  CHECK(std::abs(fine.row.v_avg - coarse.row.v_avg) <= 0.02 * fine.row.v_avg);
  CHECK(coarse.max_clamp <= 1e-8);
  CHECK(fine.max_clamp <= 1e-8);
}
