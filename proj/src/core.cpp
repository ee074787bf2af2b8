#include "frontburn/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace frontburn {

double LayerSystem::r1() const { return 1.0 + widths.cwiseInverse().maxCoeff(); }

double LayerSystem::r2() const {
  const Index n = widths.size();
  double ratio = 0.0;
  for (Index j = 0; j < n; ++j) {
    const Index prev = (j + n - 1) % n;
    ratio = std::max(ratio, widths[j] / widths[prev]);
  }
  return 1.0 + ratio;
}

LayerSystem LayerSystem::uniform(Eigen::VectorXd drifts, double kappa) {
  LayerSystem sys;
  sys.widths = Eigen::VectorXd::Ones(drifts.size());
  sys.drifts = std::move(drifts);
  sys.kappa = kappa;
  return sys;
}

bool ValidationResult::has(const std::string& invariant) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.invariant == invariant; });
}

ValidationResult validate_system(const LayerSystem& sys) {
  ValidationResult result;
  auto add = [&](std::string name, std::optional<Index> index, std::string detail) {
    result.violations.push_back({std::move(name), index, std::move(detail)});
  };

  const Index n = sys.drifts.size();
  if (n < 2) {
    add("at least two layers", std::nullopt, "N = " + std::to_string(n));
  }
  if (sys.widths.size() != n) {
    add("matching lengths", std::nullopt,
        "drifts has " + std::to_string(n) + " entries, widths " +
            std::to_string(sys.widths.size()));
    return result;
  }
  for (Index j = 0; j < n; ++j) {
    if (!(sys.widths[j] > 0.0) || !std::isfinite(sys.widths[j])) {
      add("widths positive", j, "h = " + std::to_string(sys.widths[j]));
    }
    if (!std::isfinite(sys.drifts[j])) {
      add("drifts finite", j, "A = " + std::to_string(sys.drifts[j]));
    }
  }
  if (!(sys.kappa > 0.0) || !std::isfinite(sys.kappa)) {
    add("kappa positive", std::nullopt, "kappa = " + std::to_string(sys.kappa));
  }
  if (n > 0) {
    const double net = sys.widths.dot(sys.drifts);
    const double scale = sys.widths.dot(sys.drifts.cwiseAbs());
    if (std::abs(net) > kFlowTolerance * scale) {
      std::ostringstream os;
      os << "sum h_j A_j = " << net;
      add("mean-zero flow", std::nullopt, os.str());
    }
  }
  return result;
}

Eigen::VectorXd balance_drifts(const Eigen::VectorXd& raw, const Eigen::VectorXd& widths) {
  if (raw.size() != widths.size()) {
    throw std::invalid_argument("balance_drifts: drifts and widths differ in length");
  }
  if ((widths.array() <= 0.0).any()) {
    throw std::invalid_argument("balance_drifts: widths must be positive");
  }
  const double mean = widths.dot(raw) / widths.sum();
  return (raw.array() - mean).matrix();
}

Eigen::ArrayXd FrontState::grid() const {
  const Index n = n_points();
  return window_offset + Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) * dx;
}

bool within_unit_interval(const FrontState& state, double tol) {
  return (state.profiles >= -tol).all() && (state.profiles <= 1.0 + tol).all();
}

bool is_front_like(const FrontState& state, double delta) {
  if (state.n_points() < 2) return false;
  const Index last = state.n_points() - 1;
  return (state.profiles.row(0) >= 1.0 - delta).all() &&
         (state.profiles.row(last) <= delta).all();
}

FrontState make_front_initial_data(const LayerSystem& sys, double lambda, const Window& window) {
  if (!(lambda > 0.0)) throw std::invalid_argument("initial data: lambda must be positive");
  if (!(window.dx > 0.0)) throw std::invalid_argument("initial data: dx must be positive");
  if (!(window.x_lo < 0.0 && 0.0 < window.x_hi)) {
    throw std::invalid_argument("initial data: window must straddle x = 0");
  }

  const auto n = static_cast<Index>(std::llround((window.x_hi - window.x_lo) / window.dx)) + 1;
  FrontState state;
  state.dx = window.dx;
  state.window_offset = window.x_lo;
  state.time = 0.0;

  state.profiles.resize(n, sys.n_layers());
  const Eigen::ArrayXd x = state.grid();
  // Ahead of the front E / (1 + E) with E = exp(-lambda x) rounds to at most E.
  const Eigen::ArrayXd decay = (-lambda * x.max(0.0)).exp();
  const Eigen::ArrayXd sigmoid =
      (x > 0.0).select(decay / (1.0 + decay), 1.0 / (1.0 + (lambda * x.min(0.0)).exp()));
  state.profiles = sigmoid.replicate(1, sys.n_layers());

  if (!is_front_like(state)) {
    std::ostringstream os;
    os << "initial data: window [" << window.x_lo << ", " << state.x_hi()
       << "] too narrow for lambda = " << lambda;
    throw WindowAdequacyError(os.str());
  }
  return state;
}

bool DecayEnvelope::admissible_for(const LayerSystem& sys) const {
  return c0 > 0.0 && lambda > 0.0 && c1 >= decay_speed_bound(sys, lambda);
}

double decay_speed_bound(const LayerSystem& sys, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("decay_speed_bound: lambda must be positive");
  return sys.max_abs_drift() + lambda + (1.0 + 2.0 * sys.max_alpha()) / lambda;
}

}  // namespace frontburn
