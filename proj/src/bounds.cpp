#include "frontburn/bounds.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace frontburn {

double bound_multi_layer(const LayerSystem& sys, double tau, double constant) {
  const Index n = sys.n_layers();
  double jumps = 0.0;
  for (Index j = 0; j < n; ++j) {
    const Index prev = (j + n - 1) % n;
    jumps += std::abs(sys.drifts[prev] - sys.drifts[j]) * sys.widths[j];
  }
  const double r1 = sys.r1();
  const double kappa = sys.kappa;
  const double denom =
      1.0 / (kappa * tau * tau) + 1.0 / (kappa * tau) + r1 / tau + kappa * r1 + 1.0;
  return constant / (sys.total_width() * sys.r2()) * jumps / denom;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::universal:
      return "universal";
    case BoundKind::two_layer:
      return "two_layer";
    case BoundKind::multi_layer:
      return "multi_layer";
  }
  return "unknown";
}

bool passes_with_tolerance(double measured, double rhs) {
  return measured - rhs >= -kBoundTolerance * std::abs(rhs);
}

bool is_two_layer_system(const LayerSystem& sys) {
  return sys.n_layers() == 2 && sys.widths[0] == 1.0 && sys.widths[1] == 1.0;
}

std::vector<BoundReport> check_bounds(const LayerSystem& sys, const BurnTrace& trace, double tau,
                                      const BoundConstants& constants) {
  if (trace.empty()) throw std::out_of_range("check_bounds: empty trace");
  if (!(tau > 0.0)) throw std::invalid_argument("check_bounds: tau must be positive");
  const double slack = 1e-9 * std::max(1.0, tau);
  if (trace.times.front() > slack || trace.times.back() < tau - slack) {
    std::ostringstream os;
    os << "check_bounds: trace covers [" << trace.times.front() << ", " << trace.times.back()
       << "], need [0, " << tau << "]";
    throw std::out_of_range(os.str());
  }

  std::vector<BoundReport> reports;

  BoundReport universal;
  universal.kind = BoundKind::universal;
  universal.tau = tau;
  universal.pass = true;
  const double v0 = trace.v_reaction.front();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double t = trace.times[k];
    if (t > tau + slack) break;
    const double rhs = bound_universal(v0, t - trace.times.front());
    const double measured = trace.v_reaction[k] * trace.v_reaction[k];
    const double relative = (measured - rhs) / std::abs(rhs);
    if (!passes_with_tolerance(measured, rhs)) universal.pass = false;
    if (relative < worst) {
      worst = relative;
      universal.rhs = rhs;
      universal.measured = measured;
      universal.margin = measured - rhs;
      universal.worst_time = t;
    }
  }
  reports.push_back(universal);

  const double average = time_average(trace, trace.times.front(), tau);

  if (is_two_layer_system(sys)) {
    BoundReport two;
    two.kind = BoundKind::two_layer;
    two.tau = tau;
    two.rhs = bound_two_layer(std::abs(sys.drifts[0]), sys.kappa, tau, constants.two_layer);
    two.measured = average;
    two.margin = average - two.rhs;
    two.pass = passes_with_tolerance(two.measured, two.rhs);
    two.unverified_constant = constants.two_layer > kTwoLayerConstant;
    reports.push_back(two);
  }

  BoundReport multi;
  multi.kind = BoundKind::multi_layer;
  multi.tau = tau;
  multi.rhs = bound_multi_layer(sys, tau, constants.multi_layer);
  multi.measured = average;
  multi.margin = average - multi.rhs;
  multi.pass = passes_with_tolerance(multi.measured, multi.rhs);
  // No explicit value of the multi-layer constant is proven.
  multi.unverified_constant = true;
  reports.push_back(multi);

  return reports;
}

}  // namespace frontburn
