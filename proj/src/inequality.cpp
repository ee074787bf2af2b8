#include "frontburn/inequality.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "frontburn/quadrature.hpp"

namespace frontburn {

double Profile::value_at(double xq) const {
  if (size() == 0) throw std::logic_error("profile is empty");
  const double s = (xq - x_lo) / dx;
  if (s <= 0.0) return s < 0.0 ? 1.0 : values[0];
  const auto last = static_cast<double>(size() - 1);
  if (s >= last) return s > last ? 0.0 : values[size() - 1];
  const auto i = static_cast<Index>(std::floor(s));
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

bool Profile::admissible(double edge_tol) const {
  return size() >= 2 && (values >= 0.0).all() && (values <= 1.0).all() &&
         values[0] >= 1.0 - edge_tol && values[size() - 1] <= edge_tol;
}

Profile sample_profile(const std::function<double(double)>& f, double x_lo, double x_hi,
                       double dx) {
  if (!(dx > 0.0) || !(x_hi > x_lo)) throw std::invalid_argument("sample_profile: bad grid");
  const auto n = static_cast<Index>(std::floor((x_hi - x_lo) / dx + 1e-9)) + 1;
  Profile p{x_lo, dx, Eigen::ArrayXd(n)};
  for (Index i = 0; i < n; ++i) p.values[i] = f(p.x(i));
  return p;
}

Profile resample(const Profile& p, double x_lo, double dx, Index n) {
  Profile out{x_lo, dx, Eigen::ArrayXd(n)};
  for (Index i = 0; i < n; ++i) out.values[i] = p.value_at(out.x(i));
  return out;
}

std::pair<Profile, Profile> align(const Profile& p, const Profile& q) {
  const double dx = std::min(p.dx, q.dx);
  const double lo = std::min(p.x_lo, q.x_lo);
  const double hi = std::max(p.x_hi(), q.x_hi());
  const auto n = static_cast<Index>(std::ceil((hi - lo) / dx - 1e-9)) + 1;
  return {resample(p, lo, dx, n), resample(q, lo, dx, n)};
}

FineqTerms fineq_product(const Profile& p) {
  const Eigen::ArrayXd slope = centered_derivative(p.values, p.dx);
  FineqTerms out;
  out.dirichlet = trapezoid(slope.square(), p.dx);
  out.reaction = trapezoid((p.values * (1.0 - p.values)).eval(), p.dx);
  out.product = out.dirichlet * out.reaction;
  return out;
}

double fineq_cauchy_schwarz_term(const Profile& p) {
  const Eigen::ArrayXd slope = centered_derivative(p.values, p.dx);
  const Eigen::ArrayXd weight = (p.values * (1.0 - p.values)).max(0.0).sqrt();
  return trapezoid((slope * weight).eval(), p.dx);
}

double extremal_value(double x) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (x <= -half_pi) return 1.0;
  if (x >= half_pi) return 0.0;
  return 0.5 * (1.0 - std::sin(x));
}

Profile extremal_profile(double dx) {
  if (!(dx > 0.0 && dx < std::numbers::pi / 4.0)) {
    throw std::invalid_argument("extremal_profile: dx must lie in (0, pi/4)");
  }
  const auto half = static_cast<Index>(std::ceil(std::numbers::pi / dx));
  Profile p{-static_cast<double>(half) * dx, dx, Eigen::ArrayXd(2 * half + 1)};
  for (Index i = 0; i < p.size(); ++i) {
    p.values[i] = extremal_value(static_cast<double>(i - half) * dx);
  }
  return p;
}

CouplingBound l1_coupling_bound(const Profile& p, const Profile& q) {
  if (p.size() != q.size() || p.dx != q.dx || p.x_lo != q.x_lo) {
    throw GridMismatchError("l1_coupling_bound: profiles live on different grids");
  }
  const Eigen::ArrayXd diff = p.values - q.values;
  const Eigen::ArrayXd reaction = p.values * (1.0 - p.values) + q.values * (1.0 - q.values);
  return {trapezoid(diff.abs(), p.dx),
          3.0 * (trapezoid(diff.square(), p.dx) + trapezoid(reaction, p.dx))};
}

Profile random_admissible_profile(std::uint64_t seed, double dx) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> center(-3.0, 3.0);
  std::uniform_real_distribution<double> rate(0.5, 5.0);
  std::uniform_real_distribution<double> amplitude(0.0, 0.9);
  std::uniform_real_distribution<double> frequency(0.2, 6.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  struct Sigmoid {
    double center;
    double rate;
  };
  std::vector<Sigmoid> factors(static_cast<std::size_t>(count(rng)));
  for (auto& f : factors) f = {center(rng), rate(rng)};
  const double amp = amplitude(rng);
  const double omega = frequency(rng);
  const double phi = phase(rng);

  // Each factor is within 1e-9 of its limit 20/rate from its center.
  double lo = std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& f : factors) {
    lo = std::min(lo, f.center - 20.0 / f.rate);
    hi = std::min(hi, f.center + 20.0 / f.rate);
  }

  auto shape = [&](double x) {
    double t = 1.0;
    for (const auto& f : factors) t *= 1.0 / (1.0 + std::exp(f.rate * (x - f.center)));
    return std::clamp(t + amp * std::sin(omega * x + phi) * t * (1.0 - t), 0.0, 1.0);
  };
  return sample_profile(shape, lo, hi, dx);
}

bool FineqSelftest::extremal_ok() const {
  return std::abs(extremal.product - kFineqConstant) <= kExtremalTolerance;
}

bool FineqSelftest::random_ok() const {
  return seeds == 0 || worst_ratio >= 1.0 - kFineqQuadratureTolerance;
}

FineqSelftest run_fineq_selftest(double dx, std::size_t seeds, std::uint64_t first_seed) {
  const auto started = std::chrono::steady_clock::now();
  FineqSelftest out;
  out.extremal = fineq_product(extremal_profile(dx));
  out.seeds = seeds;
  out.worst_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < seeds; ++k) {
    const std::uint64_t seed = first_seed + k;
    const double ratio = fineq_product(random_admissible_profile(seed, dx)).product / kFineqConstant;
    if (ratio < out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_seed = seed;
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace frontburn
