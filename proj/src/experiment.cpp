#include "frontburn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "frontburn/front_analysis.hpp"

namespace frontburn {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) {
    throw std::invalid_argument("config: " + key + " expects a number, got '" + text + "'");
  }
  return value;
}

long parse_integer(const std::string& key, const std::string& text) {
  const double value = parse_double(key, text);
  if (value != std::floor(value)) {
    throw std::invalid_argument("config: " + key + " expects an integer, got '" + text + "'");
  }
  return static_cast<long>(value);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw std::invalid_argument("config: " + key + " expects true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    values.push_back(parse_double(key, item));
  }
  return values;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"n_layers", [](auto& c, auto& k, auto& v) { c.n_layers = static_cast<int>(parse_integer(k, v)); }},
      {"drift_pattern", [](auto& c, auto& k, auto& v) { c.drift_pattern = parse_list(k, v); }},
      {"widths", [](auto& c, auto& k, auto& v) { c.widths = parse_list(k, v); }},
      {"sweep_A",
       [](auto& c, auto& k, auto& v) {
         const auto more = parse_list(k, v);
         c.sweep_A.insert(c.sweep_A.end(), more.begin(), more.end());
       }},
      {"sweep_kappa",
       [](auto& c, auto& k, auto& v) {
         const auto more = parse_list(k, v);
         c.sweep_kappa.insert(c.sweep_kappa.end(), more.begin(), more.end());
       }},
      {"dx", [](auto& c, auto& k, auto& v) { c.dx = parse_double(k, v); }},
      {"dt", [](auto& c, auto& k, auto& v) { c.dt = parse_double(k, v); }},
      {"window_behind", [](auto& c, auto& k, auto& v) { c.window_behind = parse_double(k, v); }},
      {"window_ahead", [](auto& c, auto& k, auto& v) { c.window_ahead = parse_double(k, v); }},
      {"recenter_every", [](auto& c, auto& k, auto& v) { c.recenter_every = static_cast<int>(parse_integer(k, v)); }},
      {"boundary_pad", [](auto& c, auto& k, auto& v) { c.boundary_pad = static_cast<int>(parse_integer(k, v)); }},
      {"lambda", [](auto& c, auto& k, auto& v) { c.lambda = parse_double(k, v); }},
      {"t_transient", [](auto& c, auto& k, auto& v) { c.t_transient = parse_double(k, v); }},
      {"t_end", [](auto& c, auto& k, auto& v) { c.t_end = parse_double(k, v); }},
      {"tau", [](auto& c, auto& k, auto& v) { c.tau = parse_double(k, v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(parse_integer(k, v)); }},
      {"c_two_layer", [](auto& c, auto& k, auto& v) { c.c_two_layer = parse_double(k, v); }},
      {"c_multi_layer", [](auto& c, auto& k, auto& v) { c.c_multi_layer = parse_double(k, v); }},
      {"sample_every", [](auto& c, auto& k, auto& v) { c.sample_every = static_cast<int>(parse_integer(k, v)); }},
      {"trace_stride", [](auto& c, auto& k, auto& v) { c.trace_stride = static_cast<int>(parse_integer(k, v)); }},
      {"output_dir", [](auto& c, auto&, auto& v) { c.output_dir = trim(v); }},
      {"write_traces", [](auto& c, auto& k, auto& v) { c.write_traces = parse_bool(k, v); }},
      {"record_wall_time", [](auto& c, auto& k, auto& v) { c.record_wall_time = parse_bool(k, v); }},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (n_layers < 2) fail("n_layers must be at least 2");
  if (!drift_pattern.empty() && drift_pattern.size() != static_cast<std::size_t>(n_layers)) {
    fail("drift_pattern needs n_layers entries");
  }
  if (!widths.empty() && widths.size() != static_cast<std::size_t>(n_layers)) {
    fail("widths needs n_layers entries");
  }
  if (std::any_of(widths.begin(), widths.end(), [](double h) { return !(h > 0.0); })) {
    fail("widths must be positive");
  }
  if (sweep_A.empty()) fail("sweep_A is empty");
  if (sweep_kappa.empty()) fail("sweep_kappa is empty");
  if (std::any_of(sweep_A.begin(), sweep_A.end(), [](double a) { return !(a >= 0.0); })) {
    fail("sweep_A values must be nonnegative");
  }
  if (std::any_of(sweep_kappa.begin(), sweep_kappa.end(), [](double k) { return !(k > 0.0); })) {
    fail("sweep_kappa values must be positive");
  }
  if (!(dx > 0.0) || !(dt > 0.0)) fail("dx and dt must be positive");
  if (window_behind < 0.0 || window_ahead < 0.0) fail("window extents must be nonnegative");
  if ((window_behind > 0.0) != (window_ahead > 0.0)) {
    fail("set both window_behind and window_ahead, or neither");
  }
  if (!(lambda > 0.0)) fail("lambda must be positive");
  if (!(t_transient >= 0.0 && t_transient < t_end)) fail("need 0 <= t_transient < t_end");
  if (tau && !(*tau > 0.0 && *tau <= t_end)) fail("tau must lie in (0, t_end]");
  if (sample_every < 1 || trace_stride < 1) fail("sample_every and trace_stride must be >= 1");
  if (!(c_two_layer > 0.0) || !(c_multi_layer > 0.0)) fail("bound constants must be positive");
  SolverConfig solver;
  solver.dt = dt;
  solver.recenter_every = recenter_every;
  solver.boundary_pad = boundary_pad;
  solver.validate();
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
  it->second(cfg, key, value);
}

void override_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "sweep_A") cfg.sweep_A.clear();
  if (key == "sweep_kappa") cfg.sweep_kappa.clear();
  apply_setting(cfg, key, value);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [key, setter] : setters()) out.push_back(key);
    return out;
  }();
  return keys;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
    }
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse_config(in);
}

LayerSystem make_system(const ExperimentConfig& cfg, double drift, double kappa) {
  const auto n = static_cast<Index>(cfg.n_layers);
  LayerSystem sys;
  sys.kappa = kappa;
  sys.widths = cfg.widths.empty()
                   ? Eigen::VectorXd::Ones(n)
                   : Eigen::Map<const Eigen::VectorXd>(cfg.widths.data(), n).eval();
  Eigen::VectorXd raw(n);
  for (Index j = 0; j < n; ++j) {
    const double pattern = cfg.drift_pattern.empty() ? (j % 2 == 0 ? 1.0 : -1.0)
                                                     : cfg.drift_pattern[static_cast<std::size_t>(j)];
    raw[j] = drift * pattern;
  }
  sys.drifts = balance_drifts(raw, sys.widths);
  return sys;
}

bool RunOutcome::bounds_pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.pass; });
}

RunOutcome run_point(const ExperimentConfig& cfg, double drift, double kappa) {
  const auto started = std::chrono::steady_clock::now();
  std::ostringstream where;
  where << "(A = " << drift << ", kappa = " << kappa << ")";

  try {
    const LayerSystem sys = make_system(cfg, drift, kappa);
    const ValidationResult check = validate_system(sys);
    if (!check.ok()) {
      throw std::invalid_argument("invalid system: " + check.violations.front().invariant);
    }

    WindowPlan plan{cfg.window_behind, cfg.window_ahead};
    if (plan.width() <= 0.0) plan = plan_window(sys);

    SolverConfig solver;
    solver.dt = cfg.dt;
    solver.recenter_every = cfg.recenter_every;
    solver.boundary_pad = cfg.boundary_pad;
    solver.recenter_target = plan.target_fraction();

    RunOutcome out;
    out.warnings = step_guard_warnings(sys, cfg.dx, cfg.dt);

    const FrontState initial = make_front_initial_data(sys, cfg.lambda, plan.window(cfg.dx));
    TraceRecorder recorder(sys);
    recorder.record(initial);
    long counter = 0;
    const RunResult result =
        run(sys, initial, solver, cfg.t_end, [&](double, const FrontState& state) {
          if (++counter % cfg.sample_every == 0) recorder.record(state);
        });
    if (recorder.trace().times.back() < result.state.time) recorder.record(result.state);

    out.trace = recorder.take();
    out.max_clamp = result.max_clamp;
    out.steps = result.steps;

    const double t_hi = out.trace.times.back();
    SweepRow& row = out.row;
    row.A = drift;
    row.kappa = kappa;
    row.v_avg = time_average(out.trace, cfg.t_transient, t_hi);
    std::vector<double> spread(out.trace.size());
    for (std::size_t k = 0; k < spread.size(); ++k) {
      spread[k] = std::pow(out.trace.v_reaction[k] - row.v_avg, 2);
    }
    row.v_std = std::sqrt(time_average(out.trace.times, spread, cfg.t_transient, t_hi));
    out.v_timederiv_avg = time_average(out.trace.times, out.trace.v_timederiv, cfg.t_transient, t_hi);

    out.reports = check_bounds(sys, out.trace, std::min(cfg.horizon(), t_hi),
                               {cfg.c_two_layer, cfg.c_multi_layer});
    for (const auto& r : out.reports) {
      if (r.kind == BoundKind::universal) row.genbound_pass = r.pass;
      if (r.kind == BoundKind::two_layer) row.bound_two_layer = r.rhs;
      if (r.kind == BoundKind::multi_layer) row.bound_multi_layer = r.rhs;
    }
    if (cfg.record_wall_time) {
      row.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    return out;
  } catch (const Error& e) {
    throw Error(where.str() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(where.str() + ": " + e.what());
  }
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("FRONTBURN_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  std::vector<std::pair<double, double>> points;
  std::set<double> kappas(cfg.sweep_kappa.begin(), cfg.sweep_kappa.end());
  std::set<double> drifts(cfg.sweep_A.begin(), cfg.sweep_A.end());
  for (double kappa : kappas) {
    for (double drift : drifts) points.emplace_back(drift, kappa);
  }

  std::vector<RunOutcome> outcomes(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        outcomes[i] = run_point(cfg, points[i].first, points[i].second);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = points.size();
      }
    }
  };

  if (threads == 0) threads = default_thread_count();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(points.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

SlopeFit fit_slope(const std::vector<SweepRow>& rows) {
  std::set<double> distinct;
  for (const auto& r : rows) distinct.insert(r.A);
  if (distinct.size() < 3) {
    throw std::invalid_argument("fit_slope: need at least three distinct A values");
  }
  const auto n = static_cast<Index>(rows.size());
  Eigen::ArrayXd a(n);
  Eigen::ArrayXd v(n);
  for (Index i = 0; i < n; ++i) {
    a[i] = rows[static_cast<std::size_t>(i)].A;
    v[i] = rows[static_cast<std::size_t>(i)].v_avg;
  }
  const Eigen::ArrayXd da = a - a.mean();
  const Eigen::ArrayXd dv = v - v.mean();
  SlopeFit fit;
  fit.slope = (da * dv).sum() / da.square().sum();
  fit.intercept = v.mean() - fit.slope * a.mean();
  const double ss_res = (v - fit.intercept - fit.slope * a).square().sum();
  const double ss_tot = dv.square().sum();
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::vector<SlopeRow> fit_slopes(const std::vector<SweepRow>& rows) {
  std::map<double, std::vector<SweepRow>> by_kappa;
  for (const auto& r : rows) by_kappa[r.kappa].push_back(r);
  std::vector<SlopeRow> out;
  for (const auto& [kappa, group] : by_kappa) {
    std::set<double> distinct;
    for (const auto& r : group) distinct.insert(r.A);
    if (distinct.size() < 3) continue;
    out.push_back({kappa, fit_slope(group)});
  }
  return out;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.A) << ',' << format_number(r.kappa) << ',' << format_number(r.v_avg)
        << ',' << format_number(r.v_std) << ',' << format_number(r.bound_two_layer) << ','
        << format_number(r.bound_multi_layer) << ',' << (r.genbound_pass ? 1 : 0) << ','
        << format_number(r.wall_time_s) << '\n';
  }
}

void write_slopes_csv(std::ostream& out, const std::vector<SlopeRow>& slopes) {
  out << kSlopeHeader << '\n';
  for (const auto& s : slopes) {
    out << format_number(s.kappa) << ',' << format_number(s.fit.slope) << ','
        << format_number(s.fit.intercept) << ',' << format_number(s.fit.r2) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const BurnTrace& trace, int stride) {
  out << kTraceHeader << '\n';
  const auto step = static_cast<std::size_t>(std::max(1, stride));
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (k % step != 0 && k + 1 != trace.size()) continue;
    out << format_number(trace.times[k]) << ',' << format_number(trace.v_reaction[k]) << ','
        << format_number(trace.v_timederiv[k]) << ',' << format_number(trace.front_pos[k]) << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kSweepHeader) {
    throw std::runtime_error("sweep csv: unexpected header");
  }
  std::vector<SweepRow> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) {
      throw std::runtime_error("sweep csv line " + std::to_string(number) + ": expected 8 fields");
    }
    try {
      SweepRow r;
      r.A = parse_double("A", cells[0]);
      r.kappa = parse_double("kappa", cells[1]);
      r.v_avg = parse_double("v_avg", cells[2]);
      r.v_std = parse_double("v_std", cells[3]);
      r.bound_two_layer = parse_double("bound_two_layer", cells[4]);
      r.bound_multi_layer = parse_double("bound_multi_layer", cells[5]);
      r.genbound_pass = parse_bool("genbound_pass", cells[6]);
      r.wall_time_s = parse_double("wall_time_s", cells[7]);
      rows.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("sweep csv line " + std::to_string(number) + ": " + e.what());
    }
  }
  return rows;
}

std::string trace_file_name(double drift, double kappa) {
  return "trace_A" + format_number(drift) + "_kappa" + format_number(kappa) + ".csv";
}

namespace {

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void emit_reports(const std::vector<RunOutcome>& outcomes, const std::filesystem::path& dir,
                  int trace_stride, bool write_traces) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  std::vector<SweepRow> rows;
  for (const auto& o : outcomes) rows.push_back(o.row);
  write_file(dir / "sweep.csv", [&](std::ostream& out) { write_sweep_csv(out, rows); });
  write_file(dir / "slopes.csv", [&](std::ostream& out) { write_slopes_csv(out, fit_slopes(rows)); });
  if (!write_traces) return;
  for (const auto& o : outcomes) {
    write_file(dir / trace_file_name(o.row.A, o.row.kappa),
               [&](std::ostream& out) { write_trace_csv(out, o.trace, trace_stride); });
  }
}

}  // namespace frontburn
