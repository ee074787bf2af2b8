#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frontburn/bounds.hpp"
#include "frontburn/core.hpp"
#include "frontburn/diagnostics.hpp"
#include "frontburn/solver.hpp"

namespace frontburn {

/// One experiment: a sweep over drift strengths A and couplings kappa.
///
/// Parsed from flat `key = value` text; `#` starts a comment. List keys take
/// comma-separated values, and repeating `sweep_A` or `sweep_kappa` appends.
struct ExperimentConfig {
  int n_layers = 2;
  /// Per-layer drift multipliers; empty means alternating +1, -1, ...
  std::vector<double> drift_pattern;
  /// Per-layer widths; empty means all 1.
  std::vector<double> widths;
  std::vector<double> sweep_A;
  std::vector<double> sweep_kappa;

  double dx = 0.05;
  double dt = 0.005;
  /// Window extent behind and ahead of the initial front; 0 sizes it from
  /// the linearized front.
  double window_behind = 0.0;
  double window_ahead = 0.0;
  int recenter_every = 10;
  int boundary_pad = 4;
  /// Decay rate of the initial sigmoid.
  double lambda = 1.0;

  double t_transient = 20.0;
  double t_end = 120.0;
  /// Averaging horizon of the bound checks; defaults to t_end.
  std::optional<double> tau;
  std::uint64_t seed = 1;

  double c_two_layer = kTwoLayerConstant;
  double c_multi_layer = kTwoLayerConstant;

  /// Diagnostics are evaluated every this many solver steps.
  int sample_every = 5;
  /// Every this many diagnostic samples one trace row is written.
  int trace_stride = 20;
  std::string output_dir = "frontburn_out";
  bool write_traces = true;
  bool record_wall_time = true;

  double horizon() const { return tau.value_or(t_end); }
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

/// Applies one `key = value` setting. Throws std::invalid_argument on an
/// unknown key or a malformed value.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Like apply_setting, but list keys replace rather than append.
void override_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Every key accepted by apply_setting.
const std::vector<std::string>& config_keys();

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The layer system of one sweep point: pattern scaled by A, then balanced.
LayerSystem make_system(const ExperimentConfig& cfg, double drift, double kappa);

struct SweepRow {
  double A = 0.0;
  double kappa = 0.0;
  double v_avg = 0.0;
  double v_std = 0.0;
  double bound_two_layer = 0.0;
  double bound_multi_layer = 0.0;
  bool genbound_pass = false;
  double wall_time_s = 0.0;
};

/// Everything produced by one sweep point.
struct RunOutcome {
  SweepRow row;
  BurnTrace trace;
  std::vector<BoundReport> reports;
  /// Post-transient average of the time-derivative route.
  double v_timederiv_avg = 0.0;
  double max_clamp = 0.0;
  long steps = 0;
  std::vector<std::string> warnings;

  bool bounds_pass() const;
};

/// Simulates one (A, kappa) point. Errors carry the offending pair.
RunOutcome run_point(const ExperimentConfig& cfg, double drift, double kappa);

/// Worker count from FRONTBURN_THREADS, else the hardware concurrency.
unsigned default_thread_count();

/// All sweep points, ordered by (kappa, A). Results do not depend on the
/// number of threads.
std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares of v_avg against A. Throws std::invalid_argument
/// with fewer than three distinct A values.
SlopeFit fit_slope(const std::vector<SweepRow>& rows);

struct SlopeRow {
  double kappa = 0.0;
  SlopeFit fit;
};

/// One fit per kappa having at least three distinct A values, by kappa.
std::vector<SlopeRow> fit_slopes(const std::vector<SweepRow>& rows);

inline constexpr const char* kSweepHeader =
    "A,kappa,v_avg,v_std,bound_two_layer,bound_multi_layer,genbound_pass,wall_time_s";
inline constexpr const char* kSlopeHeader = "kappa,slope,intercept,r2";
inline constexpr const char* kTraceHeader = "t,v_reaction,v_timederiv,front_pos";

/// 12 significant digits.
std::string format_number(double value);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_slopes_csv(std::ostream& out, const std::vector<SlopeRow>& slopes);
/// Writes every stride-th sample.
void write_trace_csv(std::ostream& out, const BurnTrace& trace, int stride = 1);

/// Throws std::runtime_error on a wrong header or malformed row.
std::vector<SweepRow> read_sweep_csv(std::istream& in);

std::string trace_file_name(double drift, double kappa);

/// Writes sweep.csv, slopes.csv and (optionally) one trace file per point.
/// Throws std::runtime_error on I/O failure.
void emit_reports(const std::vector<RunOutcome>& outcomes, const std::filesystem::path& dir,
                  int trace_stride = 1, bool write_traces = true);

}  // namespace frontburn
