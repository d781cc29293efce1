#pragma once

#include "polytrack/common.hpp"
#include "polytrack/dictionary.hpp"
#include "polytrack/metrics.hpp"
#include "polytrack/motion.hpp"
#include "polytrack/scattering.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace polytrack {

/// Piecewise-constant driving inputs: speed rate and turn rate held for
/// `duration` seconds.
struct TrajectorySegment {
  double duration = 0.0;
  double s_dot = 0.0;
  double omega = 0.0;
};

struct TrajectoryConfig {
  KinematicState initial;
  std::vector<TrajectorySegment> segments;
};

/// Standard deviations; the filter squares them into diagonal covariances.
struct TrackerConfig {
  Vec6 q_std = (Vec6() << 1.0, 1.0, 0.05, 10.0, 0.1, 0.1).finished();
  Vec3 e_std = Vec3(10.0, 10.0, 5.0);
  Vec6 p0_std = (Vec6() << 10.0, 10.0, 0.5, 10.0, 1.0, 0.5).finished();
  bool init_from_truth = true;
};

struct ShaperConfig {
  double delta = 0.95;
  double delta_r = 1.0;  // isotropic inflation [m^2]
  int particles = 1000;
  std::uint64_t particle_seed = 424242;
  bool parallel = true;
};

struct MetricsConfig {
  double rho_min = 3.0;
  int iou_cells = 512;
  int chd_samples = 1024;
};

struct BenchConfig {
  std::vector<int> m_values{1, 10, 100, 1000};
  std::vector<int> particle_counts{1000, 10000, 100000};
  int vertex_count = 55;
  int fixed_m = 100;
  int mc_particles = 1000;
  double sigma = 1.0;
};

/// One experiment description; a single JSON document drives all three CLI
/// subcommands.
struct ScenarioConfig {
  std::uint64_t seed = 1;
  int runs = 1;
  int scans = 100;
  std::string dictionary_path;
  std::string true_class;
  Pose static_pose;  // classification experiments observe a static object
  std::vector<SensorConfig> sensors;
  TrajectoryConfig trajectory;
  TrackerConfig tracker;
  ShaperConfig shaper;
  MetricsConfig metrics;
  BenchConfig bench;
};

/// Parses the scenario JSON; relative dictionary paths resolve against the
/// config file's directory.
ScenarioConfig load_scenario(const std::string& path);

// ---- classification experiment (static object, known pose, per-scan MLE) ----

struct KindAccuracy {
  SensorKind kind = SensorKind::kContour;
  int correct = 0;
  int scans = 0;
  double accuracy = 0.0;
};

struct ClassificationReport {
  std::vector<KindAccuracy> per_kind;
  std::string csv;  // k,kind,m,mle_class,correct
};

ClassificationReport run_classification(const ScenarioConfig& cfg);

// ---- tracking experiment (Algorithms 1 + 2 chained per scan) ----

struct ScanRecord {
  int k = 0;
  double t = 0.0;
  KinematicState truth;
  KinematicState estimate;
  double npe = 0.0;
  double iou = 0.0;
  double chd = 0.0;
  int modal_class = -1;
  double p_true_class = 0.0;
};

struct RunResult {
  int run = 0;
  bool diverged = false;
  std::vector<ScanRecord> records;
  double mean_npe = 0.0;
  double mean_iou = 0.0;
  double mean_chd = 0.0;
  double modal_accuracy = 0.0;

  /// CSV with header k,t,npe,iou,chd,modal_class,p_true_class.
  std::string csv() const;
};

struct TrackingReport {
  std::vector<RunResult> runs;
  double mean_npe = 0.0;
  double mean_iou = 0.0;
  double mean_chd = 0.0;
};

TrackingReport run_tracking(const ScenarioConfig& cfg);

// ---- likelihood micro-benchmark ----

struct BenchRow {
  int m = 0;
  int n = 0;
  int particles = 0;  // 0 for the exact likelihood
  std::string kind;   // "exact" or "mc"
  double nanoseconds = 0.0;
};

std::vector<BenchRow> run_bench(const ScenarioConfig& cfg);

std::string bench_csv(const std::vector<BenchRow>& rows);

/// Least-squares slope of log(y) against log(x); used for the complexity
/// scaling checks.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace polytrack
