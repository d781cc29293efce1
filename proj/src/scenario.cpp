#include "polytrack/scenario.hpp"

#include "polytrack/likelihood.hpp"
#include "polytrack/shaper.hpp"
#include "polytrack/tracker.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace polytrack {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

SensorKind parse_kind(const std::string& s) {
  if (s == "contour") return SensorKind::kContour;
  if (s == "surface") return SensorKind::kSurface;
  throw Error(ErrorCode::kLoad, "unknown sensor kind: " + s);
}

template <int N>
Eigen::Matrix<double, N, 1> parse_vec(const nlohmann::json& j, const char* field) {
  if (!j.is_array() || j.size() != N) {
    throw Error(ErrorCode::kLoad, std::string("config field ") + field +
                                      " must be an array of " + std::to_string(N));
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = j[i].get<double>();
  return v;
}

KinematicState parse_state(const nlohmann::json& j) {
  KinematicState x;
  if (j.contains("g")) x.g = parse_vec<2>(j["g"], "g");
  x.h = j.value("h", 0.0);
  x.s = j.value("s", 0.0);
  x.s_dot = j.value("s_dot", 0.0);
  x.omega = j.value("omega", 0.0);
  return x;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kLoad, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kLoad, "config parse error: " + std::string(e.what()));
  }

  ScenarioConfig cfg;
  cfg.seed = j.value("seed", 1ULL);
  cfg.runs = j.value("runs", 1);
  cfg.scans = j.value("scans", 100);
  if (cfg.scans < 1 || cfg.runs < 1) {
    throw Error(ErrorCode::kLoad, "scans and runs must be >= 1");
  }
  cfg.true_class = j.value("true_class", std::string{});

  std::filesystem::path dict = j.value("dictionary", std::string{});
  if (!dict.empty() && dict.is_relative()) {
    dict = std::filesystem::path(path).parent_path() / dict;
  }
  cfg.dictionary_path = dict.string();

  if (j.contains("pose")) {
    cfg.static_pose.g = parse_vec<2>(j["pose"].value("g", nlohmann::json::array({0.0, 0.0})), "pose.g");
    cfg.static_pose.h = j["pose"].value("h", 0.0);
  }

  for (const auto& js : j.value("sensors", nlohmann::json::array())) {
    SensorConfig s;
    s.kind = parse_kind(js.value("kind", std::string("contour")));
    if (js.contains("r")) {
      const auto& r = js["r"];
      if (!r.is_array() || r.size() != 2) {
        throw Error(ErrorCode::kLoad, "sensor r must be a 2x2 matrix");
      }
      s.noise << r[0][0].get<double>(), r[0][1].get<double>(), r[1][0].get<double>(),
          r[1][1].get<double>();
    } else {
      const double sigma = js.value("sigma", 1.0);
      s.noise = sigma * sigma * Mat2::Identity();
    }
    s.resolution = js.value("resolution", 1.0);
    s.eta = js.value("eta", 1.0);
    s.period = js.value("period", 0.1);
    cfg.sensors.push_back(s);
  }
  // contour scans are processed first within an instant
  std::stable_sort(cfg.sensors.begin(), cfg.sensors.end(),
                   [](const SensorConfig& a, const SensorConfig& b) {
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });

  if (j.contains("trajectory")) {
    const auto& jt = j["trajectory"];
    if (jt.contains("initial")) cfg.trajectory.initial = parse_state(jt["initial"]);
    for (const auto& seg : jt.value("segments", nlohmann::json::array())) {
      cfg.trajectory.segments.push_back({seg.value("duration", 0.0),
                                         seg.value("s_dot", 0.0),
                                         seg.value("omega", 0.0)});
    }
  }

  if (j.contains("tracker")) {
    const auto& jt = j["tracker"];
    if (jt.contains("q_std")) cfg.tracker.q_std = parse_vec<6>(jt["q_std"], "q_std");
    if (jt.contains("e_std")) cfg.tracker.e_std = parse_vec<3>(jt["e_std"], "e_std");
    if (jt.contains("p0_std")) cfg.tracker.p0_std = parse_vec<6>(jt["p0_std"], "p0_std");
    cfg.tracker.init_from_truth = jt.value("init_from_truth", true);
  }

  if (j.contains("shaper")) {
    const auto& js = j["shaper"];
    cfg.shaper.delta = js.value("delta", cfg.shaper.delta);
    cfg.shaper.delta_r = js.value("delta_r", cfg.shaper.delta_r);
    cfg.shaper.particles = js.value("particles", cfg.shaper.particles);
    cfg.shaper.particle_seed = js.value("particle_seed", cfg.shaper.particle_seed);
    cfg.shaper.parallel = js.value("parallel", cfg.shaper.parallel);
  }

  if (j.contains("metrics")) {
    const auto& jm = j["metrics"];
    cfg.metrics.rho_min = jm.value("rho_min", cfg.metrics.rho_min);
    cfg.metrics.iou_cells = jm.value("iou_cells", cfg.metrics.iou_cells);
    cfg.metrics.chd_samples = jm.value("chd_samples", cfg.metrics.chd_samples);
  }

  if (j.contains("bench")) {
    const auto& jb = j["bench"];
    if (jb.contains("m_values")) {
      cfg.bench.m_values.clear();
      for (const auto& v : jb["m_values"]) cfg.bench.m_values.push_back(v.get<int>());
    }
    if (jb.contains("particle_counts")) {
      cfg.bench.particle_counts.clear();
      for (const auto& v : jb["particle_counts"]) {
        cfg.bench.particle_counts.push_back(v.get<int>());
      }
    }
    cfg.bench.vertex_count = jb.value("vertex_count", cfg.bench.vertex_count);
    cfg.bench.fixed_m = jb.value("fixed_m", cfg.bench.fixed_m);
    cfg.bench.mc_particles = jb.value("mc_particles", cfg.bench.mc_particles);
    cfg.bench.sigma = jb.value("sigma", cfg.bench.sigma);
  }
  return cfg;
}

namespace {

Dictionary load_prepared(const ScenarioConfig& cfg) {
  Dictionary dict = load_dictionary(cfg.dictionary_path);
  dict.prepare_sensors(cfg.sensors);
  const bool any_surface =
      std::any_of(cfg.sensors.begin(), cfg.sensors.end(),
                  [](const SensorConfig& s) { return s.kind == SensorKind::kSurface; });
  if (any_surface) {
    dict.build_particle_sets(cfg.shaper.particles, cfg.shaper.particle_seed);
  }
  return dict;
}

}  // namespace

ClassificationReport run_classification(const ScenarioConfig& cfg) {
  if (cfg.sensors.empty()) {
    throw Error(ErrorCode::kLoad, "classification needs at least one sensor");
  }
  const Dictionary dict = load_prepared(cfg);
  const std::size_t true_idx = dict.find(cfg.true_class);
  const ShapeVector world = dewhiten(dict.entry(true_idx).shape, cfg.static_pose);
  const Mat2 u = rotation(cfg.static_pose.h);

  ClassificationReport report;
  std::ostringstream csv;
  csv << "k,kind,m,mle_class,correct\n";
  std::vector<KindAccuracy> acc(cfg.sensors.size());
  for (std::size_t si = 0; si < cfg.sensors.size(); ++si) {
    acc[si].kind = cfg.sensors[si].kind;
  }

  const Rng master(cfg.seed);
  for (int k = 0; k < cfg.scans; ++k) {
    for (std::size_t si = 0; si < cfg.sensors.size(); ++si) {
      const SensorConfig& sensor = cfg.sensors[si];
      Rng scan_rng = master.split(static_cast<std::uint64_t>(k) * cfg.sensors.size() + si);
      Dataset scan = generate_scan(world, sensor,
                                   dict.entry(true_idx).cardinality(sensor.kind), scan_rng);
      scan.scan_index = k;
      // true pose assumed known: whiten exactly, no covariance inflation
      const Dataset whitened = whiten_dataset(scan, cfg.static_pose);
      const Mat2 r_local = u.transpose() * sensor.noise * u;

      std::size_t mle = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < dict.size(); ++i) {
        const double ll = dataset_loglik(whitened, dict.entry(i), sensor.kind, r_local);
        if (ll > best) {
          best = ll;
          mle = i;
        }
      }
      const bool correct = mle == true_idx;
      acc[si].correct += correct ? 1 : 0;
      ++acc[si].scans;
      csv << k << ',' << to_string(sensor.kind) << ',' << scan.size() << ',' << mle
          << ',' << (correct ? 1 : 0) << '\n';
    }
  }
  for (auto& a : acc) {
    a.accuracy = a.scans > 0 ? static_cast<double>(a.correct) / a.scans : 0.0;
  }
  report.per_kind = std::move(acc);
  report.csv = csv.str();
  return report;
}

std::string RunResult::csv() const {
  std::ostringstream os;
  os << "k,t,npe,iou,chd,modal_class,p_true_class\n";
  for (const ScanRecord& r : records) {
    os << r.k << ',' << fmt(r.t) << ',' << fmt(r.npe) << ',' << fmt(r.iou) << ','
       << fmt(r.chd) << ',' << r.modal_class << ',' << fmt(r.p_true_class) << '\n';
  }
  return os.str();
}

namespace {

// driving inputs active during [t, t + T): the segment covering t
void apply_schedule(KinematicState& truth, const TrajectoryConfig& traj, double t) {
  double start = 0.0;
  for (const TrajectorySegment& seg : traj.segments) {
    if (t < start + seg.duration) {
      truth.s_dot = seg.s_dot;
      truth.omega = seg.omega;
      return;
    }
    start += seg.duration;
  }
  if (!traj.segments.empty()) {
    truth.s_dot = 0.0;  // past the schedule: coast
    truth.omega = 0.0;
  }
}

}  // namespace

TrackingReport run_tracking(const ScenarioConfig& cfg) {
  if (cfg.sensors.empty()) {
    throw Error(ErrorCode::kLoad, "tracking needs at least one sensor");
  }
  for (const SensorConfig& s : cfg.sensors) {
    if (s.period != cfg.sensors[0].period) {
      throw Error(ErrorCode::kLoad, "all sensors must share the scan period");
    }
  }
  const Dictionary dict = load_prepared(cfg);
  const std::size_t true_idx = dict.find(cfg.true_class);
  const double period = cfg.sensors[0].period;

  const Mat6 q = cfg.tracker.q_std.array().square().matrix().asDiagonal();
  const Mat6 p0 = cfg.tracker.p0_std.array().square().matrix().asDiagonal();
  const Mat3 e = cfg.tracker.e_std.array().square().matrix().asDiagonal();
  const Mat2 delta_r = cfg.shaper.delta_r * Mat2::Identity();

  TrackingReport report;
  const Rng master(cfg.seed);
  for (int run = 0; run < cfg.runs; ++run) {
    const Rng run_rng = master.split(static_cast<std::uint64_t>(run));
    KinematicState truth = cfg.trajectory.initial;
    KinematicState x0 = cfg.trajectory.initial;
    if (cfg.tracker.init_from_truth) {
      x0.s_dot = 0.0;  // true position and velocity vector only
      x0.omega = 0.0;
    }
    Tracker tracker(x0, p0, q, e);
    ClassDistribution belief(dict.size());

    RunResult rr;
    rr.run = run;
    double t = 0.0;
    for (int k = 1; k <= cfg.scans; ++k) {
      apply_schedule(truth, cfg.trajectory, t);
      truth = step(truth, Vec6::Zero(), period);
      t += period;
      const ShapeVector world = dewhiten(dict.entry(true_idx).shape, truth.pose());
      const Vec2 g_prev = tracker.state().g;

      std::optional<ShaperResult> last;
      for (std::size_t si = 0; si < cfg.sensors.size(); ++si) {
        const SensorConfig& sensor = cfg.sensors[si];
        Rng scan_rng = run_rng.split(static_cast<std::uint64_t>(k - 1) * cfg.sensors.size() + si);
        Dataset scan = generate_scan(world, sensor,
                                     dict.entry(true_idx).cardinality(sensor.kind), scan_rng);
        scan.scan_index = k;

        tracker.predict(si == 0 ? period : 0.0);
        if (const auto obs = static_estimates(scan, g_prev)) {
          Vec3 virtual_meas;
          virtual_meas << obs->g, obs->heading.value_or(tracker.state().h);
          tracker.correct(virtual_meas);
        }
        ShaperResult sr = shaper_step(scan, tracker.state().pose(), belief, dict,
                                      sensor.kind, sensor.noise, delta_r,
                                      cfg.shaper.delta, cfg.shaper.parallel);
        belief = sr.posterior;
        last.emplace(std::move(sr));
      }

      if (!tracker.state().finite() || !tracker.covariance().allFinite()) {
        rr.diverged = true;
        break;
      }

      ScanRecord rec;
      rec.k = k;
      rec.t = t;
      rec.truth = truth;
      rec.estimate = tracker.state();
      rec.npe = npe(truth.g, tracker.state().g, cfg.metrics.rho_min);
      const double cell = std::min(world.diameter(), last->shape_world.diameter()) /
                          cfg.metrics.iou_cells;
      rec.iou = iou(world, last->shape_world, cell);
      rec.chd = chamfer(world, last->shape_world, cfg.metrics.chd_samples);
      rec.modal_class = static_cast<int>(last->modal_class);
      rec.p_true_class = std::exp(belief.log_prob(true_idx));
      rr.records.push_back(rec);
    }

    if (!rr.records.empty()) {
      for (const ScanRecord& r : rr.records) {
        rr.mean_npe += r.npe;
        rr.mean_iou += r.iou;
        rr.mean_chd += r.chd;
        rr.modal_accuracy += r.modal_class == static_cast<int>(true_idx) ? 1.0 : 0.0;
      }
      const double count = static_cast<double>(rr.records.size());
      rr.mean_npe /= count;
      rr.mean_iou /= count;
      rr.mean_chd /= count;
      rr.modal_accuracy /= count;
    }
    report.runs.push_back(std::move(rr));
  }

  int completed = 0;
  for (const RunResult& rr : report.runs) {
    if (rr.diverged) continue;
    report.mean_npe += rr.mean_npe;
    report.mean_iou += rr.mean_iou;
    report.mean_chd += rr.mean_chd;
    ++completed;
  }
  if (completed > 0) {
    report.mean_npe /= completed;
    report.mean_iou /= completed;
    report.mean_chd /= completed;
  }
  return report;
}

namespace {

ShapeVector regular_polygon(int n, double radius) {
  std::vector<Vec2> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a = kTwoPi * i / n;
    v.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  return ShapeVector(std::move(v), Frame::kWorld);
}

// wall time per call, repeated until the sample is long enough to trust
template <typename F>
double time_ns(F&& body) {
  using clock = std::chrono::steady_clock;
  volatile double sink = 0.0;
  long long reps = 1;
  for (;;) {
    const auto start = clock::now();
    for (long long r = 0; r < reps; ++r) sink = sink + body();
    const auto stop = clock::now();
    const double ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
    if (ns >= 2e7 || reps >= (1LL << 24)) {
      (void)sink;
      return ns / static_cast<double>(reps);
    }
    reps *= 4;
  }
}

}  // namespace

std::vector<BenchRow> run_bench(const ScenarioConfig& cfg) {
  const BenchConfig& b = cfg.bench;
  const double radius = 13.0;
  const ShapeVector shape = regular_polygon(b.vertex_count, radius);

  DictionaryEntry entry{0, "bench", shape, 0.0, 0.0, {}, {}, 1.0, {}, {}, {}};
  entry.contour_len = contour_length(shape);
  entry.surface_area = std::abs(barycenter_area(shape).area);
  entry.partition = edge_partition(shape);
  entry.triangulation = triangulate(shape);
  const int max_m = *std::max_element(b.m_values.begin(), b.m_values.end());
  // keep the binomial support above every benchmarked m
  SensorConfig contour_sensor{.kind = SensorKind::kContour,
                              .noise = b.sigma * b.sigma * Mat2::Identity(),
                              .resolution = entry.contour_len / (2.0 * max_m),
                              .eta = 0.9,
                              .period = 0.1};
  SensorConfig surface_sensor = contour_sensor;
  surface_sensor.kind = SensorKind::kSurface;
  surface_sensor.resolution = entry.surface_area / (2.0 * max_m);
  entry.contour_cardinality = cardinality_params(shape, contour_sensor, 1.0);
  entry.surface_cardinality = cardinality_params(shape, surface_sensor, 1.0);

  Rng rng(cfg.seed);
  auto make_dataset = [&](int m) {
    Dataset d;
    d.points.reserve(m);
    for (int i = 0; i < m; ++i) {
      const Vec2 u = rng.gaussian2();
      d.points.push_back(0.7 * radius * u);
    }
    return d;
  };

  const Mat2 r = b.sigma * b.sigma * Mat2::Identity();
  std::vector<BenchRow> rows;

  for (int m : b.m_values) {
    const Dataset d = make_dataset(m);
    const double ns = time_ns(
        [&] { return dataset_loglik(d, entry, SensorKind::kContour, r); });
    rows.push_back({m, b.vertex_count, 0, "exact", ns});
  }

  entry.particles =
      build_particles(shape, entry.triangulation, b.mc_particles, cfg.seed);
  for (int m : b.m_values) {
    const Dataset d = make_dataset(m);
    const double ns = time_ns(
        [&] { return dataset_loglik(d, entry, SensorKind::kSurface, r); });
    rows.push_back({m, b.vertex_count, b.mc_particles, "mc", ns});
  }

  const Dataset d_fixed = make_dataset(b.fixed_m);
  for (int n_particles : b.particle_counts) {
    entry.particles =
        build_particles(shape, entry.triangulation, n_particles, cfg.seed);
    const double ns = time_ns(
        [&] { return dataset_loglik(d_fixed, entry, SensorKind::kSurface, r); });
    rows.push_back({b.fixed_m, b.vertex_count, n_particles, "mc", ns});
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "m,n,particles,kind,nanoseconds\n";
  for (const BenchRow& r : rows) {
    os << r.m << ',' << r.n << ',' << r.particles << ',' << r.kind << ','
       << fmt(r.nanoseconds) << '\n';
  }
  return os.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kParameter, "loglog_slope: need matching series of >= 2 points");
  }
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace polytrack
