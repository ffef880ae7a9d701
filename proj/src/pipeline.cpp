/*
 * Copyright 2026 The saralert authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "saralert/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "saralert/calibration.hpp"
#include "saralert/detection.hpp"
#include "saralert/parallel.hpp"
#include "saralert/quality.hpp"
#include "saralert/stack_io.hpp"
#include "saralert/stats.hpp"
#include "saralert/util.hpp"

namespace saralert {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

/// Removes the files a failing stage already produced so partial runs do
/// not masquerade as results.
class OutputGuard {
 public:
  void track(const std::filesystem::path& p) { paths_.push_back(p); }
  void commit() { committed_ = true; }
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : paths_) std::filesystem::remove_all(p, ec);
  }

 private:
  std::vector<std::filesystem::path> paths_;
  bool committed_ = false;
};

double json_num(double v) {
  // Round-trip through the fixed 6-significant-digit formatting so JSON
  // output is byte-stable.
  return std::stod(fmt_g6(v));
}

SceneConfig scene_from_json(const nlohmann::json& j) {
  SceneConfig scene;
  if (j.contains("width")) scene.width = j.at("width").get<int>();
  if (j.contains("height")) scene.height = j.at("height").get<int>();
  if (j.contains("dates")) {
    for (const auto& d : j.at("dates"))
      scene.dates.push_back(Date::parse(d.get<std::string>()));
  } else {
    const auto start = Date::parse(j.at("start_date").get<std::string>());
    const int count = j.at("date_count").get<int>();
    const int cadence = j.value("cadence_days", 12);
    scene.dates = regular_dates(start, count, cadence);
  }
  if (j.contains("bands"))
    scene.bands = j.at("bands").get<std::vector<std::string>>();
  if (j.contains("forest_mean_db"))
    scene.forest_mean_db = j.at("forest_mean_db").get<std::vector<double>>();
  if (j.contains("forest_sigma_db"))
    scene.forest_sigma_db = j.at("forest_sigma_db").get<std::vector<double>>();
  if (j.contains("looks")) scene.looks = j.at("looks").get<double>();
  if (j.contains("events")) {
    for (const auto& e : j.at("events")) {
      EventRect ev;
      ev.row0 = e.at("row").get<int>();
      ev.col0 = e.at("col").get<int>();
      ev.height = e.at("height").get<int>();
      ev.width = e.at("width").get<int>();
      ev.date = Date::parse(e.at("date").get<std::string>());
      ev.drop_db = e.value("drop_db", 3.0);
      scene.events.push_back(ev);
    }
  }
  scene.forest_samples = j.value("forest_samples", scene.forest_samples);
  scene.cleared_samples = j.value("cleared_samples", scene.cleared_samples);
  scene.sample_margin = j.value("sample_margin", scene.sample_margin);
  scene.cleared_inset = j.value("cleared_inset", scene.cleared_inset);
  return scene;
}

FilterCombination combination_for(const PipelineConfig& cfg) {
  if (cfg.combination == "bench")
    throw ConfigError("this stage needs a single combination, not 'bench'");
  FilterCombination combo = FilterCombination::parse(cfg.combination);
  combo.temporal_inner.damping = cfg.frost_damping;
  combo.temporal_inner.nominal_looks = cfg.lee_nominal_looks;
  combo.post_spatial.damping = cfg.frost_damping;
  combo.post_spatial.nominal_looks = cfg.lee_nominal_looks;
  return combo;
}

std::filesystem::path forest_csv(const PipelineConfig& cfg) {
  if (cfg.samples_forest) return *cfg.samples_forest;
  const auto fallback = cfg.out_dir / "samples_forest.csv";
  if (std::filesystem::exists(fallback)) return fallback;
  throw ConfigError("no forest sample set configured and none under out/");
}

std::filesystem::path cleared_csv(const PipelineConfig& cfg) {
  if (cfg.samples_cleared) return *cfg.samples_cleared;
  const auto fallback = cfg.out_dir / "samples_cleared.csv";
  if (std::filesystem::exists(fallback)) return fallback;
  throw ConfigError("no cleared sample set configured and none under out/");
}

RasterStack filtered_db_stack(const PipelineConfig& cfg,
                              const RasterStack& stack) {
  const FilterCombination combo = combination_for(cfg);
  RasterStack filtered = apply_combination(stack, combo, cfg.band);
  return db_convert(filtered, DbDirection::kToDb);
}

DateInterval fit_window(const PipelineConfig& cfg, const RasterStack& stack,
                        const SampleSet* cleared) {
  if (cfg.calibration_window) return *cfg.calibration_window;
  return default_calibration_window(stack, cleared);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

PipelineConfig PipelineConfig::from_json_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config JSON: " + std::string(e.what()));
  }

  PipelineConfig cfg;
  try {
    if (j.contains("stack"))
      cfg.stack_dir = j.at("stack").get<std::string>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    cfg.band = j.value("band", cfg.band);
    cfg.combination = j.value("combination", cfg.combination);
    if (j.contains("alphas"))
      cfg.alphas = j.at("alphas").get<std::vector<double>>();
    cfg.confirmation = j.value("confirmation", cfg.confirmation);
    cfg.skip_nodata = j.value("skip_nodata", cfg.skip_nodata);
    if (j.contains("samples_forest"))
      cfg.samples_forest = j.at("samples_forest").get<std::string>();
    if (j.contains("samples_cleared"))
      cfg.samples_cleared = j.at("samples_cleared").get<std::string>();
    if (j.contains("calibration_window")) {
      DateInterval w;
      w.start = Date::parse(
          j.at("calibration_window").at("start").get<std::string>());
      w.end =
          Date::parse(j.at("calibration_window").at("end").get<std::string>());
      cfg.calibration_window = w;
    }
    if (j.contains("terrain"))
      cfg.terrain_dir = j.at("terrain").get<std::string>();
    if (j.contains("incidence_deg"))
      cfg.incidence_deg = j.at("incidence_deg").get<double>();
    cfg.look_azimuth_deg = j.value("look_azimuth_deg", cfg.look_azimuth_deg);
    cfg.lia_max_deg = j.value("lia_max_deg", cfg.lia_max_deg);
    cfg.frost_damping = j.value("frost_damping", cfg.frost_damping);
    cfg.lee_nominal_looks = j.value("lee_looks", cfg.lee_nominal_looks);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.series_dump_limit =
        j.value("series_dump_limit", cfg.series_dump_limit);
    cfg.bench = j.value("bench", cfg.bench);
    if (j.contains("scene")) cfg.scene = scene_from_json(j.at("scene"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad config value: " + std::string(e.what()));
  }
  return cfg;
}

void PipelineConfig::validate() const {
  if (out_dir.empty()) throw ConfigError("no output directory configured");
  for (double a : alphas)
    if (!(a > 0.0) || a > 0.5)
      throw ConfigError("alpha must lie in (0, 0.5], got " + fmt_g6(a));
  if (alphas.empty()) throw ConfigError("at least one alpha is required");
  if (confirmation < 1) throw ConfigError("confirmation must be >= 1");
  if (combination != "bench") FilterCombination::parse(combination);
}

std::filesystem::path resolve_stack_dir(const PipelineConfig& cfg) {
  const auto calibrated = cfg.out_dir / "calibrated";
  if (std::filesystem::exists(calibrated / "meta.json")) return calibrated;
  if (!cfg.stack_dir.empty()) return cfg.stack_dir;
  const auto scene = cfg.out_dir / "scene";
  if (std::filesystem::exists(scene / "meta.json")) return scene;
  throw ConfigError("no input stack: configure 'stack' or run synth first");
}

void run_synth(const PipelineConfig& cfg) {
  cfg.validate();
  if (!cfg.scene) throw ConfigError("synth needs a 'scene' config block");
  set_worker_cap(cfg.threads);
  std::filesystem::create_directories(cfg.out_dir);

  SceneConfig scene = *cfg.scene;
  scene.seed = cfg.seed;  // --seed always wins
  SceneResult result = generate_scene(scene);

  OutputGuard guard;
  const auto scene_dir = cfg.out_dir / "scene";
  guard.track(scene_dir);
  write_stack(result.stack, scene_dir);
  guard.track(cfg.out_dir / "truth.csv");
  write_truth_csv(result.truth, cfg.out_dir / "truth.csv");
  guard.track(cfg.out_dir / "samples_forest.csv");
  write_sample_set(result.forest, cfg.out_dir / "samples_forest.csv");
  guard.track(cfg.out_dir / "samples_cleared.csv");
  write_sample_set(result.cleared, cfg.out_dir / "samples_cleared.csv");
  guard.commit();
}

void run_calibrate(const PipelineConfig& cfg) {
  cfg.validate();
  set_worker_cap(cfg.threads);
  if (cfg.stack_dir.empty() && !std::filesystem::exists(cfg.out_dir / "scene"))
    throw ConfigError("calibrate needs an input stack");
  const auto input =
      cfg.stack_dir.empty() ? cfg.out_dir / "scene" : cfg.stack_dir;
  RasterStack stack = load_stack(input);

  if (!cfg.incidence_deg)
    throw ConfigError("calibrate needs incidence_deg (ellipsoid incidence)");
  AcquisitionGeometry geom = AcquisitionGeometry::uniform(
      stack.width, stack.height, *cfg.incidence_deg * kDegToRad,
      cfg.look_azimuth_deg * kDegToRad);

  TerrainGrid terrain;
  if (cfg.terrain_dir) {
    terrain = load_terrain(*cfg.terrain_dir);
  } else {
    // Flat earth: LIA equals the ellipsoid incidence everywhere.
    terrain.slope = Grid(stack.width, stack.height, 0.0);
    terrain.aspect = Grid(stack.width, stack.height, 0.0);
  }
  const Grid lia = local_incidence_angle(terrain, geom);
  RasterStack gamma0 =
      sigma0_to_gamma0(stack, lia, cfg.lia_max_deg * kDegToRad);

  OutputGuard guard;
  guard.track(cfg.out_dir / "calibrated");
  write_stack(gamma0, cfg.out_dir / "calibrated");
  guard.commit();
}

void run_bench(const PipelineConfig& cfg) {
  cfg.validate();
  set_worker_cap(cfg.threads);
  std::filesystem::create_directories(cfg.out_dir);
  RasterStack stack = load_stack(resolve_stack_dir(cfg));
  SampleSet forest = load_sample_set(forest_csv(cfg));
  SampleSet cleared = load_sample_set(cleared_csv(cfg));

  std::vector<FilterCombination> combos;
  if (cfg.combination == "bench") {
    combos = bench_grid();
  } else {
    combos.push_back(FilterCombination::parse(cfg.combination));
  }
  for (auto& combo : combos) {
    combo.temporal_inner.damping = cfg.frost_damping;
    combo.temporal_inner.nominal_looks = cfg.lee_nominal_looks;
    combo.post_spatial.damping = cfg.frost_damping;
    combo.post_spatial.nominal_looks = cfg.lee_nominal_looks;
  }

  const auto scores =
      score_combinations(stack, forest, cleared, combos, cfg.band);
  OutputGuard guard;
  guard.track(cfg.out_dir / "scores.csv");
  write_scores_csv(scores, cfg.out_dir / "scores.csv");
  guard.commit();
}

void run_fit(const PipelineConfig& cfg) {
  cfg.validate();
  set_worker_cap(cfg.threads);
  std::filesystem::create_directories(cfg.out_dir);
  RasterStack stack = load_stack(resolve_stack_dir(cfg));
  SampleSet forest = load_sample_set(forest_csv(cfg));
  SampleSet cleared;
  bool have_cleared = false;
  try {
    cleared = load_sample_set(cleared_csv(cfg));
    have_cleared = true;
  } catch (const ConfigError&) {
    // Baseline fitting works from forest samples alone.
  }

  RasterStack filtered_db = filtered_db_stack(cfg, stack);
  const DateInterval window =
      fit_window(cfg, stack, have_cleared ? &cleared : nullptr);
  ForestModel model = fit_baseline(filtered_db, window, forest, cfg.band);

  OutputGuard guard;
  guard.track(cfg.out_dir / "model");
  save_model(model, cfg.out_dir / "model");

  // Normality / equal-variance characterization of the calibration-window
  // series at every forest location.
  const auto norm_csv = cfg.out_dir / "normality.csv";
  guard.track(norm_csv);
  std::ofstream out(norm_csv, std::ios::trunc);
  if (!out) throw IoError("cannot write " + norm_csv.string());
  out << "row,col,test,statistic,p_value,n\n";
  std::vector<std::vector<double>> groups;
  for (const auto& loc :
       forest.of_class(SampleClass::kInvariantForest)) {
    TimeSeries ts = extract_series(filtered_db, loc.row, loc.col, cfg.band);
    std::vector<double> vals;
    for (std::size_t i = 0; i < ts.values.size(); ++i) {
      if (window.contains(ts.dates[i]) && !std::isnan(ts.values[i]))
        vals.push_back(ts.values[i]);
    }
    if (vals.size() < 3) continue;
    try {
      const TestResult sw = shapiro_wilk(vals);
      const TestResult ks = ks_normality(vals);
      out << loc.row << ',' << loc.col << ",shapiro-wilk,"
          << fmt_g6(sw.statistic) << ',' << fmt_g6(sw.p_value) << ',' << sw.n
          << '\n';
      out << loc.row << ',' << loc.col << ",ks," << fmt_g6(ks.statistic)
          << ',' << fmt_g6(ks.p_value) << ',' << ks.n << '\n';
      groups.push_back(std::move(vals));
    } catch (const DataError&) {
      // degenerate location; leave it out of the table
    }
  }
  if (groups.size() >= 2) {
    const TestResult bt = bartlett(groups);
    out << ",,bartlett," << fmt_g6(bt.statistic) << ',' << fmt_g6(bt.p_value)
        << ',' << bt.n << '\n';
  }
  out.close();
  guard.commit();
}

void run_detect(const PipelineConfig& cfg) {
  cfg.validate();
  set_worker_cap(cfg.threads);
  std::filesystem::create_directories(cfg.out_dir);
  RasterStack stack = load_stack(resolve_stack_dir(cfg));
  SampleSet samples = load_sample_set(forest_csv(cfg));
  samples.append(load_sample_set(cleared_csv(cfg)));

  RasterStack filtered_db = filtered_db_stack(cfg, stack);
  ForestModel model = load_model(cfg.out_dir / "model");
  DetectOptions options{cfg.confirmation, cfg.skip_nodata};

  OutputGuard guard;
  const auto alerts_csv = cfg.out_dir / "alerts.csv";
  guard.track(alerts_csv);
  std::ofstream out(alerts_csv, std::ios::trunc);
  if (!out) throw IoError("cannot write " + alerts_csv.string());
  out << "row,col,band,alpha,first_breach,confirmation,alert_date,"
         "threshold_db\n";

  std::vector<SampleLocation> unevaluable;
  std::vector<ThresholdSpec> specs;
  for (double alpha : cfg.alphas) {
    const ThresholdSpec spec = derive_threshold(model, alpha);
    specs.push_back(spec);
    StackDetection det = detect_stack(filtered_db, model, spec, samples,
                                      options);
    for (const auto& a : det.alerts) {
      out << a.row << ',' << a.col << ',' << a.band << ',' << fmt_g6(a.alpha)
          << ',' << a.first_breach_date.to_string() << ','
          << a.confirmation_date.to_string() << ','
          << a.alert_date.to_string() << ',' << fmt_g6(a.threshold_db)
          << '\n';
    }
    if (unevaluable.empty()) unevaluable = det.unevaluable;
  }
  out.close();

  const auto unevaluable_csv = cfg.out_dir / "unevaluable.csv";
  guard.track(unevaluable_csv);
  std::ofstream uout(unevaluable_csv, std::ios::trunc);
  uout << "row,col\n";
  for (const auto& l : unevaluable) uout << l.row << ',' << l.col << '\n';
  uout.close();

  // Fig.-5-style series dumps (raw vs filtered vs threshold) for the
  // first series_dump_limit sample locations, first configured alpha.
  const ThresholdSpec& dump_spec = specs.front();
  RasterStack raw_band = apply_combination(
      stack, FilterCombination{SpatialFilterSpec{}, SpatialFilterSpec{}},
      cfg.band);
  RasterStack raw_db = db_convert(raw_band, DbDirection::kToDb);
  const int dump_count = std::min<int>(cfg.series_dump_limit,
                                       static_cast<int>(samples.locations.size()));
  for (int i = 0; i < dump_count; ++i) {
    const auto& loc = samples.locations[i];
    TimeSeries raw = extract_series(raw_db, loc.row, loc.col, cfg.band);
    TimeSeries flt = extract_series(filtered_db, loc.row, loc.col, cfg.band);
    const double base = model.baseline_mean.at(loc.row, loc.col);
    const double threshold = base + dump_spec.offset_db;
    const auto path = cfg.out_dir / ("series_" + std::to_string(loc.row) +
                                     "_" + std::to_string(loc.col) + ".csv");
    guard.track(path);
    std::ofstream s(path, std::ios::trunc);
    if (!s) throw IoError("cannot write " + path.string());
    s << "date,raw_db,filtered_db,threshold_db,breach_flag\n";
    for (std::size_t d = 0; d < flt.dates.size(); ++d) {
      const bool breach =
          !std::isnan(flt.values[d]) && flt.values[d] < threshold;
      s << flt.dates[d].to_string() << ',' << fmt_g6(raw.values[d]) << ','
        << fmt_g6(flt.values[d]) << ',' << fmt_g6(threshold) << ','
        << (breach ? 1 : 0) << '\n';
    }
  }
  guard.commit();
}

void run_evaluate(const PipelineConfig& cfg) {
  cfg.validate();
  SampleSet samples = load_sample_set(forest_csv(cfg));
  samples.append(load_sample_set(cleared_csv(cfg)));

  const auto alerts_csv = cfg.out_dir / "alerts.csv";
  std::ifstream in(alerts_csv);
  if (!in) throw IoError("cannot open " + alerts_csv.string() +
                         " (run detect first)");
  std::string line;
  std::getline(in, line);  // header
  struct ParsedAlert {
    AlertRecord record;
    double alpha;
  };
  std::vector<ParsedAlert> parsed;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_line(line);
    if (f.size() != 8)
      throw DataError("bad alert row in " + alerts_csv.string());
    AlertRecord a;
    a.row = std::stoi(f[0]);
    a.col = std::stoi(f[1]);
    a.band = f[2];
    a.alpha = std::stod(f[3]);
    a.first_breach_date = Date::parse(f[4]);
    a.confirmation_date = Date::parse(f[5]);
    a.alert_date = Date::parse(f[6]);
    a.threshold_db = std::stod(f[7]);
    parsed.push_back({a, a.alpha});
  }

  std::vector<SampleLocation> unevaluable;
  const auto unevaluable_csv = cfg.out_dir / "unevaluable.csv";
  if (std::filesystem::exists(unevaluable_csv)) {
    std::ifstream uin(unevaluable_csv);
    std::getline(uin, line);
    while (std::getline(uin, line)) {
      if (line.empty()) continue;
      auto f = split_line(line);
      if (f.size() != 2) continue;
      unevaluable.push_back({std::stoi(f[0]), std::stoi(f[1]),
                             SampleClass::kInvariantForest, std::nullopt});
    }
  }

  ordered_json doc;
  doc["band"] = cfg.band;
  doc["confirmation"] = cfg.confirmation;
  doc["reports"] = ordered_json::array();
  for (double alpha : cfg.alphas) {
    std::vector<AlertRecord> alerts;
    for (const auto& p : parsed)
      if (std::fabs(p.alpha - alpha) < 1e-12) alerts.push_back(p.record);
    const EvaluationReport report = evaluate(alerts, samples, unevaluable);

    ordered_json r;
    r["alpha"] = json_num(alpha);
    r["commission_error"] = json_num(report.commission_error);
    r["omission_error"] = json_num(report.omission_error);
    r["median_delay_days"] = report.median_delay_days;
    r["tp"] = report.tp;
    r["fp"] = report.fp;
    r["fn"] = report.fn;
    r["tn"] = report.tn;
    r["unevaluable"] = report.unevaluable;
    r["locations"] = ordered_json::array();
    for (const auto& lo : report.outcomes) {
      ordered_json l;
      l["row"] = lo.location.row;
      l["col"] = lo.location.col;
      l["class"] = sample_class_name(lo.location.cls);
      l["outcome"] = outcome_name(lo.outcome);
      if (lo.location.reference_date)
        l["reference_date"] = lo.location.reference_date->to_string();
      if (lo.alert_date) l["alert_date"] = lo.alert_date->to_string();
      if (lo.delay_days) l["delay_days"] = *lo.delay_days;
      r["locations"].push_back(std::move(l));
    }
    doc["reports"].push_back(std::move(r));
  }

  OutputGuard guard;
  const auto eval_json = cfg.out_dir / "evaluation.json";
  guard.track(eval_json);
  std::ofstream out(eval_json, std::ios::trunc);
  if (!out) throw IoError("cannot write " + eval_json.string());
  out << doc.dump(2) << "\n";
  guard.commit();
}

void run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.scene) run_synth(cfg);
  if (cfg.incidence_deg) run_calibrate(cfg);
  if (cfg.bench) run_bench(cfg);
  run_fit(cfg);
  run_detect(cfg);
  run_evaluate(cfg);
}

}  // namespace saralert
