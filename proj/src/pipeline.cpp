#include "driftscope/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "driftscope/clustering.hpp"
#include "driftscope/confidence_matrix.hpp"
#include "driftscope/drift_analysis.hpp"
#include "driftscope/errors.hpp"
#include "driftscope/svg_render.hpp"
#include "driftscope/xes_reader.hpp"

namespace driftscope {

namespace {

using nlohmann::ordered_json;

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

ordered_json change_points_json(const Segmentation& seg,
                                const std::vector<std::int64_t>& starts) {
  ordered_json arr = ordered_json::array();
  for (int cp : seg.change_points) {
    ordered_json entry;
    entry["window"] = cp;
    entry["timestamp"] =
        format_timestamp_ms(starts[static_cast<std::size_t>(cp - 1)]);
    arr.push_back(std::move(entry));
  }
  return arr;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

WindowSpec auto_window_spec(std::size_t log_size) {
  const auto step = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(log_size) / 61);
  return {2 * step, step};
}

EventLog read_log(const std::string& path, const std::string& format,
                  const CsvColumns& columns) {
  std::string fmt = format;
  if (fmt == "auto") {
    const std::string ext = lower_ext(path);
    if (ext == "csv") fmt = "csv";
    else if (ext == "xes") fmt = "xes";
    else
      throw ConfigError("cannot infer format of '" + path +
                        "'; pass --format csv|xes");
  }
  if (fmt == "csv") return read_csv_log_file(path, columns);
  if (fmt == "xes") return read_xes_log_file(path);
  throw ConfigError("unknown input format '" + fmt + "'");
}

DetectArtifacts run_detect(const EventLog& log, const RunConfig& cfg) {
  DetectArtifacts art;

  const WindowSpec spec =
      cfg.window ? *cfg.window : auto_window_spec(log.size());
  const ConfidenceMatrix full =
      build_matrix(log, spec, cfg.repertoire, cfg.threads);
  const int win_num = static_cast<int>(full.cols());

  PrunedMatrix pruned;
  if (cfg.prune) {
    pruned = prune_inactive(full);
  } else {
    pruned.matrix = full;
    pruned.kept.resize(static_cast<std::size_t>(full.rows()));
    for (std::size_t i = 0; i < pruned.kept.size(); ++i)
      pruned.kept[i] = static_cast<Eigen::Index>(i);
  }
  const ConfidenceMatrix& analysis = pruned.matrix;
  const int active = static_cast<int>(analysis.rows());
  if (active == 0)
    art.warnings.push_back(
        "every constraint is inactive over every window; no analysis possible");

  // Clustering over the active rows.
  ClusterAssignment ca;
  if (active == 1) {
    ca.cluster_of = {1};
    ca.display_order = {0};
    ca.m = 1;
  } else if (active > 1) {
    const Eigen::MatrixXd dist = correlation_distances(analysis.values);
    const Dendrogram dg = weighted_linkage(dist);
    ca = cut_dendrogram(dg, active, cfg.cluster_threshold);
    ca = order_within_cluster(analysis.values, ca);
  }

  // Change points, overall and per cluster.
  Segmentation overall;
  double overall_penalty = 0.0;
  std::vector<ClusterDrift> drifts;
  if (active > 0) {
    const AutoPenalty ap = resolve_penalty(analysis.values, cfg.changepoint);
    if (ap.degenerate)
      art.warnings.push_back(
          "no change points at any grid penalty; auto penalty fell back to "
          "the grid maximum");
    overall_penalty = ap.penalty;
    ChangePointConfig overall_cfg = cfg.changepoint;
    overall_cfg.penalty = ap.penalty;
    overall = pelt_detect(analysis.values, overall_cfg);
    drifts = cluster_changepoints(analysis, ca, cfg.changepoint);
  }

  // Report, with clusters ranked by descending erratic score.
  std::vector<std::size_t> rank(drifts.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return drifts[a].ertc > drifts[b].ertc;
  });

  ordered_json report;
  report["schema_version"] = 1;
  ordered_json params;
  params["input"] = cfg.input_path;
  params["traces"] = log.size();
  params["alphabet_size"] = log.alphabet.size();
  params["win_size"] = spec.win_size;
  params["win_step"] = spec.win_step;
  params["window_source"] = cfg.window ? "explicit" : "auto";
  params["win_num"] = win_num;
  params["dropped_tail_traces"] = dropped_tail(log.size(), spec);
  params["kernel"] =
      cfg.changepoint.kernel == KernelKind::Rbf ? "rbf" : "linear";
  if (cfg.changepoint.bandwidth)
    params["bandwidth"] = *cfg.changepoint.bandwidth;
  else
    params["bandwidth"] = "median";
  if (cfg.changepoint.penalty)
    params["penalty"] = *cfg.changepoint.penalty;
  else
    params["penalty"] = "auto";
  params["min_segment"] = cfg.changepoint.min_segment;
  params["cluster_threshold"] = cfg.cluster_threshold;
  params["subsumption_epsilon"] = cfg.subsumption_epsilon;
  params["prune_inactive"] = cfg.prune;
  params["constraints"] = full.rows();
  params["inactive_constraints"] = pruned.removed.size();
  {
    ordered_json starts = ordered_json::array();
    for (std::int64_t t : full.window_start_ms)
      starts.push_back(format_timestamp_ms(t));
    params["window_starts"] = std::move(starts);
  }
  report["parameters"] = std::move(params);

  ordered_json overall_json;
  overall_json["penalty_used"] = overall_penalty;
  overall_json["change_points"] =
      change_points_json(overall, full.window_start_ms);
  report["overall"] = std::move(overall_json);

  ordered_json clusters = ordered_json::array();
  for (std::size_t k : rank) {
    const ClusterDrift& cd = drifts[k];
    ordered_json cj;
    cj["id"] = cd.id;
    cj["size"] = cd.rows.size();
    cj["ertc"] = cd.ertc;
    cj["penalty_used"] = cd.penalty_used;
    cj["change_points"] =
        change_points_json(cd.segmentation, full.window_start_ms);
    cj["mean_series"] = cd.mean_series;
    const int first_cp = cd.segmentation.change_points.empty()
                             ? 0
                             : cd.segmentation.change_points.front();
    ordered_json stats = ordered_json::array();
    for (const ConstraintStats& st :
         explain_drift(analysis, cd.rows, first_cp, cfg.subsumption_epsilon)) {
      ordered_json sj;
      sj["text"] = st.text;
      sj["min"] = st.min_pct;
      sj["max"] = st.max_pct;
      sj["mean"] = st.mean_pct;
      sj["pre_mean"] = st.pre_pct;
      sj["post_mean"] = st.post_pct;
      stats.push_back(std::move(sj));
    }
    cj["constraints"] = std::move(stats);
    clusters.push_back(std::move(cj));
  }
  report["clusters"] = std::move(clusters);
  art.report_json = report.dump(2) + "\n";

  {
    std::ostringstream csv;
    write_matrix_csv(csv, full);
    art.matrix_csv = csv.str();
  }

  // Drift map over the full matrix: active rows in cluster display order,
  // inactive rows as one trailing block.
  {
    DriftMapView view;
    view.matrix = &full;
    for (int r : ca.display_order)
      view.display_order.push_back(
          static_cast<int>(pruned.kept[static_cast<std::size_t>(r)]));
    for (Eigen::Index r : pruned.removed)
      view.display_order.push_back(static_cast<int>(r));
    for (const ClusterDrift& cd : drifts)
      view.block_sizes.push_back(static_cast<int>(cd.rows.size()));
    if (!pruned.removed.empty())
      view.block_sizes.push_back(static_cast<int>(pruned.removed.size()));
    view.change_points = overall.change_points;
    art.map_svg = render_drift_map(view);
  }

  for (const ClusterDrift& cd : drifts) {
    const std::string title = "Cluster " + std::to_string(cd.id) +
                              " mean confidence (" +
                              std::to_string(cd.rows.size()) + " constraints)";
    art.charts.emplace_back(
        cd.id, render_drift_chart(cd.mean_series, cd.segmentation.change_points,
                                  full.window_start_ms, title));
  }

  {
    std::ostringstream table;
    table << "cluster    size        ertc  drifts\n";
    char buf[64];
    for (std::size_t k : rank) {
      const ClusterDrift& cd = drifts[k];
      std::snprintf(buf, sizeof(buf), "%7d %7zu %11.4f %7zu\n", cd.id,
                    cd.rows.size(), cd.ertc,
                    cd.segmentation.change_points.size());
      table << buf;
    }
    table << "overall change points:";
    if (overall.change_points.empty()) {
      table << " none\n";
    } else {
      for (int cp : overall.change_points)
        table << ' ' << cp << " ("
              << format_timestamp_date(
                     full.window_start_ms[static_cast<std::size_t>(cp - 1)])
              << ')';
      table << '\n';
    }
    art.summary = table.str();
  }
  return art;
}

int cmd_detect(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    const EventLog log =
        read_log(cfg.input_path, cfg.format, cfg.csv_columns);
    const DetectArtifacts art = run_detect(log, cfg);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec)
      throw IoError("cannot create output directory " + cfg.out_dir + ": " +
                    ec.message());
    const std::string base = (fs::path(cfg.out_dir) / cfg.prefix).string();

    write_text_file(base + "_report.json", art.report_json);
    write_text_file(base + "_matrix.csv", art.matrix_csv);
    write_text_file(base + "_map.svg", art.map_svg);
    for (const auto& [id, svg] : art.charts)
      write_text_file(base + "_cluster" + std::to_string(id) + ".svg", svg);

    for (const std::string& w : art.warnings) err << "warning: " << w << '\n';
    out << art.summary;
    out << "report: " << base + "_report.json" << '\n';
  });
}

int cmd_generate(std::size_t n_traces, const std::vector<DriftSpecEntry>& drifts,
                 std::uint64_t seed, const std::string& log_path,
                 const std::string& truth_path, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&]() {
    const auto [log, truth] = generate_drifting_log(n_traces, drifts, seed);
    write_csv_log_file(log_path, log);
    write_truth_file(truth_path, truth);
    out << "wrote " << log_path << " (" << log.size() << " traces) and "
        << truth_path << '\n';
  });
}

int cmd_evaluate(const std::string& report_path, const std::string& truth_path,
                 int tolerance, const std::string& json_out_path,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    const nlohmann::json report = load_json_file(report_path);
    if (!report.contains("overall") ||
        !report["overall"].contains("change_points"))
      throw ParseError(report_path + ": missing overall.change_points");
    std::vector<int> detected;
    for (const auto& cp : report["overall"]["change_points"])
      detected.push_back(cp.at("window").get<int>());

    const GroundTruth truth = read_truth_file(truth_path);
    std::vector<std::int64_t> truth_windows;
    if (truth.unit == "window") {
      truth_windows = truth.positions;
    } else {
      const auto& params = report.at("parameters");
      const WindowSpec spec{params.at("win_size").get<std::int64_t>(),
                            params.at("win_step").get<std::int64_t>()};
      const int win_num = params.at("win_num").get<int>();
      for (std::int64_t p : truth.positions)
        truth_windows.push_back(window_of_trace(p, spec, win_num));
    }

    const EvalResult r = score(detected, truth_windows, tolerance);
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "precision=%.4f recall=%.4f f_score=%.4f matched=%zu\n",
                  r.precision, r.recall, r.f_score, r.matches.size());
    out << buf;

    if (!json_out_path.empty()) {
      ordered_json j;
      j["precision"] = r.precision;
      j["recall"] = r.recall;
      j["f_score"] = r.f_score;
      ordered_json matches = ordered_json::array();
      for (const auto& [d, t] : r.matches) {
        ordered_json mj;
        mj["detected"] = d;
        mj["truth"] = t;
        matches.push_back(std::move(mj));
      }
      j["matches"] = std::move(matches);
      j["tolerance"] = tolerance;
      write_text_file(json_out_path, j.dump(2) + "\n");
    }
  });
}

int cmd_map(const std::string& report_path, const std::string& matrix_path,
            const std::string& out_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    const nlohmann::json report = load_json_file(report_path);
    const ConfidenceMatrix full = read_matrix_csv_file(matrix_path);
    const auto& params = report.at("parameters");
    const double threshold = params.at("cluster_threshold").get<double>();
    const bool prune = params.value("prune_inactive", true);

    PrunedMatrix pruned;
    if (prune) {
      pruned = prune_inactive(full);
    } else {
      pruned.matrix = full;
      pruned.kept.resize(static_cast<std::size_t>(full.rows()));
      for (std::size_t i = 0; i < pruned.kept.size(); ++i)
        pruned.kept[i] = static_cast<Eigen::Index>(i);
    }
    const int active = static_cast<int>(pruned.matrix.rows());

    ClusterAssignment ca;
    if (active == 1) {
      ca.cluster_of = {1};
      ca.display_order = {0};
      ca.m = 1;
    } else if (active > 1) {
      const Dendrogram dg =
          weighted_linkage(correlation_distances(pruned.matrix.values));
      ca = cut_dendrogram(dg, active, threshold);
      ca = order_within_cluster(pruned.matrix.values, ca);
    }

    DriftMapView view;
    view.matrix = &full;
    for (int r : ca.display_order)
      view.display_order.push_back(
          static_cast<int>(pruned.kept[static_cast<std::size_t>(r)]));
    for (Eigen::Index r : pruned.removed)
      view.display_order.push_back(static_cast<int>(r));
    std::vector<int> sizes(static_cast<std::size_t>(ca.m), 0);
    for (int id : ca.cluster_of) ++sizes[static_cast<std::size_t>(id - 1)];
    for (int id = 1; id <= ca.m; ++id)
      view.block_sizes.push_back(sizes[static_cast<std::size_t>(id - 1)]);
    if (!pruned.removed.empty())
      view.block_sizes.push_back(static_cast<int>(pruned.removed.size()));
    for (const auto& cp : report.at("overall").at("change_points"))
      view.change_points.push_back(cp.at("window").get<int>());

    write_text_file(out_path, render_drift_map(view));
    out << "wrote " << out_path << '\n';
  });
}

int cmd_chart(const std::string& report_path, int cluster_id,
              const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&]() {
    const nlohmann::json report = load_json_file(report_path);
    std::vector<std::int64_t> starts;
    for (const auto& s : report.at("parameters").at("window_starts"))
      starts.push_back(parse_timestamp(s.get<std::string>()));

    for (const auto& cj : report.at("clusters")) {
      if (cj.at("id").get<int>() != cluster_id) continue;
      std::vector<double> mean_series =
          cj.at("mean_series").get<std::vector<double>>();
      std::vector<int> cps;
      for (const auto& cp : cj.at("change_points"))
        cps.push_back(cp.at("window").get<int>());
      const std::string title =
          "Cluster " + std::to_string(cluster_id) + " mean confidence (" +
          std::to_string(cj.at("size").get<std::size_t>()) + " constraints)";
      write_text_file(out_path,
                      render_drift_chart(mean_series, cps, starts, title));
      out << "wrote " << out_path << '\n';
      return;
    }
    throw ConfigError("report has no cluster with id " +
                      std::to_string(cluster_id));
  });
}

}  // namespace driftscope
