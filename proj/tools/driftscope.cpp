#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftscope/pipeline.hpp"

namespace {

using namespace driftscope;

std::vector<DriftSpecEntry> parse_drifts(const std::vector<std::string>& specs) {
  std::vector<DriftSpecEntry> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string& s = specs[i];
    DriftSpecEntry e;
    std::string pos = s;
    const auto colon = s.find(':');
    if (colon != std::string::npos) {
      pos = s.substr(0, colon);
      const std::string kind = s.substr(colon + 1);
      if (kind == "remove") e.kind = DriftKind::RemoveB;
      else if (kind == "swap") e.kind = DriftKind::SwapOrder;
      else if (kind == "loop") e.kind = DriftKind::Loop;
      else throw CLI::ValidationError("--drift", "kind must be remove, swap or loop");
    } else {
      // Unspecified kinds cycle through the three behaviors.
      e.kind = static_cast<DriftKind>(i % 3);
    }
    try {
      e.position = std::stoll(pos);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--drift", "position must be an integer");
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detects, quantifies and explains drifts in business process "
               "event logs via Declare constraint confidence over sliding "
               "windows"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::int64_t win_size = 0, win_step = 0;
  std::string penalty = "auto", bandwidth = "median";
  std::string linkage = "weighted", distance = "correlation";
  bool no_prune = false;

  auto* detect = app.add_subcommand("detect", "Run the full drift pipeline");
  detect->add_option("-i,--input", cfg.input_path, "Event log (CSV or XES)")
      ->required();
  detect->add_option("--format", cfg.format, "Input format: auto, csv, xes")
      ->check(CLI::IsMember({"auto", "csv", "xes"}))
      ->capture_default_str();
  detect->add_option("--case-col", cfg.csv_columns.case_id,
                     "CSV column holding the case id")
      ->capture_default_str();
  detect->add_option("--activity-col", cfg.csv_columns.activity,
                     "CSV column holding the activity name")
      ->capture_default_str();
  detect->add_option("--time-col", cfg.csv_columns.timestamp,
                     "CSV column holding the event timestamp")
      ->capture_default_str();
  auto* size_opt =
      detect->add_option("--window-size", win_size, "Traces per window");
  auto* step_opt =
      detect->add_option("--window-step", win_step, "Traces between windows");
  size_opt->needs(step_opt);
  step_opt->needs(size_opt);
  std::string kernel = "rbf";
  detect->add_option("--kernel", kernel, "Segment cost kernel: rbf or linear")
      ->check(CLI::IsMember({"rbf", "linear"}))
      ->capture_default_str();
  detect->add_option("--bandwidth", bandwidth,
                     "RBF bandwidth: a number or 'median'")
      ->capture_default_str();
  detect->add_option("--penalty", penalty,
                     "Segmentation penalty: a number or 'auto'")
      ->capture_default_str();
  detect->add_option("--min-segment", cfg.changepoint.min_segment,
                     "Minimum windows per segment")
      ->capture_default_str();
  detect->add_option("--cluster-threshold", cfg.cluster_threshold,
                     "Dendrogram cut height")
      ->capture_default_str();
  detect->add_option("--linkage", linkage, "Cluster linkage method")
      ->check(CLI::IsMember({"weighted"}))
      ->capture_default_str();
  detect->add_option("--distance", distance, "Series distance metric")
      ->check(CLI::IsMember({"correlation"}))
      ->capture_default_str();
  detect->add_option("--subsumption-epsilon", cfg.subsumption_epsilon,
                     "Tolerance for dropping implied constraints")
      ->capture_default_str();
  detect->add_flag("--no-prune", no_prune,
                   "Keep constraints that never activate in the analysis");
  detect->add_option("--out-dir", cfg.out_dir, "Output directory")
      ->capture_default_str();
  detect->add_option("--prefix", cfg.prefix, "Output file prefix")
      ->capture_default_str();
  detect->add_option("--threads", cfg.threads,
                     "Worker cap (0: DRIFTSCOPE_THREADS, then hardware)")
      ->capture_default_str();

  std::size_t gen_traces = 0;
  std::vector<std::string> gen_drifts;
  std::uint64_t gen_seed = 1;
  std::string gen_log = "log.csv", gen_truth = "truth.json";
  auto* generate =
      app.add_subcommand("generate", "Write a synthetic drifting log");
  generate->add_option("--traces", gen_traces, "Number of traces")->required();
  generate->add_option("--drift", gen_drifts,
                       "Drift as POS or POS:KIND (remove, swap, loop); "
                       "repeatable");
  generate->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  generate->add_option("--out", gen_log, "Log CSV path")->capture_default_str();
  generate->add_option("--truth", gen_truth, "Ground truth JSON path")
      ->capture_default_str();

  std::string eval_report, eval_truth, eval_out;
  int eval_tolerance = 1;
  auto* evaluate =
      app.add_subcommand("evaluate", "Score a report against ground truth");
  evaluate->add_option("--report", eval_report, "Report JSON from detect")
      ->required();
  evaluate->add_option("--truth", eval_truth, "Ground truth JSON")->required();
  evaluate->add_option("--tolerance", eval_tolerance,
                       "Matching tolerance in windows")
      ->capture_default_str();
  evaluate->add_option("--out", eval_out, "Optional result JSON path");

  std::string map_report, map_matrix, map_out = "map.svg";
  auto* map_cmd =
      app.add_subcommand("map", "Re-render the drift map from saved outputs");
  map_cmd->add_option("--report", map_report, "Report JSON from detect")
      ->required();
  map_cmd->add_option("--matrix", map_matrix, "Matrix CSV from detect")
      ->required();
  map_cmd->add_option("--out", map_out, "SVG path")->capture_default_str();

  std::string chart_report, chart_out = "chart.svg";
  int chart_cluster = 1;
  auto* chart_cmd =
      app.add_subcommand("chart", "Re-render a cluster chart from a report");
  chart_cmd->add_option("--report", chart_report, "Report JSON from detect")
      ->required();
  chart_cmd->add_option("--cluster", chart_cluster, "Cluster id")
      ->capture_default_str();
  chart_cmd->add_option("--out", chart_out, "SVG path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*detect) {
    cfg.changepoint.kernel =
        kernel == "linear" ? KernelKind::Linear : KernelKind::Rbf;
    try {
      if (penalty != "auto") cfg.changepoint.penalty = std::stod(penalty);
    } catch (const std::exception&) {
      std::cerr << "error: --penalty must be a number or 'auto'\n";
      return 2;
    }
    try {
      if (bandwidth != "median") cfg.changepoint.bandwidth = std::stod(bandwidth);
    } catch (const std::exception&) {
      std::cerr << "error: --bandwidth must be a number or 'median'\n";
      return 2;
    }
    if (win_size > 0 || win_step > 0) cfg.window = WindowSpec{win_size, win_step};
    cfg.prune = !no_prune;
    return cmd_detect(cfg, std::cout, std::cerr);
  }
  if (*generate) {
    std::vector<DriftSpecEntry> drifts;
    try {
      drifts = parse_drifts(gen_drifts);
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    return cmd_generate(gen_traces, drifts, gen_seed, gen_log, gen_truth,
                        std::cout, std::cerr);
  }
  if (*evaluate)
    return cmd_evaluate(eval_report, eval_truth, eval_tolerance, eval_out,
                        std::cout, std::cerr);
  if (*map_cmd)
    return cmd_map(map_report, map_matrix, map_out, std::cout, std::cerr);
  if (*chart_cmd)
    return cmd_chart(chart_report, chart_cluster, chart_out, std::cout,
                     std::cerr);
  return 2;
}
