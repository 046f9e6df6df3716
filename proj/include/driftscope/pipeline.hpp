#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "driftscope/changepoint.hpp"
#include "driftscope/csv_reader.hpp"
#include "driftscope/declare.hpp"
#include "driftscope/evaluation.hpp"

namespace driftscope {

struct RunConfig {
  std::string input_path;
  std::string format = "auto";  // auto (by extension), csv, xes
  CsvColumns csv_columns;
  std::optional<WindowSpec> window;  // unset: the |L|/61 rule below
  std::vector<TemplateKind> repertoire = all_templates();
  ChangePointConfig changepoint;
  double cluster_threshold = 0.7;
  double subsumption_epsilon = 0.01;
  bool prune = true;
  std::string out_dir = ".";
  std::string prefix = "drift";
  int threads = 0;  // 0: DRIFTSCOPE_THREADS, then hardware
};

// winStep = floor(|L| / 61), winSize = 2 * winStep, both clamped to >= 1,
// aiming at roughly 60 windows.
WindowSpec auto_window_spec(std::size_t log_size);

// Dispatches on format, or on the file extension when format is "auto".
EventLog read_log(const std::string& path, const std::string& format,
                  const CsvColumns& columns);

// Everything cmd_detect writes, assembled before any file is touched.
struct DetectArtifacts {
  std::string report_json;
  std::string matrix_csv;
  std::string map_svg;
  std::vector<std::pair<int, std::string>> charts;  // cluster id -> document
  std::string summary;
  std::vector<std::string> warnings;
};

DetectArtifacts run_detect(const EventLog& log, const RunConfig& cfg);

// Process-level entry points: print to the given streams, map failures to
// exit codes (1 config/analysis, 2 I/O or parse).
int cmd_detect(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_generate(std::size_t n_traces, const std::vector<DriftSpecEntry>& drifts,
                 std::uint64_t seed, const std::string& log_path,
                 const std::string& truth_path, std::ostream& out,
                 std::ostream& err);

int cmd_evaluate(const std::string& report_path, const std::string& truth_path,
                 int tolerance, const std::string& json_out_path,
                 std::ostream& out, std::ostream& err);

int cmd_map(const std::string& report_path, const std::string& matrix_path,
            const std::string& out_path, std::ostream& out, std::ostream& err);

int cmd_chart(const std::string& report_path, int cluster_id,
              const std::string& out_path, std::ostream& out, std::ostream& err);

}  // namespace driftscope
