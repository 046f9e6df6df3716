#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "driftscope/declare.hpp"
#include "driftscope/event_log.hpp"

namespace driftscope {

// Dense confidence series: row i is the trajectory of constraint i across
// windows, entry (i,j) its confidence in sub-log j. Matrices loaded back
// from CSV carry labels but an empty constraint list.
struct ConfidenceMatrix {
  Eigen::MatrixXd values;  // constraints x windows, entries in [0,1]
  std::vector<Constraint> constraints;
  std::vector<std::string> labels;  // textual form per row
  std::vector<std::int64_t> window_start_ms;
  std::vector<std::int64_t> window_end_ms;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

// Evaluates the whole constraint space over the sliding windows. Rows are
// filled in parallel; max_threads 0 defers to DRIFTSCOPE_THREADS, then to
// the hardware. Requires at least 2 windows.
ConfidenceMatrix build_matrix(const EventLog& log, const WindowSpec& spec,
                              const std::vector<TemplateKind>& repertoire =
                                  all_templates(),
                              int max_threads = 0);

// Rows identically 0 never activated anywhere; they carry no trend and have
// no defined correlation to anything.
struct PrunedMatrix {
  ConfidenceMatrix matrix;
  std::vector<Eigen::Index> kept;     // original row index per surviving row
  std::vector<Eigen::Index> removed;  // original indices of all-zero rows
};

PrunedMatrix prune_inactive(const ConfidenceMatrix& m);

// CSV round-trip: header "constraint,<start1>,<start2>,..." with RFC 3339
// window starts, one row per constraint, 6-decimal confidences.
void write_matrix_csv(std::ostream& out, const ConfidenceMatrix& m);
void write_matrix_csv_file(const std::string& path, const ConfidenceMatrix& m);
ConfidenceMatrix read_matrix_csv(std::istream& in);
ConfidenceMatrix read_matrix_csv_file(const std::string& path);

}  // namespace driftscope
