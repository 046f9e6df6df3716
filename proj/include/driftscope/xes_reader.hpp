#pragma once

#include <string>
#include <string_view>

#include "driftscope/event_log.hpp"

namespace driftscope {

// Reads an XES document: a <log> of <trace> elements whose <event> children
// carry concept:name (the activity) and time:timestamp attributes.  The
// case id is the trace-level concept:name, falling back to the 1-based
// trace ordinal.  Traces without events are skipped.  Returned traces are
// sorted by the timestamp of their first event.
EventLog read_xes_log(std::string_view content);
EventLog read_xes_log_file(const std::string& path);

}  // namespace driftscope
