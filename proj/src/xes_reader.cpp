#include "driftscope/xes_reader.hpp"

#include <fstream>
#include <sstream>

#include "driftscope/errors.hpp"
#include "driftscope/xml_reader.hpp"

namespace driftscope {

namespace {

// XES attributes are child elements like <string key="..." value="..."/>.
const std::string* xes_value(const XmlNode& node, std::string_view key) {
  for (const auto& child : node.children) {
    const std::string* k = child.attribute("key");
    if (k && *k == key) return child.attribute("value");
  }
  return nullptr;
}

}  // namespace

EventLog read_xes_log(std::string_view content) {
  const XmlNode root = parse_xml(content);
  if (root.name != "log")
    throw ParseError("XES root element must be <log>, got <" + root.name + ">");

  EventLogBuilder builder;
  std::size_t ordinal = 0;
  for (const XmlNode* trace : root.children_named("trace")) {
    ++ordinal;
    std::string case_id;
    if (const std::string* name = xes_value(*trace, "concept:name"))
      case_id = *name;
    else
      case_id = std::to_string(ordinal);

    std::vector<std::string> activities;
    std::int64_t first_ts = 0;
    bool have_ts = false;
    for (const XmlNode* event : trace->children_named("event")) {
      const std::string* activity = xes_value(*event, "concept:name");
      if (!activity)
        throw ParseError("trace '" + case_id + "': event " +
                         std::to_string(activities.size() + 1) +
                         " has no concept:name");
      if (!have_ts) {
        const std::string* ts = xes_value(*event, "time:timestamp");
        if (!ts)
          throw ParseError("trace '" + case_id +
                           "': first event has no time:timestamp");
        first_ts = parse_timestamp(*ts);
        have_ts = true;
      }
      activities.push_back(*activity);
    }
    if (activities.empty()) continue;
    builder.add_trace(std::move(case_id), first_ts, std::move(activities));
  }

  if (builder.empty()) throw ParseError("XES log contains no non-empty traces");
  return sort_by_first_timestamp(std::move(builder).finalize());
}

EventLog read_xes_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return read_xes_log(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace driftscope
