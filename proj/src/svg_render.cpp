#include "driftscope/svg_render.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "driftscope/colormap.hpp"
#include "driftscope/errors.hpp"
#include "driftscope/event_log.hpp"

namespace driftscope {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out.push_back(c);
  }
  return out;
}

void open_svg(std::string& s) {
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1200\" height=\"800\" "
       "viewBox=\"0 0 1200 800\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"1200\" height=\"800\" fill=\"#ffffff\"/>\n";
}

void add_line(std::string& s, double x1, double y1, double x2, double y2,
              const std::string& cls, const std::string& stroke, double width,
              bool dashed = false) {
  s += "<line class=\"" + cls + "\" x1=\"" + num(x1) + "\" y1=\"" + num(y1) +
       "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke +
       "\" stroke-width=\"" + num(width) + "\"";
  if (dashed) s += " stroke-dasharray=\"6,4\"";
  s += "/>\n";
}

void add_text(std::string& s, double x, double y, const std::string& cls,
              const std::string& anchor, const std::string& text) {
  s += "<text class=\"" + cls + "\" x=\"" + num(x) + "\" y=\"" + num(y) +
       "\" text-anchor=\"" + anchor +
       "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">" +
       escape(text) + "</text>\n";
}

// At most max_ticks window indices, evenly strided from the first window.
std::vector<int> tick_indices(int n, int max_ticks) {
  std::vector<int> out;
  if (n <= 0) return out;
  const int stride = (n + max_ticks - 1) / max_ticks;
  for (int i = 0; i < n; i += stride) out.push_back(i);
  return out;
}

}  // namespace

std::string render_drift_map(const DriftMapView& view) {
  if (!view.matrix) throw ConfigError("drift map needs a matrix");
  const ConfidenceMatrix& m = *view.matrix;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  if (rows < 1 || cols < 1) throw ConfigError("drift map needs a non-empty matrix");

  if (static_cast<int>(view.display_order.size()) != rows)
    throw ConfigError("display order must cover every matrix row");
  std::vector<bool> seen(static_cast<std::size_t>(rows), false);
  for (int r : view.display_order) {
    if (r < 0 || r >= rows || seen[static_cast<std::size_t>(r)])
      throw ConfigError("display order must be a permutation of the rows");
    seen[static_cast<std::size_t>(r)] = true;
  }
  if (std::accumulate(view.block_sizes.begin(), view.block_sizes.end(), 0) != rows)
    throw ConfigError("display block sizes must sum to the row count");
  for (int cp : view.change_points)
    if (cp < 1 || cp > cols)
      throw ConfigError("change point outside the window range");

  const double px = 60.0, py = 30.0, pw = 1100.0, ph = 710.0;
  const double cw = pw / cols;
  const double ch = ph / rows;

  std::string s;
  s.reserve(static_cast<std::size_t>(rows) * cols * 90 + 4096);
  open_svg(s);

  s += "<g shape-rendering=\"crispEdges\">\n";
  for (int p = 0; p < rows; ++p) {
    const int r = view.display_order[static_cast<std::size_t>(p)];
    const double y = py + p * ch;
    for (int j = 0; j < cols; ++j) {
      s += "<rect class=\"cell\" x=\"" + num(px + j * cw) + "\" y=\"" + num(y) +
           "\" width=\"" + num(cw) + "\" height=\"" + num(ch) + "\" fill=\"" +
           to_hex(plasma(m.values(r, j))) + "\"/>\n";
    }
  }
  s += "</g>\n";

  int cum = 0;
  for (std::size_t b = 0; b + 1 < view.block_sizes.size(); ++b) {
    cum += view.block_sizes[b];
    const double y = py + cum * ch;
    add_line(s, px, y, px + pw, y, "cluster-line", "#ffffff", 2.0);
  }

  for (int cp : view.change_points) {
    const double x = px + (cp - 1) * cw;
    add_line(s, x, py, x, py + ph, "drift-line", "#000000", 2.0);
  }

  s += "<rect class=\"frame\" x=\"" + num(px) + "\" y=\"" + num(py) +
       "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.00\"/>\n";

  for (int i : tick_indices(cols, 10)) {
    const double x = px + (i + 0.5) * cw;
    add_line(s, x, py + ph, x, py + ph + 5.0, "tick-mark", "#333333", 1.0);
    add_text(s, x, py + ph + 20.0, "tick", "middle",
             format_timestamp_date(m.window_start_ms[static_cast<std::size_t>(i)]));
  }
  add_text(s, px + pw / 2.0, py + ph + 42.0, "axis-label", "middle",
           "window start date");
  add_text(s, 18.0, py + ph / 2.0, "axis-label", "middle", "constraints");

  s += "</svg>\n";
  return s;
}

std::string render_drift_chart(const std::vector<double>& mean_series,
                               const std::vector<int>& change_points,
                               const std::vector<std::int64_t>& window_start_ms,
                               const std::string& title) {
  const int n = static_cast<int>(mean_series.size());
  if (n < 1) throw ConfigError("drift chart needs a non-empty series");
  if (window_start_ms.size() != mean_series.size())
    throw ConfigError("drift chart needs one start time per window");
  for (int cp : change_points)
    if (cp < 1 || cp > n)
      throw ConfigError("change point outside the window range");

  const double px = 80.0, py = 40.0, pw = 1080.0, ph = 690.0;
  const double cw = pw / n;
  const auto x_of = [&](int j) { return px + (j + 0.5) * cw; };
  const auto y_of = [&](double v) { return py + ph - v * ph; };

  std::string s;
  s.reserve(static_cast<std::size_t>(n) * 20 + 4096);
  open_svg(s);

  for (int k = 0; k <= 4; ++k) {
    const double v = k / 4.0;
    add_line(s, px, y_of(v), px + pw, y_of(v), "grid", "#dddddd", 1.0);
    add_text(s, px - 10.0, y_of(v) + 4.0, "tick", "end", num(v));
  }

  for (int cp : change_points) {
    const double x = px + (cp - 1) * cw;
    add_line(s, x, py, x, py + ph, "drift-line", "#000000", 1.5, true);
  }

  s += "<polyline class=\"mean-line\" fill=\"none\" stroke=\"#5b21b6\" "
       "stroke-width=\"2.00\" points=\"";
  for (int j = 0; j < n; ++j) {
    if (j) s += ' ';
    s += num(x_of(j)) + ',' + num(y_of(std::clamp(mean_series[static_cast<std::size_t>(j)], 0.0, 1.0)));
  }
  s += "\"/>\n";

  s += "<rect class=\"frame\" x=\"" + num(px) + "\" y=\"" + num(py) +
       "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.00\"/>\n";

  for (int i : tick_indices(n, 10)) {
    const double x = x_of(i);
    add_line(s, x, py + ph, x, py + ph + 5.0, "tick-mark", "#333333", 1.0);
    add_text(s, x, py + ph + 20.0, "tick", "middle",
             format_timestamp_date(window_start_ms[static_cast<std::size_t>(i)]));
  }
  add_text(s, px + pw / 2.0, py + ph + 42.0, "axis-label", "middle",
           "window start date");
  add_text(s, px + pw / 2.0, 24.0, "title", "middle", title);

  s += "</svg>\n";
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace driftscope
