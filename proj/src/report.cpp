#include "wavemaps/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wavemaps/snapshot.hpp"

namespace wm {

std::string report_csv(const ConvergenceReport& r) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& row : r.rows) {
    out << format_double(row.tau) << ',' << format_double(row.err_u) << ','
        << format_double(row.err_v) << ',' << format_double(row.err_total) << ','
        << format_double(row.sphere_dev) << ',' << row.steps << ','
        << (r.record_wall_time ? format_double(row.wall_ms) : std::string("0")) << ','
        << row.status << "\n";
  }
  return out.str();
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

std::string report_svg(const ConvergenceReport& r) {
  constexpr double width = 480.0;
  constexpr double height = 360.0;
  constexpr double margin = 48.0;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& row : r.rows) {
    if (!(row.tau > 0.0)) continue;
    const double x = std::log2(row.tau);
    xmin = first ? x : std::min(xmin, x);
    xmax = first ? x : std::max(xmax, x);
    first = false;
  }
  first = true;
  for (const auto& row : r.rows) {
    if (!(row.err_total > 0.0) || !std::isfinite(row.err_total)) continue;
    const double y = std::log2(row.err_total);
    ymin = first ? y : std::min(ymin, y);
    ymax = first ? y : std::max(ymax, y);
    first = false;
  }
  if (xmax - xmin < 1e-9) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-9) { ymin -= 0.5; ymax += 0.5; }
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double y) {
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n"
      << "<line class=\"axis\" x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
      << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n"
      << "<line class=\"axis\" x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">log2 tau</text>\n"
      << "<text x=\"14\" y=\"" << height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 "
      << height / 2 << ")\" text-anchor=\"middle\">log2 error</text>\n";
  if (r.fit) {
    const double y0 = r.fit->intercept + r.fit->slope * xmin;
    const double y1 = r.fit->intercept + r.fit->slope * xmax;
    out << "<line class=\"fit\" x1=\"" << num(px(xmin)) << "\" y1=\"" << num(py(y0))
        << "\" x2=\"" << num(px(xmax)) << "\" y2=\"" << num(py(y1))
        << "\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n"
        << "<text x=\"" << width - margin << "\" y=\"" << margin - 10
        << "\" text-anchor=\"end\" font-size=\"12\">slope " << num(r.fit->slope) << "</text>\n";
  }
  for (const auto& row : r.rows) {
    const bool finite = row.err_total > 0.0 && std::isfinite(row.err_total);
    const double x = row.tau > 0.0 ? px(std::log2(row.tau)) : margin;
    const double y = finite ? py(std::log2(row.err_total)) : margin;
    out << "<circle class=\"" << (finite ? "marker" : "marker flagged") << "\" cx=\"" << num(x)
        << "\" cy=\"" << num(y) << "\" r=\"4\" fill=\"" << (finite ? "black" : "red")
        << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed for " + path.string());
}

void emit_report(const ConvergenceReport& r, const std::filesystem::path& dir,
                 ReportFormats formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "convergence.csv", report_csv(r));
  if (formats.svg) write_text(dir / "convergence.svg", report_svg(r));
}

}  // namespace wm
