#pragma once

#include <filesystem>
#include <string>

#include "wavemaps/harness.hpp"

namespace wm {

inline constexpr const char* kCsvHeader =
    "tau,err_u,err_v,err_total,sphere_dev,steps,wall_ms,status";

/// CSV text. wall_ms is written as 0 unless the report records wall time,
/// which keeps repeated runs byte-identical.
std::string report_csv(const ConvergenceReport& r);

/// Standalone log-log SVG: one marker per row and one fitted line when a
/// fit exists. Rows without a finite error are pinned to the top edge.
std::string report_svg(const ConvergenceReport& r);

struct ReportFormats {
  bool svg = false;
};

/// Writes convergence.csv (and convergence.svg when requested) into dir. Throws Error when
/// the destination cannot be written.
void emit_report(const ConvergenceReport& r, const std::filesystem::path& dir,
                 ReportFormats formats = {});

/// Writes text to path, throwing Error on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace wm
