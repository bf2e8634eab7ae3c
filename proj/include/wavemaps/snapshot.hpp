#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wavemaps/spectral.hpp"

namespace wm {

/// Real-space samples of one or more scalar columns on a grid.
///
/// On disk:
///   # wavemaps-snapshot v1
///   # dim=<d> n_per_axis=<N> period=<L> time=<t>
///   <col1>,<col2>,...
///   one row per grid point, row-major over (x1, x2, x3), %.17g values
struct Snapshot {
  GridSpec grid;
  double time = 0.0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[column][point]
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Columns u1,u2,u3,v1,v2,v3 sampled from the two fields.
Snapshot snapshot_of(const Field& u, const Field& v, double time);

/// Returns the samples of a named column, throws if absent.
const std::vector<double>& column(const Snapshot& snap, const std::string& name);

/// %.17g formatting used by every text output.
std::string format_double(double x);

}  // namespace wm
