#include "wavemaps/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wm {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  for (const auto& col : snap.data) {
    if (col.size() != snap.grid.size()) {
      throw ValidationError("write_snapshot: column length does not match grid");
    }
  }
  if (snap.columns.size() != snap.data.size()) {
    throw ValidationError("write_snapshot: column names do not match data");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "# wavemaps-snapshot v1\n";
  out << "# dim=" << snap.grid.dim << " n_per_axis=" << snap.grid.n_per_axis
      << " period=" << format_double(snap.grid.period)
      << " time=" << format_double(snap.time) << "\n";
  for (std::size_t c = 0; c < snap.columns.size(); ++c) {
    out << (c ? "," : "") << snap.columns[c];
  }
  out << "\n";
  for (std::size_t i = 0; i < snap.grid.size(); ++i) {
    for (std::size_t c = 0; c < snap.data.size(); ++c) {
      out << (c ? "," : "") << format_double(snap.data[c][i]);
    }
    out << "\n";
  }
  if (!out) throw Error("write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open snapshot " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "# wavemaps-snapshot v1") {
    throw ValidationError(path.string() + ": not a wavemaps snapshot");
  }
  Snapshot snap;
  std::getline(in, line);
  {
    std::istringstream hdr(line.substr(line.find_first_not_of("# ")));
    std::string tok;
    while (hdr >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const auto key = tok.substr(0, eq);
      const auto val = tok.substr(eq + 1);
      if (key == "dim") {
        snap.grid.dim = std::stoi(val);
      } else if (key == "n_per_axis") {
        snap.grid.n_per_axis = std::stoul(val);
      } else if (key == "period") {
        snap.grid.period = std::stod(val);
      } else if (key == "time") {
        snap.time = std::stod(val);
      }
    }
  }
  snap.grid.validate();
  std::getline(in, line);
  {
    std::istringstream hdr(line);
    std::string name;
    while (std::getline(hdr, name, ',')) snap.columns.push_back(name);
  }
  snap.data.assign(snap.columns.size(), {});
  for (auto& col : snap.data) col.reserve(snap.grid.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(row, cell, ',')) {
      if (c >= snap.data.size()) throw ValidationError("snapshot row too long");
      snap.data[c++].push_back(std::stod(cell));
    }
    if (c != snap.data.size()) throw ValidationError("snapshot row too short");
  }
  for (const auto& col : snap.data) {
    if (col.size() != snap.grid.size()) {
      throw ValidationError(path.string() + ": row count does not match grid");
    }
  }
  return snap;
}

Snapshot snapshot_of(const Field& u, const Field& v, double time) {
  Snapshot snap;
  snap.grid = u.grid();
  snap.time = time;
  snap.columns = {"u1", "u2", "u3", "v1", "v2", "v3"};
  for (std::size_t i = 0; i < 3; ++i) snap.data.push_back(to_physical(u[i]));
  for (std::size_t i = 0; i < 3; ++i) snap.data.push_back(to_physical(v[i]));
  return snap;
}

const std::vector<double>& column(const Snapshot& snap, const std::string& name) {
  for (std::size_t c = 0; c < snap.columns.size(); ++c) {
    if (snap.columns[c] == name) return snap.data[c];
  }
  throw ValidationError("snapshot has no column " + name);
}

}  // namespace wm
