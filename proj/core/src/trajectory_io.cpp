#include "sdt/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sdt {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) throw std::runtime_error("trajectory csv: bad number '" + s + "'");
  return v;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t";
  for (int j = 0; j < traj.dim(); ++j) os << ",x" << (j + 1);
  os << "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << fmt_double(traj.times[i]);
    for (Eigen::Index j = 0; j < traj.states[i].size(); ++j) os << "," << fmt_double(traj.states[i][j]);
    os << "\n";
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  write_trajectory_csv(os, traj);
}

Trajectory read_trajectory_csv(std::istream& is) {
  Trajectory traj;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("trajectory csv: empty input");
  // header is checked only for the leading time column
  if (line.rfind("t,", 0) != 0 && line != "t") throw std::runtime_error("trajectory csv: missing 't,...' header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell));
    if (row.size() < 2) throw std::runtime_error("trajectory csv: row needs t and at least one coordinate");
    StateVec x(static_cast<Eigen::Index>(row.size() - 1));
    for (std::size_t j = 1; j < row.size(); ++j) x[static_cast<Eigen::Index>(j - 1)] = row[j];
    traj.push_back(row[0], std::move(x));
  }
  traj.validate();
  return traj;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  return read_trajectory_csv(is);
}

}  // namespace sdt
