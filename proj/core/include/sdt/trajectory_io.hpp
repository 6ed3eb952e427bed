#pragma once

#include "sdt/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace sdt {

// CSV format: header "t,x1,...,xD", one row per sample, '.' decimal separator.

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

Trajectory read_trajectory_csv(std::istream& is);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

}  // namespace sdt
