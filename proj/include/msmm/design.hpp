#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace msmm {

struct DesignOptions {
  bool intercept = true;
  bool log_population = true;
  bool cell_dummies = true;
};

/// Fixed-effect design for entries ordered area-major, cell-minor.
///
/// Columns: intercept, log population of the area, and indicators for cells
/// 2..L (cell 1 is the baseline). Disabled blocks are omitted.
Eigen::MatrixXd build_design(const std::vector<std::string>& areas, int cells,
                             const std::map<std::string, double>& population,
                             const DesignOptions& options = {});

/// Two-column file (area_id, population); an optional header row is skipped.
std::map<std::string, double> read_population(std::istream& in);
std::map<std::string, double> load_population(const std::filesystem::path& path);

}  // namespace msmm
