#include "msmm/design.hpp"

#include <cmath>
#include <fstream>

#include "msmm/csv.hpp"
#include "msmm/errors.hpp"

namespace msmm {

Eigen::MatrixXd build_design(const std::vector<std::string>& areas, int cells,
                             const std::map<std::string, double>& population,
                             const DesignOptions& options) {
  if (cells < 1) throw DomainError("cell count must be >= 1");
  const auto m = static_cast<Eigen::Index>(areas.size());
  const Eigen::Index p = (options.intercept ? 1 : 0) + (options.log_population ? 1 : 0) +
                         (options.cell_dummies ? cells - 1 : 0);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m * cells, p);
  for (Eigen::Index a = 0; a < m; ++a) {
    double log_pop = 0.0;
    if (options.log_population) {
      auto it = population.find(areas[a]);
      if (it == population.end()) throw ReferenceError("no population for area " + areas[a]);
      if (!(it->second > 0.0)) throw DomainError("population must be positive: " + areas[a]);
      log_pop = std::log(it->second);
    }
    for (int s = 0; s < cells; ++s) {
      const Eigen::Index row = a * cells + s;
      Eigen::Index col = 0;
      if (options.intercept) x(row, col++) = 1.0;
      if (options.log_population) x(row, col++) = log_pop;
      if (options.cell_dummies) {
        if (s > 0) x(row, col + s - 1) = 1.0;
      }
    }
  }
  return x;
}

std::map<std::string, double> read_population(std::istream& in) {
  std::map<std::string, double> out;
  const auto records = csv::read(in, /*allow_comments=*/true);
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& rec = records[k];
    if (rec.size() != 2) throw SchemaError("population file needs two columns");
    if (k == 0) {
      try {
        csv::parse_double(rec[1], "population");
      } catch (const SchemaError&) {
        continue;  // header
      }
    }
    out[rec[0]] = csv::parse_double(rec[1], "population for " + rec[0]);
  }
  return out;
}

std::map<std::string, double> load_population(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open population file " + path.string());
  return read_population(in);
}

}  // namespace msmm
