#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "msmm/moran_basis.hpp"
#include "msmm/spatial_graph.hpp"
#include "msmm/tabulation.hpp"

namespace msmm {

/// Rook-adjacency grid with area ids "g00", "g01", ... in row-major order.
struct GridGraph {
  std::vector<std::string> areas;
  std::vector<Edge> edges;
  Eigen::MatrixXd coords;  // m x 2 (row, column)
};

GridGraph make_grid(int rows, int cols);

/// Synthetic study input on a grid whose cells follow one of two spatial fields.
///
/// Truth for a cell in group g is X beta_g + psi eta_g, so each group is
/// exactly representable by one mixture component. Group 0 holds the first
/// half of the cells (east-west gradient, large counts, small variances);
/// group 1 the rest (north-west bump, small counts, larger variances).
struct TwoFieldFixture {
  GridGraph grid;
  int cells = 0;
  std::map<std::string, double> population;
  SpatialStructure spatial;
  Eigen::MatrixXd x;
  MoranBasis basis;
  LogTable truth;
  std::vector<int> partition;  // generating group per observation
};

struct TwoFieldOptions {
  int rows = 6;
  int cols = 6;
  int cells = 4;
  /// When false both halves share group 0's field and scale.
  bool two_fields = true;
  /// Multiplies every sampling variance.
  double variance_scale = 1.0;
  std::uint64_t seed = 20240531;
};

TwoFieldFixture make_two_field_fixture(const TwoFieldOptions& options = {});

}  // namespace msmm
