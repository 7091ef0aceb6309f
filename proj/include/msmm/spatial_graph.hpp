#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

namespace msmm {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Edge = std::pair<std::string, std::string>;

/// Result of building an area adjacency matrix.
struct Adjacency {
  SparseMatrix w;
  int components = 0;
  std::vector<std::string> warnings;
};

/// Symmetric 0/1 area adjacency with zero diagonal. Duplicate edges collapse.
/// Throws ReferenceError for unknown ids and DomainError for self-loops.
Adjacency build_adjacency(const std::vector<Edge>& edges, const std::vector<std::string>& areas);

/// Reads "area_a,area_b" lines; '#' starts a comment line.
std::vector<Edge> read_edge_list(std::istream& in);
std::vector<Edge> load_edge_list(const std::filesystem::path& path);

/// A = W kron (1_L 1_L^T).
SparseMatrix expand_multivariate(const SparseMatrix& w, int cells);

/// Q = diag(rowsums(A)) - A. Throws DomainError when A is not symmetric.
SparseMatrix icar_precision(const SparseMatrix& a);

/// Number of connected components of the graph with adjacency `a`.
int connected_components(const SparseMatrix& a);

/// Everything derived from the area graph for a table with `cells` cells.
struct SpatialStructure {
  SparseMatrix w;
  SparseMatrix a;
  SparseMatrix q;
  int areas = 0;
  int cells = 1;
  int components = 0;
  std::vector<std::string> warnings;
};

SpatialStructure build_spatial_structure(const std::vector<Edge>& edges,
                                         const std::vector<std::string>& areas, int cells);

}  // namespace msmm
