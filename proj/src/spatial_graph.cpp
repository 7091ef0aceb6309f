#include "msmm/spatial_graph.hpp"

#include <fstream>
#include <numeric>
#include <unordered_map>

#include "msmm/csv.hpp"
#include "msmm/errors.hpp"

namespace msmm {

Adjacency build_adjacency(const std::vector<Edge>& edges, const std::vector<std::string>& areas) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < areas.size(); ++i) index.emplace(areas[i], static_cast<int>(i));
  auto lookup = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw ReferenceError("edge references unknown area '" + id + "'");
    return it->second;
  };

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    if (a == b) throw DomainError("self-loop on area '" + a + "'");
    const int i = lookup(a);
    const int j = lookup(b);
    triplets.emplace_back(i, j, 1.0);
    triplets.emplace_back(j, i, 1.0);
  }
  const auto m = static_cast<Eigen::Index>(areas.size());
  Adjacency out;
  out.w.resize(m, m);
  // Duplicates must collapse to 1, not sum.
  out.w.setFromTriplets(triplets.begin(), triplets.end(), [](double, double) { return 1.0; });
  out.w.makeCompressed();
  out.components = connected_components(out.w);
  if (out.components > 1)
    out.warnings.push_back("adjacency graph is disconnected (" +
                           std::to_string(out.components) + " components)");
  return out;
}

std::vector<Edge> read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  for (const auto& rec : csv::read(in, /*allow_comments=*/true)) {
    if (rec.size() != 2) throw SchemaError("edge list lines must hold exactly two area ids");
    edges.emplace_back(rec[0], rec[1]);
  }
  return edges;
}

std::vector<Edge> load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open adjacency file " + path.string());
  return read_edge_list(in);
}

SparseMatrix expand_multivariate(const SparseMatrix& w, int cells) {
  if (cells < 1) throw DomainError("cell count must be >= 1");
  const auto m = w.rows();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(w.nonZeros()) * cells * cells);
  for (Eigen::Index k = 0; k < w.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(w, k); it; ++it)
      for (int s = 0; s < cells; ++s)
        for (int t = 0; t < cells; ++t)
          triplets.emplace_back(it.row() * cells + s, it.col() * cells + t, it.value());
  SparseMatrix a(m * cells, m * cells);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

SparseMatrix icar_precision(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("adjacency must be square");
  const SparseMatrix at = a.transpose();
  if ((a - at).norm() > 0.0) throw DomainError("adjacency is not symmetric");
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (it.row() == it.col() && it.value() != 0.0)
        throw DomainError("adjacency has a nonzero diagonal");
      if (it.value() < 0.0) throw DomainError("adjacency has negative entries");
      degree(it.row()) += it.value();
    }
  SparseMatrix q = -a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) q.coeffRef(i, i) += degree(i);
  q.prune(0.0);
  q.makeCompressed();
  return q;
}

int connected_components(const SparseMatrix& a) {
  const auto n = a.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = static_cast<int>(n);
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (it.value() == 0.0) continue;
      const auto ra = find(it.row());
      const auto rb = find(it.col());
      if (ra != rb) {
        parent[ra] = rb;
        --components;
      }
    }
  return components;
}

SpatialStructure build_spatial_structure(const std::vector<Edge>& edges,
                                         const std::vector<std::string>& areas, int cells) {
  auto adj = build_adjacency(edges, areas);
  SpatialStructure s;
  s.areas = static_cast<int>(areas.size());
  s.cells = cells;
  s.a = expand_multivariate(adj.w, cells);
  s.q = icar_precision(s.a);
  s.w = std::move(adj.w);
  s.components = adj.components;
  s.warnings = std::move(adj.warnings);
  return s;
}

}  // namespace msmm
