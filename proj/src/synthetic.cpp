#include "msmm/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "msmm/design.hpp"
#include "msmm/errors.hpp"
#include "msmm/random.hpp"

namespace msmm {

GridGraph make_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw DomainError("grid needs positive dimensions");
  GridGraph g;
  const int width = rows * cols > 100 ? 4 : 2;
  auto id = [&](int r, int c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "g%0*d", width, r * cols + c);
    return std::string(buf);
  };
  g.coords.resize(rows * cols, 2);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      g.areas.push_back(id(r, c));
      g.coords.row(r * cols + c) << r, c;
      if (c + 1 < cols) g.edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) g.edges.emplace_back(id(r, c), id(r + 1, c));
    }
  return g;
}

namespace {

/// Projects an area-level pattern (repeated over cells) onto the basis span
/// and scales it to unit standard deviation.
Eigen::VectorXd basis_field(const Eigen::VectorXd& area_values, int cells,
                            const Eigen::MatrixXd& psi) {
  Eigen::VectorXd full(area_values.size() * cells);
  for (Eigen::Index a = 0; a < area_values.size(); ++a)
    full.segment(a * cells, cells).setConstant(area_values(a));
  Eigen::VectorXd field = psi * (psi.transpose() * full);
  const double sd = std::sqrt((field.array() - field.mean()).square().sum() /
                              static_cast<double>(field.size() - 1));
  if (!(sd > 0.0)) throw NumericalError("synthetic field vanishes on the basis span");
  return field / sd;
}

}  // namespace

TwoFieldFixture make_two_field_fixture(const TwoFieldOptions& options) {
  if (options.cells < 2) throw DomainError("two-field fixture needs at least two cells");
  TwoFieldFixture f;
  f.grid = make_grid(options.rows, options.cols);
  f.cells = options.cells;
  const auto m = static_cast<Eigen::Index>(f.grid.areas.size());
  Rng rng(options.seed);

  for (Eigen::Index a = 0; a < m; ++a) {
    const double r = f.grid.coords(a, 0), c = f.grid.coords(a, 1);
    const double log_pop = 9.0 + 0.5 * std::sin(1.3 * r + 0.4) + 0.4 * std::cos(0.9 * c) +
                           0.3 * rng.normal();
    f.population[f.grid.areas[a]] = std::exp(log_pop);
  }
  f.x = build_design(f.grid.areas, f.cells, f.population);
  f.spatial = build_spatial_structure(f.grid.edges, f.grid.areas, f.cells);
  f.basis = build_moran_basis(f.x, f.spatial);

  const double mid_c = 0.5 * (options.cols - 1);
  Eigen::VectorXd gradient(m), bump(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const double r = f.grid.coords(a, 0), c = f.grid.coords(a, 1);
    gradient(a) = mid_c > 0 ? (c - mid_c) / mid_c : 0.0;
    bump(a) = std::exp(-(r * r + c * c) / 6.0);
  }
  const Eigen::VectorXd field0 = basis_field(gradient, f.cells, f.basis.psi);
  const Eigen::VectorXd field1 = basis_field(bump, f.cells, f.basis.psi);

  const Eigen::Index n = m * f.cells;
  Eigen::VectorXd z(n), d(n);
  f.partition.resize(static_cast<std::size_t>(n));
  const int split = f.cells / 2;
  for (Eigen::Index a = 0; a < m; ++a) {
    const double log_pop = std::log(f.population.at(f.grid.areas[a]));
    for (int s = 0; s < f.cells; ++s) {
      const Eigen::Index i = a * f.cells + s;
      const int group = (s < split || !options.two_fields) ? 0 : 1;
      const double offset = 0.25 * (s % 2);
      const double u = rng.uniform();
      if (group == 0) {
        z(i) = 4.0 + 0.5 * log_pop + offset + 1.0 * field0(i);
      } else {
        z(i) = -1.0 + 0.4 * log_pop + offset + 4.0 * field1(i);
      }
      // Variances follow the generating split even in the single-field variant.
      d(i) = (s < split ? 0.02 + 0.06 * u : 0.18 + 0.3 * u) * options.variance_scale;
      f.partition[i] = s < split || !options.two_fields ? 0 : 1;
    }
  }
  f.truth = LogTable(std::move(z), std::move(d), f.cells);
  f.truth.areas = f.grid.areas;
  return f;
}

}  // namespace msmm
