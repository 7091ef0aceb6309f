#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <variant>

#include <Eigen/Core>

#include "msmm/spatial_graph.hpp"

namespace msmm {

/// Reduced-rank spatial basis from the Moran's I operator.
///
/// `psi` has orthonormal columns ordered by descending eigenvalue, each with
/// its largest-magnitude entry positive. `k_inv` = psi^T Q psi and `k` is its
/// inverse; both are empty until basis_precision() fills them.
struct MoranBasis {
  Eigen::MatrixXd psi;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd k_inv;
  Eigen::MatrixXd k;
  int positive_count = 0;  // eigenvalues above tolerance before truncation
  Eigen::VectorXd spectrum;  // every eigenvalue of G, descending

  Eigen::Index rank() const { return psi.cols(); }
};

/// G = (I - P_X) A (I - P_X). X may have zero columns, in which case G = A.
/// Throws RankError when X is column rank deficient.
Eigen::MatrixXd moran_operator(const Eigen::MatrixXd& x, const SparseMatrix& a);

/// How many eigenvectors to keep: a fraction of the positive-eigenvalue
/// count (floored, at least one) or an explicit count.
struct BasisSize {
  static constexpr double kDefaultFraction = 0.5;
  std::variant<double, int> request = kDefaultFraction;

  static BasisSize fraction(double f) { return {f}; }
  static BasisSize count(int r) { return {r}; }
};

int resolve_basis_size(const BasisSize& size, int positive_count);

/// Eigenvalues above 1e-10 * max|eigenvalue| count as positive.
inline constexpr double kPositiveEigenTolerance = 1e-10;

/// Throws EmptyBasisError when G has no positive eigenvalue.
MoranBasis select_basis(const Eigen::MatrixXd& g, const BasisSize& size = {});

/// Fills k_inv = psi^T Q psi and k. Throws DefinitenessError if k_inv is not
/// positive definite.
void basis_precision(MoranBasis& basis, const SparseMatrix& q);

/// moran_operator + select_basis + basis_precision.
MoranBasis build_moran_basis(const Eigen::MatrixXd& x, const SpatialStructure& spatial,
                             const BasisSize& size = {});

/// FNV-1a over the shapes and bytes of X and A; keys the basis cache.
std::uint64_t basis_cache_key(const Eigen::MatrixXd& x, const SparseMatrix& a,
                              const BasisSize& size);

void save_basis(const std::filesystem::path& path, const MoranBasis& basis, std::uint64_t key);
/// Returns nullopt when the file is missing or was written for another key.
std::optional<MoranBasis> load_basis(const std::filesystem::path& path, std::uint64_t key);

}  // namespace msmm
