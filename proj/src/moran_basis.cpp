#include "msmm/moran_basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "msmm/errors.hpp"
#include "msmm/hash.hpp"

namespace msmm {

Eigen::MatrixXd moran_operator(const Eigen::MatrixXd& x, const SparseMatrix& a) {
  const auto n = a.rows();
  if (a.cols() != n) throw ShapeError("adjacency must be square");
  if (x.rows() != n) throw ShapeError("design rows do not match adjacency size");
  if ((a - SparseMatrix(a.transpose())).norm() > 0.0)
    throw DomainError("adjacency is not symmetric");

  Eigen::MatrixXd g = Eigen::MatrixXd(a);
  const auto p = x.cols();
  if (p == 0) return g;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivoted(x);
  if (pivoted.rank() < p)
    throw RankError("design matrix is rank deficient (rank " + std::to_string(pivoted.rank()) +
                    " < " + std::to_string(p) + " columns)");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);

  // (I - QQ^T) A (I - QQ^T) = A - Q B^T - B Q^T + Q (Q^T B) Q^T with B = A Q.
  const Eigen::MatrixXd b = a * q;
  const Eigen::MatrixXd c = q.transpose() * b;
  g.noalias() -= q * b.transpose();
  g.noalias() -= b * q.transpose();
  g.noalias() += q * (c * q.transpose());
  return 0.5 * (g + g.transpose());
}

int resolve_basis_size(const BasisSize& size, int positive_count) {
  if (const auto* f = std::get_if<double>(&size.request)) {
    if (!(*f > 0.0 && *f <= 1.0)) throw ConfigError("basis fraction must lie in (0, 1]");
    const int r = static_cast<int>(std::floor(*f * positive_count));
    return std::clamp(r, std::min(1, positive_count), positive_count);
  }
  const int r = std::get<int>(size.request);
  if (r < 1) throw ConfigError("basis size must be >= 1");
  return std::min(r, positive_count);
}

MoranBasis select_basis(const Eigen::MatrixXd& g, const BasisSize& size) {
  if (g.rows() != g.cols()) throw ShapeError("Moran operator must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const auto n = values.size();
  const double scale = n > 0 ? values.cwiseAbs().maxCoeff() : 0.0;
  const double tol = kPositiveEigenTolerance * scale;
  int positive = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (values(i) > tol) ++positive;
  if (positive == 0) throw EmptyBasisError("Moran operator has no positive eigenvalues");

  const int r = resolve_basis_size(size, positive);
  MoranBasis basis;
  basis.positive_count = positive;
  basis.spectrum = values.reverse();
  basis.psi.resize(n, r);
  basis.eigenvalues.resize(r);
  for (int j = 0; j < r; ++j) {
    const Eigen::Index src = n - 1 - j;
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index lead = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(lead))) lead = i;
    if (v(lead) < 0.0) v = -v;
    basis.psi.col(j) = v;
    basis.eigenvalues(j) = values(src);
  }
  return basis;
}

void basis_precision(MoranBasis& basis, const SparseMatrix& q) {
  const auto r = basis.psi.cols();
  if (q.rows() != basis.psi.rows()) throw ShapeError("precision size does not match basis");
  if (r == 0) {
    basis.k_inv.resize(0, 0);
    basis.k.resize(0, 0);
    return;
  }
  const Eigen::MatrixXd qpsi = q * basis.psi;
  Eigen::MatrixXd k_inv = basis.psi.transpose() * qpsi;
  k_inv = 0.5 * (k_inv + k_inv.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt(k_inv);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k_inv, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  double q_scale = 0.0;
  for (Eigen::Index k = 0; k < q.outerSize(); ++k) q_scale = std::max(q_scale, q.coeff(k, k));
  const double hi = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), q_scale);
  if (llt.info() != Eigen::Success || !(lo > kPositiveEigenTolerance * hi)) {
    char value[32];
    std::snprintf(value, sizeof value, "%.3g", lo);
    throw DefinitenessError(
        std::string("basis precision psi^T Q psi is not positive definite (min eigenvalue ") +
        value +
        "); the design needs an intercept column so the basis excludes the constant vector");
  }
  basis.k_inv = std::move(k_inv);
  basis.k = llt.solve(Eigen::MatrixXd::Identity(r, r));
  basis.k = 0.5 * (basis.k + basis.k.transpose());
}

MoranBasis build_moran_basis(const Eigen::MatrixXd& x, const SpatialStructure& spatial,
                             const BasisSize& size) {
  auto basis = select_basis(moran_operator(x, spatial.a), size);
  basis_precision(basis, spatial.q);
  return basis;
}

namespace {

void fnv(std::uint64_t& h, const void* data, std::size_t bytes) { h = fnv1a(data, bytes, h); }

template <typename T>
void fnv_value(std::uint64_t& h, T v) {
  fnv(h, &v, sizeof v);
}

constexpr char kMagic[8] = {'M', 'S', 'M', 'M', 'B', 'A', 'S', '2'};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
bool get(std::istream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof v));
}

void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  put<std::int64_t>(out, m.rows());
  put<std::int64_t>(out, m.cols());
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
}

bool get_matrix(std::istream& in, Eigen::MatrixXd& m) {
  std::int64_t rows = 0, cols = 0;
  if (!get(in, rows) || !get(in, cols) || rows < 0 || cols < 0) return false;
  m.resize(rows, cols);
  return static_cast<bool>(in.read(reinterpret_cast<char*>(m.data()),
                                   static_cast<std::streamsize>(sizeof(double) * m.size())));
}

}  // namespace

std::uint64_t basis_cache_key(const Eigen::MatrixXd& x, const SparseMatrix& a,
                              const BasisSize& size) {
  std::uint64_t h = kFnvOffset;
  fnv_value<std::int64_t>(h, x.rows());
  fnv_value<std::int64_t>(h, x.cols());
  fnv(h, x.data(), sizeof(double) * static_cast<std::size_t>(x.size()));
  fnv_value<std::int64_t>(h, a.rows());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      fnv_value<std::int64_t>(h, it.row());
      fnv_value<std::int64_t>(h, it.col());
      fnv_value<double>(h, it.value());
    }
  if (const auto* f = std::get_if<double>(&size.request)) {
    fnv_value<int>(h, 0);
    fnv_value<double>(h, *f);
  } else {
    fnv_value<int>(h, 1);
    fnv_value<int>(h, std::get<int>(size.request));
  }
  return h;
}

void save_basis(const std::filesystem::path& path, const MoranBasis& basis, std::uint64_t key) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write basis cache " + path.string());
  out.write(kMagic, sizeof kMagic);
  put(out, key);
  put<std::int32_t>(out, basis.positive_count);
  put_matrix(out, basis.psi);
  put_matrix(out, Eigen::MatrixXd(basis.eigenvalues));
  put_matrix(out, basis.k_inv);
  put_matrix(out, basis.k);
  put_matrix(out, Eigen::MatrixXd(basis.spectrum));
}

std::optional<MoranBasis> load_basis(const std::filesystem::path& path, std::uint64_t key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kMagic];
  std::uint64_t stored = 0;
  std::int32_t positive = 0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    return std::nullopt;
  if (!get(in, stored) || stored != key || !get(in, positive)) return std::nullopt;
  MoranBasis basis;
  Eigen::MatrixXd values, spectrum;
  if (!get_matrix(in, basis.psi) || !get_matrix(in, values) || !get_matrix(in, basis.k_inv) ||
      !get_matrix(in, basis.k) || !get_matrix(in, spectrum))
    return std::nullopt;
  basis.eigenvalues = values.col(0);
  basis.spectrum = spectrum.col(0);
  basis.positive_count = positive;
  return basis;
}

}  // namespace msmm
