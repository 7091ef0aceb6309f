#include "msmm/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "msmm/errors.hpp"

namespace msmm {

std::size_t Rng::categorical_log(std::span<const double> log_weights) {
  double top = -std::numeric_limits<double>::infinity();
  for (double w : log_weights) top = std::max(top, w);
  if (!std::isfinite(top)) throw NumericalError("categorical draw with no finite weight");
  double total = 0.0;
  for (double w : log_weights) total += std::exp(w - top);
  double u = uniform() * total;
  for (std::size_t k = 0; k < log_weights.size(); ++k) {
    u -= std::exp(log_weights[k] - top);
    if (u <= 0.0) return k;
  }
  // Rounding can leave a sliver; fall back to the last positive-weight index.
  for (std::size_t k = log_weights.size(); k-- > 0;)
    if (std::isfinite(log_weights[k])) return k;
  return log_weights.size() - 1;
}

CanonicalGaussian::CanonicalGaussian(const Eigen::MatrixXd& precision,
                                     const Eigen::VectorXd& linear)
    : llt_(precision) {
  if (precision.size() > 0 && llt_.info() != Eigen::Success)
    throw NumericalError("full-conditional precision is not positive definite");
  mean_ = precision.size() > 0 ? Eigen::VectorXd(llt_.solve(linear)) : Eigen::VectorXd();
}

Eigen::MatrixXd CanonicalGaussian::covariance() const {
  if (mean_.size() == 0) return {};
  return llt_.solve(Eigen::MatrixXd::Identity(mean_.size(), mean_.size()));
}

Eigen::VectorXd CanonicalGaussian::sample(Rng& rng) const {
  if (mean_.size() == 0) return {};
  // P = L L^T, so L^{-T} e has covariance P^{-1}.
  Eigen::VectorXd e = rng.standard_normal(mean_.size());
  return mean_ + llt_.matrixU().solve(e);
}

}  // namespace msmm
