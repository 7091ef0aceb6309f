#include "msmm/loess.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "msmm/errors.hpp"

namespace msmm {

Loess::Loess(Eigen::VectorXd x, Eigen::VectorXd y, double span)
    : x_(std::move(x)), y_(std::move(y)), span_(span) {
  if (x_.size() != y_.size()) throw ShapeError("loess: x and y lengths differ");
  if (x_.size() < kMinPoints)
    throw InsufficientDataError("loess: need at least 5 points, got " +
                                std::to_string(x_.size()));
  if (!(span_ > 0.0 && span_ <= 1.0)) throw DomainError("loess: span must lie in (0, 1]");
  if (!x_.allFinite() || !y_.allFinite()) throw DomainError("loess: non-finite input");
  x_min_ = x_.minCoeff();
  x_max_ = x_.maxCoeff();
  const auto n = x_.size();
  neighbours_ = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(std::ceil(span_ * static_cast<double>(n))), 2, n);
}

double Loess::operator()(double at) const {
  const double x0 = std::clamp(at, x_min_, x_max_);
  const auto n = x_.size();

  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) dist[i] = std::abs(x_(i) - x0);
  std::vector<double> sorted = dist;
  std::nth_element(sorted.begin(), sorted.begin() + (neighbours_ - 1), sorted.end());
  // Bandwidth is the distance to the furthest neighbour, which itself gets
  // zero weight.
  const double h = sorted[neighbours_ - 1];
  if (h <= 0.0) {
    double total = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (dist[i] == 0.0) total += y_(i), ++count;
    return total / count;
  }

  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = dist[i] / h;
    if (u >= 1.0) continue;
    const double t = 1.0 - u * u * u;
    const double w = t * t * t;
    const double dx = x_(i) - x0;
    sw += w;
    sx += w * dx;
    sy += w * y_(i);
    sxx += w * dx * dx;
    sxy += w * dx * y_(i);
  }
  // Local line centred at x0: the intercept is the fitted value.
  const double det = sw * sxx - sx * sx;
  if (std::abs(det) <= 1e-12 * std::max(1.0, sw * sxx)) return sy / sw;
  return (sxx * sy - sx * sxy) / det;
}

Eigen::VectorXd Loess::predict(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = (*this)(x(i));
  return out;
}

}  // namespace msmm
