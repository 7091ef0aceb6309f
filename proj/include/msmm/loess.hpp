#pragma once

#include <Eigen/Core>

namespace msmm {

/// Degree-1 LOESS smoother with tricube weights.
///
/// Each evaluation fits a weighted least-squares line to the ceil(span * n)
/// nearest training points. Queries outside the training range are clamped
/// to the nearest boundary before evaluation.
class Loess {
 public:
  static constexpr double kDefaultSpan = 0.75;
  static constexpr Eigen::Index kMinPoints = 5;

  Loess(Eigen::VectorXd x, Eigen::VectorXd y, double span = kDefaultSpan);

  double operator()(double x) const;
  Eigen::VectorXd predict(const Eigen::VectorXd& x) const;

  double span() const { return span_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }

 private:
  Eigen::VectorXd x_;
  Eigen::VectorXd y_;
  double span_;
  double x_min_;
  double x_max_;
  Eigen::Index neighbours_;
};

}  // namespace msmm
