#pragma once

#include <optional>

#include <Eigen/Core>

#include "msmm/posterior.hpp"
#include "msmm/tabulation.hpp"

namespace msmm {

struct FhConfig {
  double sigma2_beta = 100.0;
  double a = 0.1;
  double b = 0.1;
  McmcConfig mcmc;
  /// Holds the random-effect variance at this value instead of sampling it.
  std::optional<double> fixed_sigma2;

  void validate() const;
};

struct FhState {
  Eigen::VectorXd beta;
  Eigen::VectorXd nu;
  double sigma2 = 1.0;
};

/// Area-level model z = X beta + nu + e with nu_i iid N(0, sigma2).
///
/// Gibbs scan nu -> beta -> sigma2 from beta = 0, nu = 0, sigma2 = 1.
/// Stores y = X beta + nu and the "sigma2" trace.
PosteriorDraws fit_fh(const LogTable& data, const Eigen::MatrixXd& x, const FhConfig& config);

}  // namespace msmm
