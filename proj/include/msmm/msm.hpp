#pragma once

#include <optional>

#include <Eigen/Core>

#include "msmm/moran_basis.hpp"
#include "msmm/posterior.hpp"
#include "msmm/random.hpp"
#include "msmm/tabulation.hpp"

namespace msmm {

struct MsmConfig {
  double sigma2_beta = 100.0;
  double a_eta = 0.1;
  double b_eta = 0.1;
  McmcConfig mcmc;
  /// Holds sigma2_eta at this value instead of sampling it.
  std::optional<double> fixed_sigma2_eta;

  void validate() const;
};

struct MsmState {
  Eigen::VectorXd beta;
  Eigen::VectorXd eta;
  double sigma2_eta = 1.0;
};

/// beta | eta, z: covariance (X^T D^-1 X + I/sigma2_beta)^-1,
/// mean covariance * X^T D^-1 (z - psi eta).
GaussianMoments conditional_beta(const MsmState& state, const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& d, const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& psi, double sigma2_beta);

/// eta | beta, sigma2_eta, z: covariance (psi^T D^-1 psi + K^-1/sigma2_eta)^-1,
/// mean covariance * psi^T D^-1 (z - X beta).
GaussianMoments conditional_eta(const MsmState& state, const Eigen::VectorXd& z,
                                const Eigen::VectorXd& d, const Eigen::MatrixXd& x,
                                const Eigen::MatrixXd& psi, const Eigen::MatrixXd& k_inv);

/// sigma2_eta | eta ~ IG(a + r/2, b + eta^T K^-1 eta / 2).
InverseGammaParams conditional_sigma2_eta(const Eigen::VectorXd& eta,
                                          const Eigen::MatrixXd& k_inv, double a_eta,
                                          double b_eta);

/// Systematic-scan Gibbs sampler (beta, eta, sigma2_eta) started at
/// beta = 0, eta = 0, sigma2_eta = 1. Stores y = X beta + psi eta.
PosteriorDraws fit_msm(const LogTable& data, const Eigen::MatrixXd& x, const MoranBasis& basis,
                       const MsmConfig& config);

}  // namespace msmm
