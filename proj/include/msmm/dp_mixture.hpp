#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "msmm/moran_basis.hpp"
#include "msmm/posterior.hpp"
#include "msmm/random.hpp"
#include "msmm/tabulation.hpp"

namespace msmm {

/// Gaussian base measure G0 = N_p(0, sigma2_beta I) x N_r(0, sigma2_eta K) on
/// theta = (beta, eta).
class BaseMeasure {
 public:
  BaseMeasure(Eigen::Index p, double sigma2_beta, double sigma2_eta, Eigen::MatrixXd k,
              Eigen::MatrixXd k_inv);
  /// Inverts `k` to obtain K^-1.
  BaseMeasure(Eigen::Index p, double sigma2_beta, double sigma2_eta, const Eigen::MatrixXd& k);

  Eigen::Index p() const { return p_; }
  Eigen::Index r() const { return k_.rows(); }
  Eigen::Index dim() const { return p_ + k_.rows(); }
  double sigma2_beta() const { return sigma2_beta_; }
  double sigma2_eta() const { return sigma2_eta_; }
  const Eigen::MatrixXd& k() const { return k_; }
  const Eigen::MatrixXd& k_inv() const { return k_inv_; }

  void set_sigma2_eta(double value);

  /// blockdiag(sigma2_beta I, sigma2_eta K)
  Eigen::MatrixXd covariance() const;
  /// blockdiag(I / sigma2_beta, K^-1 / sigma2_eta)
  Eigen::MatrixXd precision() const;
  /// u^T Sigma0 u
  double quadratic(const Eigen::Ref<const Eigen::VectorXd>& u) const;
  Eigen::VectorXd sample(Rng& rng) const;

 private:
  Eigen::Index p_;
  double sigma2_beta_;
  double sigma2_eta_;
  Eigen::MatrixXd k_;
  Eigen::MatrixXd k_inv_;
  Eigen::MatrixXd k_chol_;  // lower factor of K
};

/// Observation-level inputs of the mixture: z, d and U = [X psi].
struct MixtureData {
  Eigen::VectorXd z;
  Eigen::VectorXd d;
  Eigen::MatrixXd u;
  Eigen::Index p = 0;

  MixtureData(const LogTable& table, const Eigen::MatrixXd& x, const Eigen::MatrixXd& psi);
  MixtureData(Eigen::VectorXd z, Eigen::VectorXd d, Eigen::MatrixXd u, Eigen::Index p);
  Eigen::Index size() const { return z.size(); }
};

/// Posterior of a cluster parameter given its members:
/// S = (Sigma0^-1 + sum u u^T / d)^-1, m = S sum u z / d. No members -> (0, Sigma0).
GaussianMoments cluster_posterior(std::span<const Eigen::Index> members, const MixtureData& data,
                                  const BaseMeasure& base);

/// Partition state. Labels are 0..k-1; label -1 marks an observation that
/// has been taken out of its cluster.
struct MixtureState {
  std::vector<int> assignments;
  double alpha = 1.0;
  double sigma2_eta = 1.0;

  int clusters() const;
  std::vector<int> member_counts() const;
};

/// Collapsed assignment probabilities for observation i over the existing
/// clusters (labels 0..k-1, i excluded) followed by a new cluster:
/// existing c ∝ n_c N(z_i; u_i^T m_c, u_i^T S_c u_i + d_i),
/// new ∝ alpha N(z_i; 0, u_i^T Sigma0 u_i + d_i). Computed in log space.
Eigen::VectorXd crp_assignment_probs(Eigen::Index i, const MixtureState& state,
                                     const MixtureData& data, const BaseMeasure& base);

/// Escobar-West augmentation update of the concentration under a
/// Gamma(a_alpha, b_alpha) (shape/rate) prior.
double update_alpha_escobar_west(int clusters, Eigen::Index n, double alpha, double a_alpha,
                                 double b_alpha, Rng& rng);

/// pi_k = V_k prod_{b<k} (1 - V_b) for k < M, pi_M the remaining stick.
/// Throws DomainError unless every V lies in (0, 1).
Eigen::VectorXd stick_break(std::span<const double> v);

/// Exact CRP expectation sum_{i=1}^n alpha / (alpha + i - 1).
double prior_expected_clusters(double alpha, Eigen::Index n);

enum class MixtureAlgorithm { Dp, Truncated };

/// Starting partition for the samplers.
enum class InitialPartition {
  Single,      // everything in one cluster
  ByCell,      // one cluster per table cell
  Singletons,  // one cluster per observation (capped at M when truncated)
};

struct MixtureConfig {
  double sigma2_beta = 100.0;
  double a_eta = 0.1;
  double b_eta = 0.1;
  double a_alpha = 1.0;
  double b_alpha = 4.0;
  McmcConfig mcmc;
  MixtureAlgorithm algorithm = MixtureAlgorithm::Dp;
  int truncation = 25;
  InitialPartition init = InitialPartition::ByCell;
  double alpha_init = 0.25;
  double sigma2_eta_init = 1.0;
  std::optional<double> fixed_alpha;
  std::optional<double> fixed_sigma2_eta;
  /// Drops the likelihood from the assignment step (prior simulation).
  bool prior_only = false;
  bool keep_assignments = true;
  /// Consecutive single-cluster iterations that trigger a warning.
  int degenerate_window = 100;

  void validate() const;
};

/// Collapsed Gibbs sampler for the DP mixture. Per iteration: reassign each
/// observation, redraw cluster parameters, sigma2_eta, then alpha.
PosteriorDraws fit_msmm_dp(const LogTable& data, const Eigen::MatrixXd& x,
                           const MoranBasis& basis, const MixtureConfig& config);

/// Blocked Gibbs sampler for the stick-breaking prior truncated at
/// config.truncation components.
PosteriorDraws fit_msmm_truncated(const LogTable& data, const Eigen::MatrixXd& x,
                                  const MoranBasis& basis, const MixtureConfig& config);

/// Dispatches on config.algorithm.
PosteriorDraws fit_msmm(const LogTable& data, const Eigen::MatrixXd& x, const MoranBasis& basis,
                        const MixtureConfig& config);

}  // namespace msmm
