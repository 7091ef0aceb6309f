#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "msmm/tabulation.hpp"

namespace msmm {

/// Run length shared by all samplers. `iterations` includes the burn-in.
struct McmcConfig {
  int iterations = 10000;
  int burn_in = 5000;
  int thin = 1;
  std::uint64_t seed = 1;

  void validate() const;
  /// floor((iterations - burn_in) / thin)
  int retained() const;
  /// True when iteration t (0-based) is kept.
  bool keeps(int t) const { return t >= burn_in && (t - burn_in + 1) % thin == 0; }
};

/// Retained draws of one chain.
///
/// Rows of `y`, `beta`, `eta` and every entry of `scalars` are retained
/// iterations. Models fill only what they have: MSM uses beta/eta and
/// "sigma2_eta"; FH uses beta and "sigma2"; MSMM uses "alpha",
/// "sigma2_eta", "clusters" and `assignments`.
struct PosteriorDraws {
  std::string model;
  McmcConfig mcmc;
  Eigen::MatrixXd y;
  Eigen::MatrixXd beta;
  Eigen::MatrixXd eta;
  std::map<std::string, Eigen::VectorXd> scalars;
  Eigen::MatrixXi assignments;
  std::vector<std::string> warnings;

  Eigen::Index draws() const { return y.rows(); }
};

/// Log-scale and count-scale summaries of the latent predictions.
struct PredictionSummary {
  LogSummary log;
  CountSummary count;
};

/// Mean and sd (n - 1) of y per entry, plus the per-draw back-transform.
/// Throws EmptyInputError when there are no draws.
PredictionSummary predict_summaries(const PosteriorDraws& draws);

/// Stacks the draws of several chains of the same model.
PosteriorDraws merge_chains(const std::vector<PosteriorDraws>& chains);

/// Long-format dump: iteration,parameter,value. `iteration` is the 1-based
/// sampler iteration of each retained draw. Latent y entries are written as
/// y[i] only when `include_latent` is set.
void write_draws(std::ostream& out, const PosteriorDraws& draws, bool include_latent = false);

/// Reads a dump back into parameter -> trace (ordered by iteration).
std::map<std::string, std::vector<double>> read_draws(std::istream& in);

}  // namespace msmm
