#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "msmm/dp_mixture.hpp"
#include "msmm/fay_herriot.hpp"
#include "msmm/moran_basis.hpp"
#include "msmm/random.hpp"
#include "msmm/tabulation.hpp"

namespace msmm {

/// R = Z + e with e_i ~ N(0, d_i); variances are carried over.
LogTable perturb(const LogTable& truth, Rng& rng);

/// Median of |pred - truth|; even lengths average the central pair.
double mab(std::span<const double> pred, std::span<const double> truth);
/// Mean of (pred - truth)^2.
double amse(std::span<const double> pred, std::span<const double> truth);

/// Fraction of observation pairs on which two partitions agree.
double rand_index(std::span<const int> a, std::span<const int> b);
/// Rand index against `truth` averaged over retained assignment draws.
double posterior_rand_index(const Eigen::MatrixXi& assignments, std::span<const int> truth);

/// Linear-interpolation (type 7) sample quantile.
double quantile(std::vector<double> values, double prob);

struct StudyConfig {
  int replicates = 100;
  std::uint64_t seed = 1;
  MixtureConfig msmm;
  FhConfig fh;
  LogTable truth;
  Eigen::MatrixXd x;
  MoranBasis basis;
  /// Generating partition; enables per-replicate Rand index of the MSMM.
  std::vector<int> truth_partition;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct ReplicateScore {
  int replicate = 0;
  std::string model;
  double mab = 0.0;
  double amse = 0.0;
  std::optional<double> rand_index;
  std::optional<double> mean_clusters;
  std::string error;  // non-empty when the fit failed

  bool ok() const { return error.empty(); }
};

struct ModelSummary {
  std::string model;
  int succeeded = 0;
  int failed = 0;
  double mab_q1 = 0, mab_median = 0, mab_q3 = 0;
  double amse_q1 = 0, amse_median = 0, amse_q3 = 0;
};

struct StudyResult {
  std::vector<ReplicateScore> scores;  // sorted by replicate, then model
  std::vector<ModelSummary> summaries;

  std::vector<double> amse_of(const std::string& model) const;
  std::vector<double> mab_of(const std::string& model) const;
};

/// Seeds of replicate r's three streams (perturbation, MSMM, FH).
std::uint64_t replicate_seed(std::uint64_t master, int replicate);

/// Perturbs the truth, fits MSMM and FH, and scores posterior-mean log-scale
/// predictions against the truth for every replicate. Failed fits are kept as
/// error rows and excluded from the summaries.
StudyResult run_study(const StudyConfig& config);

/// replicate,model,mab,amse
void write_study(std::ostream& out, const StudyResult& result);
/// model,succeeded,failed,mab_q1,mab_median,mab_q3,amse_q1,amse_median,amse_q3
void write_study_summary(std::ostream& out, const StudyResult& result);

}  // namespace msmm
