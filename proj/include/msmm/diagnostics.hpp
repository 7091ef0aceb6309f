#pragma once

#include <span>
#include <string>
#include <vector>

namespace msmm {

/// Monte Carlo standard error by non-overlapping batch means with batch size
/// floor(sqrt(n)); the remainder is dropped from the front of the chain.
/// Requires at least 100 draws.
double batch_means_se(std::span<const double> chain);

/// Geweke z-score comparing the first `first` and last `last` fractions of the
/// chain, with window variances from batch means. Each window needs at least
/// 100 draws. Throws DegenerateChainError when both windows are constant.
double geweke(std::span<const double> chain, double first = 0.1, double last = 0.5);

/// Potential scale reduction factor sqrt(((n-1)/n W + B/n) / W) over at least
/// two equal-length chains of at least 100 draws.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

/// n * sample variance / (n * batch-means variance of the mean), capped at n.
/// A constant chain reports n.
double effective_sample_size(std::span<const double> chain);

/// Per-parameter diagnostics for the report.
struct ParameterDiagnostics {
  std::string name;
  double mean = 0.0;
  double mcse = 0.0;
  double ess = 0.0;
  double geweke_z = 0.0;
  bool geweke_defined = false;
  double psrf = 0.0;
  bool psrf_defined = false;
};

/// Computes every diagnostic that the chain lengths allow; `chains` holds one
/// trace per chain of the same parameter.
ParameterDiagnostics diagnose_parameter(const std::string& name,
                                        const std::vector<std::vector<double>>& chains);

}  // namespace msmm
