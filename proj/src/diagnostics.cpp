#include "msmm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "msmm/errors.hpp"

namespace msmm {
namespace {

constexpr std::size_t kMinDraws = 100;

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance_of(std::span<const double> x) {
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

}  // namespace

double batch_means_se(std::span<const double> chain) {
  if (chain.size() < kMinDraws)
    throw InsufficientDataError("batch means need at least 100 draws, got " +
                                std::to_string(chain.size()));
  const auto size = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(chain.size()))));
  const std::size_t batches = chain.size() / size;
  const std::size_t skip = chain.size() - batches * size;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b)
    means[b] = mean_of(chain.subspan(skip + b * size, size));
  return std::sqrt(variance_of(means) / static_cast<double>(batches));
}

double geweke(std::span<const double> chain, double first, double last) {
  if (!(first > 0.0) || !(last > 0.0) || first + last > 1.0)
    throw DomainError("Geweke windows must be positive and non-overlapping");
  const auto n = chain.size();
  const auto n_first = static_cast<std::size_t>(std::floor(first * static_cast<double>(n)));
  const auto n_last = static_cast<std::size_t>(std::floor(last * static_cast<double>(n)));
  if (n_first < kMinDraws || n_last < kMinDraws)
    throw InsufficientDataError("Geweke windows need at least 100 draws each");
  const auto head = chain.first(n_first);
  const auto tail = chain.last(n_last);
  const double se_head = batch_means_se(head);
  const double se_tail = batch_means_se(tail);
  const double denom = std::sqrt(se_head * se_head + se_tail * se_tail);
  if (!(denom > 0.0)) throw DegenerateChainError("Geweke: both windows have zero variance");
  return (mean_of(head) - mean_of(tail)) / denom;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw InsufficientDataError("Gelman-Rubin needs at least two chains");
  const std::size_t n = chains.front().size();
  for (const auto& c : chains)
    if (c.size() != n) throw ShapeError("Gelman-Rubin chains must have equal length");
  if (n < kMinDraws) throw InsufficientDataError("Gelman-Rubin chains need at least 100 draws");

  const double m = static_cast<double>(chains.size());
  const double len = static_cast<double>(n);
  std::vector<double> means, vars;
  for (const auto& c : chains) {
    means.push_back(mean_of(c));
    vars.push_back(variance_of(c));
  }
  const double grand = mean_of(means);
  double between = 0.0;
  for (double mu : means) between += (mu - grand) * (mu - grand);
  between *= len / (m - 1.0);
  const double within = mean_of(vars);
  if (!(within > 0.0)) throw DegenerateChainError("Gelman-Rubin: zero within-chain variance");
  const double pooled = (len - 1.0) / len * within + between / len;
  return std::sqrt(pooled / within);
}

double effective_sample_size(std::span<const double> chain) {
  const double n = static_cast<double>(chain.size());
  const double mcse = batch_means_se(chain);
  const double var = variance_of(chain);
  if (!(var > 0.0) || !(mcse > 0.0)) return n;
  return std::min(n, var / (mcse * mcse));
}

ParameterDiagnostics diagnose_parameter(const std::string& name,
                                        const std::vector<std::vector<double>>& chains) {
  if (chains.empty() || chains.front().empty())
    throw EmptyInputError("no draws for parameter " + name);
  ParameterDiagnostics out;
  out.name = name;
  std::vector<double> pooled;
  for (const auto& c : chains) pooled.insert(pooled.end(), c.begin(), c.end());
  out.mean = mean_of(pooled);
  // MCSE of the pooled mean and summed ESS over chains; Geweke on the first chain.
  if (std::all_of(chains.begin(), chains.end(),
                  [](const auto& c) { return c.size() >= kMinDraws; })) {
    double sum_sq = 0.0;
    for (const auto& c : chains) {
      const double se = batch_means_se(c);
      sum_sq += se * se;
      out.ess += effective_sample_size(c);
    }
    out.mcse = std::sqrt(sum_sq) / static_cast<double>(chains.size());
    try {
      out.geweke_z = geweke(chains.front());
      out.geweke_defined = true;
    } catch (const Error&) {
    }
  }
  if (chains.size() >= 2) {
    try {
      out.psrf = gelman_rubin(chains);
      out.psrf_defined = true;
    } catch (const Error&) {
    }
  }
  return out;
}

}  // namespace msmm
