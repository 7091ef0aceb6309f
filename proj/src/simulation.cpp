#include "msmm/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "msmm/csv.hpp"
#include "msmm/errors.hpp"
#include "msmm/posterior.hpp"

namespace msmm {

LogTable perturb(const LogTable& truth, Rng& rng) {
  if (!truth.d.allFinite() || (truth.d.array() < 0.0).any())
    throw DomainError("perturb needs finite, non-negative variances");
  LogTable out = truth;
  for (Eigen::Index i = 0; i < truth.size(); ++i)
    out.z(i) = truth.z(i) + std::sqrt(truth.d(i)) * rng.normal();
  return out;
}

namespace {

void check_pair(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) throw ShapeError("prediction and truth lengths differ");
  if (pred.empty()) throw EmptyInputError("no predictions to score");
}

}  // namespace

double mab(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  std::vector<double> abs(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) abs[i] = std::abs(pred[i] - truth[i]);
  std::sort(abs.begin(), abs.end());
  const std::size_t n = abs.size();
  return n % 2 == 1 ? abs[n / 2] : 0.5 * (abs[n / 2 - 1] + abs[n / 2]);
}

double amse(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) total += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return total / static_cast<double>(pred.size());
}

double rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ShapeError("partitions have different lengths");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
  return static_cast<double>(agree) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double posterior_rand_index(const Eigen::MatrixXi& assignments, std::span<const int> truth) {
  if (assignments.rows() == 0) throw EmptyInputError("no assignment draws");
  if (static_cast<std::size_t>(assignments.cols()) != truth.size())
    throw ShapeError("assignment draws do not match the truth partition");
  double total = 0.0;
  std::vector<int> row(truth.size());
  for (Eigen::Index t = 0; t < assignments.rows(); ++t) {
    for (Eigen::Index i = 0; i < assignments.cols(); ++i) row[i] = assignments(t, i);
    total += rand_index(row, truth);
  }
  return total / static_cast<double>(assignments.rows());
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

void StudyConfig::validate() const {
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (!truth.complete()) throw ConfigError("study truth needs complete variances");
  if (x.rows() != truth.size() || basis.psi.rows() != truth.size())
    throw ShapeError("design or basis does not match the truth table");
  if (!truth_partition.empty() && static_cast<Eigen::Index>(truth_partition.size()) != truth.size())
    throw ShapeError("truth partition does not match the truth table");
  msmm.validate();
  fh.validate();
}

std::uint64_t replicate_seed(std::uint64_t master, int replicate) {
  return derive_seed(master, static_cast<std::uint64_t>(replicate));
}

std::vector<double> StudyResult::amse_of(const std::string& model) const {
  std::vector<double> v;
  for (const auto& s : scores)
    if (s.model == model && s.ok()) v.push_back(s.amse);
  return v;
}

std::vector<double> StudyResult::mab_of(const std::string& model) const {
  std::vector<double> v;
  for (const auto& s : scores)
    if (s.model == model && s.ok()) v.push_back(s.mab);
  return v;
}

namespace {

ReplicateScore score(int replicate, const std::string& model, const PosteriorDraws& draws,
                     const LogTable& truth) {
  const auto summary = predict_summaries(draws);
  const std::span<const double> pred(summary.log.mean.data(),
                                     static_cast<std::size_t>(summary.log.mean.size()));
  const std::span<const double> target(truth.z.data(), static_cast<std::size_t>(truth.z.size()));
  ReplicateScore s;
  s.replicate = replicate;
  s.model = model;
  s.mab = mab(pred, target);
  s.amse = amse(pred, target);
  return s;
}

std::vector<ReplicateScore> run_replicate(const StudyConfig& config, int replicate) {
  const std::uint64_t seed = replicate_seed(config.seed, replicate);
  Rng rng(derive_seed(seed, 0));
  const LogTable data = perturb(config.truth, rng);
  std::vector<ReplicateScore> out;

  try {
    MixtureConfig mc = config.msmm;
    mc.mcmc.seed = derive_seed(seed, 1);
    const auto draws = fit_msmm(data, config.x, config.basis, mc);
    auto s = score(replicate, "msmm", draws, config.truth);
    s.mean_clusters = draws.scalars.at("clusters").mean();
    if (!config.truth_partition.empty() && draws.assignments.size() > 0)
      s.rand_index = posterior_rand_index(draws.assignments, config.truth_partition);
    out.push_back(std::move(s));
  } catch (const Error& e) {
    out.push_back({replicate, "msmm", 0.0, 0.0, std::nullopt, std::nullopt, e.what()});
  }

  try {
    FhConfig fc = config.fh;
    fc.mcmc.seed = derive_seed(seed, 2);
    out.push_back(score(replicate, "fh", fit_fh(data, config.x, fc), config.truth));
  } catch (const Error& e) {
    out.push_back({replicate, "fh", 0.0, 0.0, std::nullopt, std::nullopt, e.what()});
  }
  return out;
}

ModelSummary summarize(const StudyResult& result, const std::string& model) {
  ModelSummary s;
  s.model = model;
  for (const auto& r : result.scores)
    if (r.model == model) (r.ok() ? s.succeeded : s.failed)++;
  const auto mabs = result.mab_of(model);
  const auto amses = result.amse_of(model);
  s.mab_q1 = quantile(mabs, 0.25);
  s.mab_median = quantile(mabs, 0.5);
  s.mab_q3 = quantile(mabs, 0.75);
  s.amse_q1 = quantile(amses, 0.25);
  s.amse_median = quantile(amses, 0.5);
  s.amse_q3 = quantile(amses, 0.75);
  return s;
}

}  // namespace

StudyResult run_study(const StudyConfig& config) {
  config.validate();
  const int reps = config.replicates;
  std::vector<std::vector<ReplicateScore>> slots(static_cast<std::size_t>(reps));
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < reps; r = next++) slots[r] = run_replicate(config, r + 1);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  StudyResult result;
  for (auto& slot : slots)
    for (auto& s : slot) result.scores.push_back(std::move(s));
  result.summaries.push_back(summarize(result, "msmm"));
  result.summaries.push_back(summarize(result, "fh"));
  return result;
}

void write_study(std::ostream& out, const StudyResult& result) {
  out << "replicate,model,mab,amse\n";
  for (const auto& s : result.scores) {
    out << s.replicate << ',' << s.model << ',';
    if (s.ok())
      out << csv::format(s.mab) << ',' << csv::format(s.amse) << '\n';
    else
      out << "NA,NA\n";
  }
}

void write_study_summary(std::ostream& out, const StudyResult& result) {
  out << "model,succeeded,failed,mab_q1,mab_median,mab_q3,amse_q1,amse_median,amse_q3\n";
  for (const auto& s : result.summaries)
    out << s.model << ',' << s.succeeded << ',' << s.failed << ',' << csv::format(s.mab_q1) << ','
        << csv::format(s.mab_median) << ',' << csv::format(s.mab_q3) << ','
        << csv::format(s.amse_q1) << ',' << csv::format(s.amse_median) << ','
        << csv::format(s.amse_q3) << '\n';
}

}  // namespace msmm
