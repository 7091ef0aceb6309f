#include "msmm/dp_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

#include "msmm/errors.hpp"

namespace msmm {

// ---------------------------------------------------------------------------
// Base measure

BaseMeasure::BaseMeasure(Eigen::Index p, double sigma2_beta, double sigma2_eta,
                         Eigen::MatrixXd k, Eigen::MatrixXd k_inv)
    : p_(p), sigma2_beta_(sigma2_beta), sigma2_eta_(sigma2_eta), k_(std::move(k)),
      k_inv_(std::move(k_inv)) {
  if (p_ < 0 || k_.rows() != k_.cols() || k_inv_.rows() != k_.rows() ||
      k_inv_.cols() != k_.cols())
    throw ShapeError("base measure dimensions are inconsistent");
  if (!(sigma2_beta_ > 0.0) || !(sigma2_eta_ > 0.0))
    throw DomainError("base measure variances must be positive");
  if (k_.size() > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(k_);
    if (llt.info() != Eigen::Success) throw DefinitenessError("K is not positive definite");
    k_chol_ = llt.matrixL();
  }
}

BaseMeasure::BaseMeasure(Eigen::Index p, double sigma2_beta, double sigma2_eta,
                         const Eigen::MatrixXd& k)
    : BaseMeasure(p, sigma2_beta, sigma2_eta, k,
                  k.size() > 0 ? Eigen::MatrixXd(k.llt().solve(
                                     Eigen::MatrixXd::Identity(k.rows(), k.cols())))
                               : Eigen::MatrixXd(0, 0)) {}

void BaseMeasure::set_sigma2_eta(double value) {
  if (!(value > 0.0)) throw DomainError("sigma2_eta must be positive");
  sigma2_eta_ = value;
}

Eigen::MatrixXd BaseMeasure::covariance() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim(), dim());
  s.topLeftCorner(p_, p_).diagonal().setConstant(sigma2_beta_);
  s.bottomRightCorner(r(), r()) = sigma2_eta_ * k_;
  return s;
}

Eigen::MatrixXd BaseMeasure::precision() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim(), dim());
  s.topLeftCorner(p_, p_).diagonal().setConstant(1.0 / sigma2_beta_);
  s.bottomRightCorner(r(), r()) = k_inv_ / sigma2_eta_;
  return s;
}

double BaseMeasure::quadratic(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  double q = sigma2_beta_ * u.head(p_).squaredNorm();
  if (r() > 0) q += sigma2_eta_ * u.tail(r()).dot(k_ * u.tail(r()));
  return q;
}

Eigen::VectorXd BaseMeasure::sample(Rng& rng) const {
  Eigen::VectorXd theta(dim());
  for (Eigen::Index j = 0; j < p_; ++j) theta(j) = std::sqrt(sigma2_beta_) * rng.normal();
  if (r() > 0) theta.tail(r()) = std::sqrt(sigma2_eta_) * (k_chol_ * rng.standard_normal(r()));
  return theta;
}

// ---------------------------------------------------------------------------
// Data

namespace {

void check_mixture_data(const MixtureData& m) {
  if (m.d.size() != m.z.size() || m.u.rows() != m.z.size())
    throw ShapeError("mixture data dimensions disagree");
  if (m.p < 0 || m.p > m.u.cols()) throw ShapeError("fixed-effect count exceeds design width");
  if (!(m.d.array() > 0.0).all() || !m.d.allFinite())
    throw DomainError("sampling variances must be positive and finite");
}

}  // namespace

MixtureData::MixtureData(const LogTable& table, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& psi)
    : z(table.z), d(table.d), p(x.cols()) {
  if (x.rows() != table.size() || psi.rows() != table.size())
    throw ShapeError("design and basis rows must match the table");
  u.resize(table.size(), x.cols() + psi.cols());
  u << x, psi;
  check_mixture_data(*this);
}

MixtureData::MixtureData(Eigen::VectorXd z_in, Eigen::VectorXd d_in, Eigen::MatrixXd u_in,
                         Eigen::Index p_in)
    : z(std::move(z_in)), d(std::move(d_in)), u(std::move(u_in)), p(p_in) {
  check_mixture_data(*this);
}

// ---------------------------------------------------------------------------
// Cluster sufficient statistics

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double log_normal(double x, double mean, double var) {
  const double r = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + r * r / var);
}

/// Running sums for one cluster and the factor of its posterior precision.
class ClusterStats {
 public:
  explicit ClusterStats(Eigen::Index q)
      : gram_(Eigen::MatrixXd::Zero(q, q)), linear_(Eigen::VectorXd::Zero(q)) {}

  void add(const MixtureData& data, Eigen::Index i, double sign) {
    const double w = sign / data.d(i);
    const auto u = data.u.row(i).transpose();
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(u, w);
    linear_.noalias() += (w * data.z(i)) * u;
    members_ += sign > 0 ? 1 : -1;
  }

  void refresh(const Eigen::MatrixXd& prior_precision) {
    Eigen::MatrixXd precision = prior_precision;
    precision.triangularView<Eigen::Lower>() += gram_;
    llt_.compute(precision);
    if (llt_.info() != Eigen::Success)
      throw NumericalError("cluster posterior precision is not positive definite");
    mean_ = llt_.solve(linear_);
  }

  /// Log predictive density of observation i (not a member).
  double log_predictive(const MixtureData& data, Eigen::Index i) const {
    const Eigen::VectorXd u = data.u.row(i).transpose();
    const Eigen::VectorXd half = llt_.matrixL().solve(u);
    return log_normal(data.z(i), u.dot(mean_), half.squaredNorm() + data.d(i));
  }

  Eigen::VectorXd sample(Rng& rng) const {
    return mean_ + llt_.matrixU().solve(rng.standard_normal(mean_.size()));
  }

  Eigen::MatrixXd covariance() const {
    return llt_.solve(Eigen::MatrixXd::Identity(mean_.size(), mean_.size()));
  }

  int members() const { return members_; }
  const Eigen::VectorXd& mean() const { return mean_; }

 private:
  Eigen::MatrixXd gram_;  // lower triangle holds sum u u^T / d
  Eigen::VectorXd linear_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd mean_;
  int members_ = 0;
};

std::vector<ClusterStats> build_clusters(const std::vector<int>& assignments, int k,
                                         const MixtureData& data,
                                         const Eigen::MatrixXd& prior_precision) {
  std::vector<ClusterStats> clusters(static_cast<std::size_t>(k), ClusterStats(data.u.cols()));
  for (Eigen::Index i = 0; i < data.size(); ++i)
    if (assignments[i] >= 0) clusters[assignments[i]].add(data, i, +1.0);
  for (auto& c : clusters) c.refresh(prior_precision);
  return clusters;
}

Eigen::VectorXd normalize_log(const std::vector<double>& logw) {
  const double top = *std::max_element(logw.begin(), logw.end());
  Eigen::VectorXd prob(static_cast<Eigen::Index>(logw.size()));
  for (std::size_t k = 0; k < logw.size(); ++k) prob(k) = std::exp(logw[k] - top);
  return prob / prob.sum();
}

}  // namespace

GaussianMoments cluster_posterior(std::span<const Eigen::Index> members, const MixtureData& data,
                                  const BaseMeasure& base) {
  if (base.dim() != data.u.cols()) throw ShapeError("base measure does not match design width");
  if (members.empty()) return {Eigen::VectorXd::Zero(base.dim()), base.covariance()};
  ClusterStats stats(base.dim());
  for (auto i : members) {
    if (i < 0 || i >= data.size()) throw ReferenceError("cluster member index out of range");
    stats.add(data, i, +1.0);
  }
  stats.refresh(base.precision());
  return {stats.mean(), stats.covariance()};
}

int MixtureState::clusters() const {
  int k = 0;
  for (int a : assignments) k = std::max(k, a + 1);
  return k;
}

std::vector<int> MixtureState::member_counts() const {
  std::vector<int> counts(static_cast<std::size_t>(clusters()), 0);
  for (int a : assignments)
    if (a >= 0) ++counts[a];
  return counts;
}

Eigen::VectorXd crp_assignment_probs(Eigen::Index i, const MixtureState& state,
                                     const MixtureData& data, const BaseMeasure& base) {
  if (static_cast<Eigen::Index>(state.assignments.size()) != data.size())
    throw ShapeError("assignment vector does not match data");
  if (i < 0 || i >= data.size()) throw ReferenceError("observation index out of range");
  if (base.dim() != data.u.cols()) throw ShapeError("base measure does not match design width");
  if (!(state.alpha > 0.0)) throw DomainError("alpha must be positive");

  std::vector<int> assignments = state.assignments;
  assignments[i] = -1;
  const int k = state.clusters();
  const auto clusters = build_clusters(assignments, k, data, base.precision());

  std::vector<double> logw;
  logw.reserve(static_cast<std::size_t>(k) + 1);
  for (const auto& c : clusters) {
    logw.push_back(c.members() > 0 ? std::log(static_cast<double>(c.members())) +
                                         c.log_predictive(data, i)
                                   : -std::numeric_limits<double>::infinity());
  }
  logw.push_back(std::log(state.alpha) +
                 log_normal(data.z(i), 0.0, base.quadratic(data.u.row(i).transpose()) + data.d(i)));
  return normalize_log(logw);
}

double update_alpha_escobar_west(int clusters, Eigen::Index n, double alpha, double a_alpha,
                                 double b_alpha, Rng& rng) {
  if (clusters < 1 || n < 1) throw DomainError("Escobar-West update needs k >= 1 and n >= 1");
  const double zeta = rng.beta(alpha + 1.0, static_cast<double>(n));
  const double rate = b_alpha - std::log(zeta);
  const double shape_hi = a_alpha + clusters;
  const double shape_lo = a_alpha + clusters - 1.0;
  double draw;
  if (shape_lo <= 0.0) {
    draw = rng.gamma(shape_hi, rate);
  } else {
    const double odds = shape_lo / (static_cast<double>(n) * rate);
    const double weight_hi = odds / (1.0 + odds);
    draw = rng.uniform() < weight_hi ? rng.gamma(shape_hi, rate) : rng.gamma(shape_lo, rate);
  }
  // Gamma draws can underflow to zero for tiny shapes.
  return std::max(draw, std::numeric_limits<double>::min());
}

Eigen::VectorXd stick_break(std::span<const double> v) {
  Eigen::VectorXd pi(static_cast<Eigen::Index>(v.size()) + 1);
  double remaining = 1.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] > 0.0 && v[k] < 1.0)) throw DomainError("stick proportions must lie in (0, 1)");
    pi(k) = v[k] * remaining;
    remaining *= 1.0 - v[k];
  }
  pi(static_cast<Eigen::Index>(v.size())) = remaining;
  return pi;
}

double prior_expected_clusters(double alpha, Eigen::Index n) {
  if (!(alpha > 0.0) || n < 1) throw DomainError("need alpha > 0 and n >= 1");
  double total = 0.0;
  for (Eigen::Index i = 1; i <= n; ++i) total += alpha / (alpha + static_cast<double>(i - 1));
  return total;
}

void MixtureConfig::validate() const {
  if (!(sigma2_beta > 0.0)) throw ConfigError("sigma2_beta must be positive");
  if (!(a_eta > 0.0) || !(b_eta > 0.0)) throw ConfigError("a_eta and b_eta must be positive");
  if (!(a_alpha > 0.0) || !(b_alpha > 0.0))
    throw ConfigError("a_alpha and b_alpha must be positive");
  if (algorithm == MixtureAlgorithm::Truncated && truncation < 2)
    throw ConfigError("truncation level must be >= 2");
  if (!(alpha_init > 0.0) || !(sigma2_eta_init > 0.0))
    throw ConfigError("initial alpha and sigma2_eta must be positive");
  if (fixed_alpha && !(*fixed_alpha > 0.0)) throw ConfigError("fixed alpha must be positive");
  if (fixed_sigma2_eta && !(*fixed_sigma2_eta > 0.0))
    throw ConfigError("fixed sigma2_eta must be positive");
  mcmc.validate();
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

std::vector<int> initial_partition(InitialPartition init, Eigen::Index n, int cells, int cap) {
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  switch (init) {
    case InitialPartition::Single:
      break;
    case InitialPartition::ByCell:
      for (Eigen::Index i = 0; i < n; ++i) a[i] = static_cast<int>(i % cells) % cap;
      break;
    case InitialPartition::Singletons:
      for (Eigen::Index i = 0; i < n; ++i) a[i] = static_cast<int>(i % cap);
      break;
  }
  // Compact labels in order of first appearance.
  std::vector<int> relabel(static_cast<std::size_t>(std::max<Eigen::Index>(n, cap)), -1);
  int next = 0;
  for (auto& label : a) {
    if (relabel[label] < 0) relabel[label] = next++;
    label = relabel[label];
  }
  return a;
}

/// Output buffers shared by both mixture samplers.
struct MixtureRecorder {
  PosteriorDraws out;
  Eigen::VectorXd alpha, sigma2, clusters;
  int slot = 0;
  int single_run = 0;
  bool warned = false;

  MixtureRecorder(const MixtureConfig& config, Eigen::Index n, const char* model) {
    const int kept = config.mcmc.retained();
    out.model = model;
    out.mcmc = config.mcmc;
    out.y.resize(kept, n);
    alpha.resize(kept);
    sigma2.resize(kept);
    clusters.resize(kept);
    if (config.keep_assignments) out.assignments.resize(kept, n);
  }

  void watch_degenerate(const MixtureConfig& config, int k, int iteration) {
    single_run = k == 1 ? single_run + 1 : 0;
    if (!warned && single_run >= config.degenerate_window) {
      warned = true;
      out.warnings.push_back("all observations shared one cluster for " +
                             std::to_string(config.degenerate_window) +
                             " consecutive iterations (ending at iteration " +
                             std::to_string(iteration + 1) +
                             "); the mixture is behaving like a single-field model");
    }
  }

  void record(const MixtureConfig& config, const MixtureData& data,
              const std::vector<int>& assign, const std::vector<Eigen::VectorXd>& theta,
              double alpha_value, double sigma2_value, int k) {
    for (Eigen::Index i = 0; i < data.size(); ++i)
      out.y(slot, i) = data.u.row(i).dot(theta[assign[i]]);
    if (config.keep_assignments)
      for (Eigen::Index i = 0; i < data.size(); ++i) out.assignments(slot, i) = assign[i];
    alpha(slot) = alpha_value;
    sigma2(slot) = sigma2_value;
    clusters(slot) = k;
    ++slot;
  }

  PosteriorDraws finish() {
    out.scalars.emplace("alpha", std::move(alpha));
    out.scalars.emplace("sigma2_eta", std::move(sigma2));
    out.scalars.emplace("clusters", std::move(clusters));
    return std::move(out);
  }
};

double sample_sigma2_eta(const MixtureConfig& config, const BaseMeasure& base,
                         const std::vector<Eigen::VectorXd>& theta, const std::vector<bool>& use,
                         Rng& rng) {
  if (config.fixed_sigma2_eta) return *config.fixed_sigma2_eta;
  const auto p = base.p();
  const auto r = base.r();
  double shape = config.a_eta;
  double scale = config.b_eta;
  for (std::size_t c = 0; c < theta.size(); ++c) {
    if (!use[c]) continue;
    shape += 0.5 * static_cast<double>(r);
    if (r > 0) {
      const auto eta = theta[c].segment(p, r);
      scale += 0.5 * eta.dot(base.k_inv() * eta);
    }
  }
  return rng.inv_gamma(shape, scale);
}

void check_finite(const std::vector<Eigen::VectorXd>& theta, double alpha, double sigma2,
                  int iteration) {
  for (const auto& t : theta)
    if (!t.allFinite())
      throw DivergenceError(static_cast<std::size_t>(iteration + 1),
                            "mixture sampler produced a non-finite cluster parameter");
  if (!std::isfinite(alpha) || !(alpha > 0.0) || !std::isfinite(sigma2) || !(sigma2 > 0.0))
    throw DivergenceError(static_cast<std::size_t>(iteration + 1),
                          "mixture sampler produced an invalid alpha or sigma2_eta");
}

void check_basis(const MoranBasis& basis) {
  if (basis.rank() > 0 && basis.k.rows() != basis.rank())
    throw ShapeError("basis precision has not been computed");
}

}  // namespace

PosteriorDraws fit_msmm_dp(const LogTable& table, const Eigen::MatrixXd& x,
                           const MoranBasis& basis, const MixtureConfig& config) {
  config.validate();
  check_basis(basis);
  const MixtureData data(table, x, basis.psi);
  const Eigen::Index n = data.size();
  double sigma2_eta = config.fixed_sigma2_eta.value_or(config.sigma2_eta_init);
  double alpha = config.fixed_alpha.value_or(config.alpha_init);
  BaseMeasure base(data.p, config.sigma2_beta, sigma2_eta, basis.k, basis.k_inv);

  // psi_i^T K psi_i for the new-cluster predictive; x_i^T x_i likewise.
  Eigen::VectorXd x_norm2(n), psi_k_psi = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x_norm2(i) = data.u.row(i).head(data.p).squaredNorm();
    if (base.r() > 0) {
      const Eigen::VectorXd v = data.u.row(i).tail(base.r()).transpose();
      psi_k_psi(i) = v.dot(base.k() * v);
    }
  }

  Rng rng(config.mcmc.seed);
  std::vector<int> assign = initial_partition(config.init, n, table.cells, static_cast<int>(n));
  int k = *std::max_element(assign.begin(), assign.end()) + 1;
  std::vector<Eigen::VectorXd> theta;
  MixtureRecorder rec(config, n, "msmm-dp");
  std::vector<double> logw;

  for (int t = 0; t < config.mcmc.iterations; ++t) {
    const Eigen::MatrixXd prior_precision = base.precision();
    auto clusters = build_clusters(assign, k, data, prior_precision);

    // (1) collapsed reassignment
    for (Eigen::Index i = 0; i < n; ++i) {
      int c = assign[i];
      clusters[c].add(data, i, -1.0);
      if (clusters[c].members() == 0) {
        const int last = k - 1;
        if (c != last) {
          std::swap(clusters[c], clusters[last]);
          for (auto& a : assign)
            if (a == last) a = c;
        }
        clusters.pop_back();
        --k;
      } else {
        clusters[c].refresh(prior_precision);
      }
      assign[i] = -1;

      logw.assign(static_cast<std::size_t>(k) + 1, 0.0);
      for (int j = 0; j < k; ++j) {
        logw[j] = std::log(static_cast<double>(clusters[j].members()));
        if (!config.prior_only) logw[j] += clusters[j].log_predictive(data, i);
      }
      logw[k] = std::log(alpha);
      if (!config.prior_only) {
        const double var = base.sigma2_beta() * x_norm2(i) + base.sigma2_eta() * psi_k_psi(i);
        logw[k] += log_normal(data.z(i), 0.0, var + data.d(i));
      }
      const int choice = static_cast<int>(rng.categorical_log(logw));
      if (choice == k) {
        clusters.emplace_back(data.u.cols());
        ++k;
      }
      clusters[choice].add(data, i, +1.0);
      clusters[choice].refresh(prior_precision);
      assign[i] = choice;
    }

    // (2) cluster parameters
    theta.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) theta[j] = clusters[j].sample(rng);

    // (3) sigma2_eta over all clusters, (4) alpha
    sigma2_eta = sample_sigma2_eta(config, base, theta,
                                   std::vector<bool>(static_cast<std::size_t>(k), true), rng);
    base.set_sigma2_eta(sigma2_eta);
    if (!config.fixed_alpha)
      alpha = update_alpha_escobar_west(k, n, alpha, config.a_alpha, config.b_alpha, rng);
    check_finite(theta, alpha, sigma2_eta, t);

    rec.watch_degenerate(config, k, t);
    if (config.mcmc.keeps(t)) rec.record(config, data, assign, theta, alpha, sigma2_eta, k);
  }
  return rec.finish();
}

PosteriorDraws fit_msmm_truncated(const LogTable& table, const Eigen::MatrixXd& x,
                                  const MoranBasis& basis, const MixtureConfig& config) {
  config.validate();
  if (config.truncation < 2) throw ConfigError("truncation level must be >= 2");
  check_basis(basis);
  const MixtureData data(table, x, basis.psi);
  const Eigen::Index n = data.size();
  const int m_max = config.truncation;
  double sigma2_eta = config.fixed_sigma2_eta.value_or(config.sigma2_eta_init);
  double alpha = config.fixed_alpha.value_or(config.alpha_init);
  BaseMeasure base(data.p, config.sigma2_beta, sigma2_eta, basis.k, basis.k_inv);

  Rng rng(config.mcmc.seed);
  std::vector<int> assign = initial_partition(config.init, n, table.cells, m_max);
  std::vector<Eigen::VectorXd> theta(static_cast<std::size_t>(m_max));
  {
    const auto clusters = build_clusters(assign, m_max, data, base.precision());
    for (int j = 0; j < m_max; ++j)
      theta[j] = clusters[j].members() > 0 ? clusters[j].sample(rng) : base.sample(rng);
  }
  Eigen::VectorXd log_pi = Eigen::VectorXd::Constant(m_max, -std::log(double(m_max)));
  std::vector<double> sticks(static_cast<std::size_t>(m_max - 1));
  MixtureRecorder rec(config, n, "msmm-truncated");
  std::vector<double> logw(static_cast<std::size_t>(m_max));
  constexpr double kStickEps = 1e-12;

  for (int t = 0; t < config.mcmc.iterations; ++t) {
    // (1) assignments given weights and atoms
    Eigen::MatrixXd atoms(data.u.cols(), m_max);
    for (int j = 0; j < m_max; ++j) atoms.col(j) = theta[j];
    const Eigen::MatrixXd fitted = data.u * atoms;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int j = 0; j < m_max; ++j) {
        logw[j] = log_pi(j);
        if (!config.prior_only) logw[j] += log_normal(data.z(i), fitted(i, j), data.d(i));
      }
      assign[i] = static_cast<int>(rng.categorical_log(logw));
    }
    std::vector<int> counts(static_cast<std::size_t>(m_max), 0);
    for (int a : assign) ++counts[a];

    // (2) sticks and weights
    int tail = static_cast<int>(n);
    for (int j = 0; j < m_max - 1; ++j) {
      tail -= counts[j];
      const double v = rng.beta(1.0 + counts[j], alpha + tail);
      sticks[j] = std::clamp(v, kStickEps, 1.0 - kStickEps);
    }
    log_pi = stick_break(sticks).array().log();

    // (3) occupied atoms, (4) sigma2_eta, then empty atoms from the base
    const auto clusters = build_clusters(assign, m_max, data, base.precision());
    std::vector<bool> occupied(static_cast<std::size_t>(m_max));
    int k = 0;
    for (int j = 0; j < m_max; ++j) {
      occupied[j] = counts[j] > 0;
      if (occupied[j]) {
        theta[j] = clusters[j].sample(rng);
        ++k;
      }
    }
    sigma2_eta = sample_sigma2_eta(config, base, theta, occupied, rng);
    base.set_sigma2_eta(sigma2_eta);
    for (int j = 0; j < m_max; ++j)
      if (!occupied[j]) theta[j] = base.sample(rng);

    // (5) alpha | sticks
    if (!config.fixed_alpha) {
      double rate = config.b_alpha;
      for (double v : sticks) rate -= std::log1p(-v);
      alpha = std::max(rng.gamma(config.a_alpha + m_max - 1, rate),
                       std::numeric_limits<double>::min());
    }
    check_finite(theta, alpha, sigma2_eta, t);

    rec.watch_degenerate(config, k, t);
    if (config.mcmc.keeps(t)) rec.record(config, data, assign, theta, alpha, sigma2_eta, k);
  }
  return rec.finish();
}

PosteriorDraws fit_msmm(const LogTable& data, const Eigen::MatrixXd& x, const MoranBasis& basis,
                        const MixtureConfig& config) {
  return config.algorithm == MixtureAlgorithm::Dp ? fit_msmm_dp(data, x, basis, config)
                                                  : fit_msmm_truncated(data, x, basis, config);
}

}  // namespace msmm
