#include "msmm/fay_herriot.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "msmm/errors.hpp"
#include "msmm/random.hpp"

namespace msmm {

void FhConfig::validate() const {
  if (!(sigma2_beta > 0.0)) throw ConfigError("sigma2_beta must be positive");
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("IG hyperparameters must be positive");
  if (fixed_sigma2 && !(*fixed_sigma2 > 0.0)) throw ConfigError("fixed sigma2 must be positive");
  mcmc.validate();
}

PosteriorDraws fit_fh(const LogTable& data, const Eigen::MatrixXd& x, const FhConfig& config) {
  config.validate();
  const auto& z = data.z;
  const auto& d = data.d;
  const auto n = z.size();
  const auto p = x.cols();
  if (d.size() != n || x.rows() != n) throw ShapeError("data and design dimensions disagree");
  if (!(d.array() > 0.0).all() || !d.allFinite())
    throw DomainError("sampling variances must be positive and finite");

  const Eigen::VectorXd w = d.cwiseInverse();
  Eigen::MatrixXd beta_precision = x.transpose() * w.asDiagonal() * x;
  beta_precision.diagonal().array() += 1.0 / config.sigma2_beta;
  const Eigen::LLT<Eigen::MatrixXd> beta_llt(beta_precision);
  if (beta_llt.info() != Eigen::Success) throw NumericalError("beta precision is not SPD");

  Rng rng(config.mcmc.seed);
  FhState state{Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(n), 1.0};
  if (config.fixed_sigma2) state.sigma2 = *config.fixed_sigma2;

  const int kept = config.mcmc.retained();
  PosteriorDraws out;
  out.model = "fh";
  out.mcmc = config.mcmc;
  out.y.resize(kept, n);
  out.beta.resize(kept, p);
  Eigen::VectorXd sigma_trace(kept);

  int slot = 0;
  for (int t = 0; t < config.mcmc.iterations; ++t) {
    const Eigen::VectorXd fixed = x * state.beta;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double precision = w(i) + 1.0 / state.sigma2;
      const double mean = w(i) * (z(i) - fixed(i)) / precision;
      state.nu(i) = mean + rng.normal() / std::sqrt(precision);
    }
    const Eigen::VectorXd linear = x.transpose() * w.cwiseProduct(z - state.nu);
    state.beta = beta_llt.solve(linear) + beta_llt.matrixU().solve(rng.standard_normal(p));
    if (!config.fixed_sigma2)
      state.sigma2 = rng.inv_gamma(config.a + 0.5 * static_cast<double>(n),
                                   config.b + 0.5 * state.nu.squaredNorm());
    if (!state.beta.allFinite() || !state.nu.allFinite() || !(state.sigma2 > 0.0) ||
        !std::isfinite(state.sigma2))
      throw DivergenceError(static_cast<std::size_t>(t + 1), "fh sampler produced a non-finite draw");

    if (config.mcmc.keeps(t)) {
      out.beta.row(slot) = state.beta.transpose();
      out.y.row(slot) = (x * state.beta + state.nu).transpose();
      sigma_trace(slot) = state.sigma2;
      ++slot;
    }
  }
  out.scalars.emplace("sigma2", std::move(sigma_trace));
  return out;
}

}  // namespace msmm
