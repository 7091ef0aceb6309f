#include "msmm/msm.hpp"

#include <cmath>

#include "msmm/errors.hpp"

namespace msmm {

void MsmConfig::validate() const {
  if (!(sigma2_beta > 0.0)) throw ConfigError("sigma2_beta must be positive");
  if (!(a_eta > 0.0) || !(b_eta > 0.0)) throw ConfigError("a_eta and b_eta must be positive");
  if (fixed_sigma2_eta && !(*fixed_sigma2_eta > 0.0))
    throw ConfigError("fixed sigma2_eta must be positive");
  mcmc.validate();
}

namespace {

void check_inputs(const Eigen::VectorXd& z, const Eigen::VectorXd& d, const Eigen::MatrixXd& x,
                  const Eigen::MatrixXd& psi) {
  if (d.size() != z.size() || x.rows() != z.size() || psi.rows() != z.size())
    throw ShapeError("data, design and basis dimensions disagree");
  if (!(d.array() > 0.0).all() || !d.allFinite())
    throw DomainError("sampling variances must be positive and finite");
}

GaussianMoments moments(const CanonicalGaussian& g) { return {g.mean(), g.covariance()}; }

}  // namespace

GaussianMoments conditional_beta(const MsmState& state, const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& d, const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& psi, double sigma2_beta) {
  check_inputs(z, d, x, psi);
  const Eigen::VectorXd w = d.cwiseInverse();
  Eigen::VectorXd resid = z;
  if (psi.cols() > 0) resid -= psi * state.eta;
  Eigen::MatrixXd precision = x.transpose() * w.asDiagonal() * x;
  precision.diagonal().array() += 1.0 / sigma2_beta;
  return moments(CanonicalGaussian(precision, x.transpose() * w.cwiseProduct(resid)));
}

GaussianMoments conditional_eta(const MsmState& state, const Eigen::VectorXd& z,
                                const Eigen::VectorXd& d, const Eigen::MatrixXd& x,
                                const Eigen::MatrixXd& psi, const Eigen::MatrixXd& k_inv) {
  check_inputs(z, d, x, psi);
  if (psi.cols() == 0) return {};
  const Eigen::VectorXd w = d.cwiseInverse();
  const Eigen::VectorXd resid = z - x * state.beta;
  Eigen::MatrixXd precision = psi.transpose() * w.asDiagonal() * psi;
  precision += k_inv / state.sigma2_eta;
  return moments(CanonicalGaussian(precision, psi.transpose() * w.cwiseProduct(resid)));
}

InverseGammaParams conditional_sigma2_eta(const Eigen::VectorXd& eta,
                                          const Eigen::MatrixXd& k_inv, double a_eta,
                                          double b_eta) {
  const double quad = eta.size() > 0 ? eta.dot(k_inv * eta) : 0.0;
  return {a_eta + 0.5 * static_cast<double>(eta.size()), b_eta + 0.5 * quad};
}

PosteriorDraws fit_msm(const LogTable& data, const Eigen::MatrixXd& x, const MoranBasis& basis,
                       const MsmConfig& config) {
  config.validate();
  const auto& z = data.z;
  const auto& d = data.d;
  const auto& psi = basis.psi;
  check_inputs(z, d, x, psi);
  const auto p = x.cols();
  const auto r = psi.cols();
  if (r > 0 && (basis.k_inv.rows() != r || basis.k_inv.cols() != r))
    throw ShapeError("basis precision has not been computed");

  // Data-side blocks of the full conditionals do not change across iterations.
  const Eigen::VectorXd w = d.cwiseInverse();
  Eigen::MatrixXd beta_precision = x.transpose() * w.asDiagonal() * x;
  beta_precision.diagonal().array() += 1.0 / config.sigma2_beta;
  const Eigen::VectorXd xtwz = x.transpose() * w.cwiseProduct(z);
  const Eigen::MatrixXd xtwpsi = x.transpose() * w.asDiagonal() * psi;
  const Eigen::MatrixXd psitwpsi = psi.transpose() * w.asDiagonal() * psi;
  const Eigen::VectorXd psitwz = psi.transpose() * w.cwiseProduct(z);
  const Eigen::LLT<Eigen::MatrixXd> beta_llt(beta_precision);
  if (beta_llt.info() != Eigen::Success) throw NumericalError("beta precision is not SPD");

  Rng rng(config.mcmc.seed);
  MsmState state{Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(r), 1.0};
  if (config.fixed_sigma2_eta) state.sigma2_eta = *config.fixed_sigma2_eta;

  const int kept = config.mcmc.retained();
  PosteriorDraws out;
  out.model = "msm";
  out.mcmc = config.mcmc;
  out.y.resize(kept, z.size());
  out.beta.resize(kept, p);
  out.eta.resize(kept, r);
  Eigen::VectorXd sigma_trace(kept);

  int slot = 0;
  for (int t = 0; t < config.mcmc.iterations; ++t) {
    {
      const Eigen::VectorXd linear = xtwz - xtwpsi * state.eta;
      const Eigen::VectorXd mean = beta_llt.solve(linear);
      state.beta = mean + beta_llt.matrixU().solve(rng.standard_normal(p));
    }
    if (r > 0) {
      const Eigen::VectorXd linear = psitwz - xtwpsi.transpose() * state.beta;
      const Eigen::MatrixXd precision = psitwpsi + basis.k_inv / state.sigma2_eta;
      state.eta = CanonicalGaussian(precision, linear).sample(rng);
    }
    if (!config.fixed_sigma2_eta) {
      const auto ig = conditional_sigma2_eta(state.eta, basis.k_inv, config.a_eta, config.b_eta);
      state.sigma2_eta = rng.inv_gamma(ig.shape, ig.scale);
    }
    if (!state.beta.allFinite() || !state.eta.allFinite() || !std::isfinite(state.sigma2_eta) ||
        !(state.sigma2_eta > 0.0))
      throw DivergenceError(static_cast<std::size_t>(t + 1), "msm sampler produced a non-finite draw");

    if (config.mcmc.keeps(t)) {
      out.beta.row(slot) = state.beta.transpose();
      out.eta.row(slot) = state.eta.transpose();
      Eigen::VectorXd y = x * state.beta;
      if (r > 0) y.noalias() += psi * state.eta;
      out.y.row(slot) = y.transpose();
      sigma_trace(slot) = state.sigma2_eta;
      ++slot;
    }
  }
  out.scalars.emplace("sigma2_eta", std::move(sigma_trace));
  return out;
}

}  // namespace msmm
