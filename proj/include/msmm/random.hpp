#pragma once

#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace msmm {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `index` under a master seed (chains, replicates).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Thin wrapper over a 64-bit Mersenne twister with the variates the samplers need.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }
  double normal(double mean, double sd) { return mean + sd * normal_(engine_); }

  /// Gamma with shape/rate parameterization.
  double gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
  }
  double beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
  }
  /// Inverse gamma, density proportional to x^{-(shape+1)} exp(-scale/x).
  double inv_gamma(double shape, double scale) { return 1.0 / gamma(shape, scale); }

  Eigen::VectorXd standard_normal(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal_(engine_);
    return v;
  }

  /// Draw an index with probability proportional to exp(log_weights).
  std::size_t categorical_log(std::span<const double> log_weights);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Gaussian held in canonical form: precision P and linear term b, mean = P^{-1} b.
class CanonicalGaussian {
 public:
  CanonicalGaussian(const Eigen::MatrixXd& precision, const Eigen::VectorXd& linear);

  const Eigen::VectorXd& mean() const { return mean_; }
  Eigen::MatrixXd covariance() const;
  Eigen::Index dim() const { return mean_.size(); }
  Eigen::VectorXd sample(Rng& rng) const;

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd mean_;
};

/// Mean and covariance of a full conditional.
struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

struct InverseGammaParams {
  double shape = 0.0;
  double scale = 0.0;
};

}  // namespace msmm
