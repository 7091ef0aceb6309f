#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "msmm/errors.hpp"
#include "msmm/fay_herriot.hpp"
#include "test_support.hpp"

using namespace msmm;

namespace {

LogTable table_of(int n) {
  LogTable t(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n));
  for (int i = 0; i < n; ++i) {
    t.z(i) = 2.0 + 0.3 * i + 0.7 * std::cos(2.3 * i);
    t.d(i) = 0.1 + 0.08 * (i % 5);
  }
  return t;
}

Eigen::MatrixXd design_of(int n) {
  Eigen::MatrixXd x(n, 2);
  for (int i = 0; i < n; ++i) x.row(i) << 1.0, 0.25 * i;
  return x;
}

}  // namespace

TEST_CASE("fh matches the conjugate posterior with sigma2 fixed") {
  const int n = 10;
  const auto t = table_of(n);
  const auto x = design_of(n);
  FhConfig cfg;
  cfg.fixed_sigma2 = 0.4;
  cfg.mcmc = {12000, 2000, 1, 8};
  const auto draws = fit_fh(t, x, cfg);
  Eigen::MatrixXd u(n, 2 + n);
  u << x, Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd prior(2 + n);
  prior << 100.0, 100.0, Eigen::VectorXd::Constant(n, 0.4);
  const auto oracle = testing::condition_gaussian(u, t.d, t.z, prior.asDiagonal());
  const Eigen::MatrixXd nu = draws.y - draws.beta * x.transpose();
  for (int j = 0; j < 2; ++j)
    CHECK(testing::mcse_distance(testing::column(draws.beta, j), oracle.mean(j)) < 4.0);
  for (int i = 0; i < n; ++i)
    CHECK(testing::mcse_distance(testing::column(nu, i), oracle.mean(2 + i)) < 4.0);
}

TEST_CASE("fh single-area scalar shrinkage") {
  LogTable t(Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd::Constant(1, 0.5));
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(1, 1);
  FhConfig cfg;
  cfg.fixed_sigma2 = 1.5;
  cfg.sigma2_beta = 4.0;
  cfg.mcmc = {20000, 1000, 1, 4};
  const auto draws = fit_fh(t, x, cfg);
  const double beta_bar = draws.beta.col(0).mean();
  const Eigen::VectorXd nu = draws.y.col(0) - draws.beta.col(0);
  const double expected = (3.0 - beta_bar) * 1.5 / (1.5 + 0.5);
  CHECK(testing::mcse_distance({nu.data(), nu.data() + nu.size()}, expected) < 4.0);
}

TEST_CASE("fh random effects vanish without data information") {
  auto t = table_of(6);
  t.d.setConstant(1e8);
  FhConfig cfg;
  cfg.a = 3.0;
  cfg.b = 1.0;
  cfg.mcmc = {6000, 1000, 1, 2};
  const auto draws = fit_fh(t, design_of(6), cfg);
  const Eigen::MatrixXd nu = draws.y - draws.beta * design_of(6).transpose();
  for (int i = 0; i < 6; ++i) CHECK(testing::mcse_distance(testing::column(nu, i), 0.0) < 4.0);
}

TEST_CASE("fh predictions lie between the data and the regression fit") {
  const int n = 10;
  const auto t = table_of(n);
  const auto x = design_of(n);
  FhConfig cfg;
  cfg.fixed_sigma2 = 0.3;
  cfg.mcmc = {8000, 1000, 1, 12};
  const auto draws = fit_fh(t, x, cfg);
  const Eigen::VectorXd fit = x * draws.beta.colwise().mean().transpose();
  for (int i = 0; i < n; ++i) {
    const auto trace = testing::column(draws.y, i);
    const double slack = 4.0 * batch_means_se(trace);
    const double mean = draws.y.col(i).mean();
    CHECK(mean >= std::min(t.z(i), fit(i)) - slack);
    CHECK(mean <= std::max(t.z(i), fit(i)) + slack);
  }
}

TEST_CASE("fh sampled variance, determinism and validation") {
  const auto t = table_of(12);
  FhConfig cfg;
  cfg.mcmc = {400, 100, 1, 3};
  const auto a = fit_fh(t, design_of(12), cfg);
  const auto b = fit_fh(t, design_of(12), cfg);
  CHECK(a.y == b.y);
  CHECK((a.scalars.at("sigma2").array() > 0).all());
  CHECK(a.model == "fh");
  cfg.a = -1;
  CHECK_THROWS_AS(fit_fh(t, design_of(12), cfg), ConfigError);
}
