#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "msmm/diagnostics.hpp"
#include "msmm/errors.hpp"

using namespace msmm;

namespace {

std::vector<double> iid(std::size_t n, std::uint64_t seed, double mean = 0.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> norm(mean, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = norm(gen);
  return v;
}

std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> norm;
  std::vector<double> v(n);
  double x = 0.0;
  for (auto& out : v) out = x = phi * x + norm(gen);
  return v;
}

}  // namespace

TEST_CASE("batch means standard error") {
  CHECK(batch_means_se(std::vector<double>(400, 2.5)) == 0.0);
  const auto chain = iid(10000, 1);
  const double se = batch_means_se(chain);
  CHECK(se > 0.007);
  CHECK(se < 0.013);
  CHECK_THROWS_AS(batch_means_se(std::vector<double>(99, 1.0)), InsufficientDataError);
}

TEST_CASE("batch means uses floor(sqrt n) batches and drops the front remainder") {
  // 105 draws: batch size 10, ten batches, the first five draws dropped.
  std::vector<double> chain(105);
  for (std::size_t i = 0; i < chain.size(); ++i) chain[i] = std::sin(0.37 * i) + 0.01 * i;
  const std::size_t b = 10, m = 10, skip = 5;
  std::vector<double> means(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < b; ++j) means[k] += chain[skip + k * b + j];
    means[k] /= b;
  }
  double mu = 0.0;
  for (double x : means) mu += x / m;
  double var = 0.0;
  for (double x : means) var += (x - mu) * (x - mu) / (m - 1);
  CHECK(batch_means_se(chain) == doctest::Approx(std::sqrt(var / m)).epsilon(1e-12));
}

TEST_CASE("geweke behaviour") {
  CHECK_THROWS_AS(geweke(std::vector<double>(2000, 1.0)), DegenerateChainError);
  int inside = 0;
  for (int rep = 0; rep < 200; ++rep)
    if (std::abs(geweke(iid(20000, 100 + rep))) < 3.0) ++inside;
  CHECK(inside >= 198);
  auto drift = iid(20000, 7);
  for (std::size_t i = drift.size() / 2; i < drift.size(); ++i) drift[i] += 5.0;
  CHECK(std::abs(geweke(drift)) > 5.0);
}

TEST_CASE("gelman rubin") {
  const auto a = iid(1000, 3);
  const double n = 1000;
  CHECK(gelman_rubin({a, a}) == doctest::Approx(std::sqrt((n - 1) / n)).epsilon(1e-12));
  CHECK(gelman_rubin({iid(10000, 4), iid(10000, 5)}) < 1.05);
  CHECK(gelman_rubin({iid(1000, 6, 0.0), iid(1000, 7, 10.0)}) > 2.0);
  CHECK_THROWS_AS(gelman_rubin({iid(1000, 1), iid(900, 2)}), ShapeError);
}

TEST_CASE("effective sample size") {
  const double iid_ess = effective_sample_size(iid(10000, 9));
  CHECK(iid_ess > 7000);
  CHECK(iid_ess <= 13000);
  CHECK(effective_sample_size(ar1(10000, 0.9, 10)) < 10000.0 / 5);
  CHECK(effective_sample_size(std::vector<double>(500, -1.0)) == 500);
}

TEST_CASE("affine invariance") {
  auto x = ar1(5000, 0.5, 12);
  auto y = ar1(5000, 0.5, 13);
  std::vector<double> ax(x.size()), ay(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ax[i] = -3.0 * x[i] + 7.0;
    ay[i] = -3.0 * y[i] + 7.0;
  }
  CHECK(geweke(ax) == doctest::Approx(-geweke(x)).epsilon(1e-9));
  CHECK(gelman_rubin({ax, ay}) == doctest::Approx(gelman_rubin({x, y})).epsilon(1e-9));
  CHECK(batch_means_se(ax) == doctest::Approx(3.0 * batch_means_se(x)).epsilon(1e-9));
}

TEST_CASE("parameter report pools chains") {
  const auto a = iid(1000, 20), b = iid(1000, 21);
  const auto d = diagnose_parameter("alpha", {a, b});
  CHECK(d.name == "alpha");
  CHECK(d.psrf_defined);
  CHECK(d.geweke_defined);
  CHECK(d.mcse == doctest::Approx(std::hypot(batch_means_se(a), batch_means_se(b)) / 2));
  CHECK(d.ess == doctest::Approx(effective_sample_size(a) + effective_sample_size(b)));
  const auto single = diagnose_parameter("x", {std::vector<double>(50, 1.0)});
  CHECK_FALSE(single.psrf_defined);
  CHECK_FALSE(single.geweke_defined);
  CHECK(single.mean == 1.0);
}
