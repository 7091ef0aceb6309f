#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <Eigen/Dense>

#include "msmm/dp_mixture.hpp"
#include "msmm/errors.hpp"
#include "msmm/simulation.hpp"
#include "msmm/synthetic.hpp"
#include "test_support.hpp"

using namespace msmm;

TEST_CASE("cluster posterior special cases") {
  const BaseMeasure base(1, 1.0, 1.0, Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(2, 3);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  const MixtureData data(Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(1.0, 1.0), u, 1);
  const auto empty = cluster_posterior({}, data, base);
  CHECK(empty.mean.isZero());
  CHECK(empty.covariance.isIdentity());
  const std::vector<Eigen::Index> one = {0};
  const auto g = cluster_posterior(one, data, base);
  CHECK(g.mean.isApprox(Eigen::Vector3d(0.5, 0, 0)));
  CHECK(g.covariance.isApprox(Eigen::Vector3d(0.5, 1, 1).asDiagonal().toDenseMatrix()));
}

TEST_CASE("cluster posterior with five members matches joint conditioning") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> norm;
  const int n = 7, p = 2, r = 2;
  Eigen::MatrixXd u(n, p + r);
  Eigen::VectorXd z(n), d(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p + r; ++j) u(i, j) = norm(gen);
    z(i) = norm(gen);
    d(i) = 0.2 + std::abs(norm(gen));
  }
  Eigen::Matrix2d k;
  k << 1.5, 0.4, 0.4, 0.8;
  const BaseMeasure base(p, 3.0, 0.7, k);
  const MixtureData data(z, d, u, p);
  const std::vector<Eigen::Index> members = {0, 2, 3, 5, 6};
  const auto g = cluster_posterior(members, data, base);
  Eigen::MatrixXd us(5, p + r);
  Eigen::VectorXd zs(5), ds(5);
  for (int m = 0; m < 5; ++m) {
    us.row(m) = u.row(members[m]);
    zs(m) = z(members[m]);
    ds(m) = d(members[m]);
  }
  const auto oracle = testing::condition_gaussian(us, ds, zs, base.covariance());
  CHECK((g.mean - oracle.mean).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((g.covariance - oracle.covariance).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("crp probabilities: symmetric toy case and alpha limit") {
  const BaseMeasure base(1, 1.0, 1.0, Eigen::MatrixXd::Identity(1, 1));
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  const MixtureData data(Eigen::Vector2d(0.3, -0.4), Eigen::Vector2d(1.0, 1.0), u, 1);
  MixtureState st;
  st.assignments = {0, -1};
  st.alpha = 1.0;
  const auto pr = crp_assignment_probs(1, st, data, base);
  REQUIRE(pr.size() == 2);
  CHECK(pr(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pr(1) == doctest::Approx(0.5).epsilon(1e-12));
  st.alpha = 1e-12;
  CHECK(crp_assignment_probs(1, st, data, base)(1) < 1e-10);
}

TEST_CASE("crp probabilities match brute-force marginal likelihoods") {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> norm;
  const int n = 5, p = 1, r = 2;
  Eigen::MatrixXd u(n, p + r);
  Eigen::VectorXd z(n), d(n);
  for (int i = 0; i < n; ++i) {
    u(i, 0) = 1.0;
    u(i, 1) = norm(gen);
    u(i, 2) = norm(gen);
    z(i) = 2.0 * norm(gen);
    d(i) = 0.1 + 0.5 * std::abs(norm(gen));
  }
  Eigen::Matrix2d k;
  k << 1.0, -0.3, -0.3, 2.0;
  const BaseMeasure base(p, 4.0, 0.6, k);
  const MixtureData data(z, d, u, p);
  const Eigen::Index i = 2;
  double worst = 0.0;
  for (const auto& part : testing::all_partitions(n - 1)) {
    MixtureState st;
    st.alpha = 0.7;
    st.assignments.assign(n, -1);
    for (int j = 0, k2 = 0; j < n; ++j)
      if (j != i) st.assignments[j] = part[k2++];
    const auto pr = crp_assignment_probs(i, st, data, base);
    const auto oracle = testing::brute_force_assignment(i, st.assignments, st.alpha, z, d, u,
                                                        base.covariance());
    REQUIRE(pr.size() == oracle.size());
    CHECK(std::abs(pr.sum() - 1.0) < 1e-12);
    worst = std::max(worst, (pr - oracle).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("stick breaking") {
  const std::vector<double> half = {0.5, 0.5};
  CHECK(stick_break(half).isApprox(Eigen::Vector3d(0.5, 0.25, 0.25)));
  const std::vector<double> nearly = {1 - 1e-9, 0.5};
  CHECK(stick_break(nearly)(0) == doctest::Approx(1.0));
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> unif(0.01, 0.99);
  std::vector<double> v(24);
  for (auto& x : v) x = unif(gen);
  const auto pi = stick_break(v);
  CHECK(pi.size() == 25);
  CHECK(std::abs(pi.sum() - 1.0) < 1e-12);
  const std::vector<double> bad = {0.5, 1.0};
  CHECK_THROWS_AS(stick_break(bad), DomainError);
}

TEST_CASE("prior expected clusters") {
  CHECK(prior_expected_clusters(1.0, 3) == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0));
  CHECK(prior_expected_clusters(2.5, 1) == 1.0);
  const double e1000 = prior_expected_clusters(1.0, 1000);
  CHECK(e1000 == doctest::Approx(7.485).epsilon(1e-3));
  CHECK(std::abs(e1000 - std::log(1000.0)) / std::log(1000.0) < 0.10);
}

TEST_CASE("Escobar-West update matches its quadrature kernel for n = k = 1") {
  const double alpha = 0.8, a = 1.0, b = 4.0;
  // CDF of the one-step kernel: integrate the Gamma mixture over zeta ~ Beta(alpha + 1, 1).
  auto kernel_cdf = [&](double x) {
    auto integrand = [&](double zeta) {
      const double rate = b - std::log(zeta);
      const double odds = (a + 1 - 1) / (1.0 * rate);
      const double w = odds / (1 + odds);
      const double mix = w * boost::math::gamma_p(a + 1, rate * x) +
                         (1 - w) * boost::math::gamma_p(a, rate * x);
      return (alpha + 1) * std::pow(zeta, alpha) * mix;
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 10,
                                                                         1e-12);
  };
  Rng rng(123);
  const int draws = 100000;
  std::vector<double> x(draws);
  for (auto& v : x) {
    v = update_alpha_escobar_west(1, 1, alpha, a, b, rng);
    CHECK_UNARY(v > 0.0);
  }
  std::sort(x.begin(), x.end());
  for (double q : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const double empirical =
        static_cast<double>(std::upper_bound(x.begin(), x.end(), q) - x.begin()) / draws;
    CHECK(std::abs(empirical - kernel_cdf(q)) < 0.006);
  }
}

TEST_CASE("Escobar-West update grows with the cluster count") {
  Rng rng(5);
  double small = 0.0, large = 0.0;
  double a2 = 1.0, a8 = 1.0;
  for (int t = 0; t < 20000; ++t) {
    a2 = update_alpha_escobar_west(2, 100, a2, 1.0, 4.0, rng);
    a8 = update_alpha_escobar_west(8, 100, a8, 1.0, 4.0, rng);
    small += a2;
    large += a8;
  }
  CHECK(large > small);
}

namespace {

/// Intercept-only design with no basis: only the prior and the partition matter.
struct PriorOnlySetup {
  LogTable table;
  Eigen::MatrixXd x;
  MoranBasis basis;
};

PriorOnlySetup prior_only_setup(int n) {
  PriorOnlySetup s{LogTable(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)),
                   Eigen::MatrixXd::Ones(n, 1), MoranBasis{}};
  s.basis.psi.resize(n, 0);
  return s;
}

std::vector<double> sorted_copy(const Eigen::VectorXd& v, int step) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < v.size(); i += step) out.push_back(v(i));
  std::sort(out.begin(), out.end());
  return out;
}

double ks_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> grid = a;
  grid.insert(grid.end(), b.begin(), b.end());
  double worst = 0.0;
  for (double g : grid) {
    const double fa = double(std::upper_bound(a.begin(), a.end(), g) - a.begin()) / a.size();
    const double fb = double(std::upper_bound(b.begin(), b.end(), g) - b.begin()) / b.size();
    worst = std::max(worst, std::abs(fa - fb));
  }
  return worst;
}

}  // namespace

TEST_CASE("prior-only cluster counts follow the CRP law") {
  const auto s = prior_only_setup(30);
  MixtureConfig cfg;
  cfg.prior_only = true;
  cfg.fixed_alpha = 1.0;
  cfg.keep_assignments = false;
  cfg.init = InitialPartition::Single;
  cfg.mcmc = {4100, 100, 1, 3};
  const auto draws = fit_msmm_dp(s.table, s.x, s.basis, cfg);
  const double mean = draws.scalars.at("clusters").mean();
  CHECK(std::abs(mean - prior_expected_clusters(1.0, 30)) / prior_expected_clusters(1.0, 30) <
        0.05);
}

TEST_CASE("cluster-count law is exchangeable under observation permutations") {
  const int n = 24;
  auto s = prior_only_setup(n);
  for (int i = 0; i < n; ++i) s.table.z(i) = 3.0 * std::sin(1.3 * i);
  MixtureConfig cfg;
  cfg.fixed_alpha = 1.5;
  cfg.keep_assignments = false;
  cfg.mcmc = {20500, 500, 1, 31};
  const auto a = fit_msmm_dp(s.table, s.x, s.basis, cfg);
  auto permuted = s;
  for (int i = 0; i < n; ++i) permuted.table.z(i) = s.table.z(n - 1 - i);
  cfg.mcmc.seed = 32;
  const auto b = fit_msmm_dp(permuted.table, permuted.x, permuted.basis, cfg);
  // Thinned to roughly independent draws; 1% two-sample critical value.
  const auto da = sorted_copy(a.scalars.at("clusters"), 20);
  const auto db = sorted_copy(b.scalars.at("clusters"), 20);
  const double crit = 1.628 * std::sqrt(2.0 / static_cast<double>(da.size()));
  CHECK(ks_statistic(da, db) < crit);
}

TEST_CASE("mixture draws satisfy the state invariants") {
  const auto f = make_two_field_fixture({.rows = 4, .cols = 4, .cells = 2});
  for (auto algorithm : {MixtureAlgorithm::Dp, MixtureAlgorithm::Truncated}) {
    MixtureConfig cfg;
    cfg.algorithm = algorithm;
    cfg.truncation = 10;
    cfg.mcmc = {300, 100, 1, 5};
    const auto draws = fit_msmm(f.truth, f.x, f.basis, cfg);
    CHECK(draws.draws() == 200);
    CHECK((draws.scalars.at("alpha").array() > 0).all());
    CHECK((draws.scalars.at("sigma2_eta").array() > 0).all());
    for (Eigen::Index t = 0; t < draws.draws(); ++t) {
      std::map<int, int> counts;
      for (Eigen::Index i = 0; i < draws.assignments.cols(); ++i) ++counts[draws.assignments(t, i)];
      int total = 0;
      for (const auto& [label, c] : counts) total += c;
      CHECK(total == f.truth.size());
      CHECK(static_cast<double>(counts.size()) == draws.scalars.at("clusters")(t));
      if (algorithm == MixtureAlgorithm::Dp)
        CHECK(counts.rbegin()->first + 1 == static_cast<int>(counts.size()));
    }
    const auto again = fit_msmm(f.truth, f.x, f.basis, cfg);
    CHECK(again.y == draws.y);
  }
}

TEST_CASE("truncation level below two is rejected") {
  const auto f = make_two_field_fixture({.rows = 3, .cols = 3, .cells = 2});
  MixtureConfig cfg;
  cfg.truncation = 1;
  cfg.mcmc = {10, 5, 1, 1};
  CHECK_THROWS_AS(fit_msmm_truncated(f.truth, f.x, f.basis, cfg), ConfigError);
}

TEST_CASE("a collapsed chain warns when everything shares one cluster") {
  const auto s = prior_only_setup(10);
  MixtureConfig cfg;
  cfg.prior_only = true;
  cfg.fixed_alpha = 1e-8;
  cfg.init = InitialPartition::Single;
  cfg.degenerate_window = 50;
  cfg.mcmc = {120, 20, 1, 2};
  const auto draws = fit_msmm_dp(s.table, s.x, s.basis, cfg);
  CHECK(draws.warnings.size() == 1);
}

TEST_CASE("single-field data: few clusters and predictions beat the perturbation") {
  const auto f = make_two_field_fixture({.two_fields = false});
  Rng rng(44);
  const auto observed = perturb(f.truth, rng);
  MixtureConfig cfg;
  cfg.mcmc = {3000, 1000, 1, 45};
  const auto draws = fit_msmm_dp(observed, f.x, f.basis, cfg);
  std::map<int, int> freq;
  const auto& k = draws.scalars.at("clusters");
  for (Eigen::Index t = 0; t < k.size(); ++t) ++freq[static_cast<int>(k(t))];
  const int modal =
      std::max_element(freq.begin(), freq.end(), [](auto& a, auto& b) { return a.second < b.second; })
          ->first;
  CHECK(modal <= 3);
  const auto pred = predict_summaries(draws).log.mean;
  const double score = amse({pred.data(), static_cast<std::size_t>(pred.size())},
                            {f.truth.z.data(), static_cast<std::size_t>(f.truth.size())});
  CHECK(score < f.truth.d.mean());
}
