#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "msmm/errors.hpp"
#include "msmm/loess.hpp"
#include "msmm/tabulation.hpp"

using namespace msmm;

namespace {

TabulationTable parse(const std::string& text, const ColumnSchema& schema = {}) {
  std::istringstream in(text);
  return parse_tabulation(in, schema);
}

}  // namespace

TEST_CASE("tabulation row maps state and county into an area id") {
  const auto t = parse("state,county,order,count,std_err\n19,041,1,325,49.2\n");
  REQUIRE(t.size() == 1);
  CHECK(t.rows()[0].area_id == "19041");
  CHECK(t.rows()[0].cell_index == 1);
  CHECK(t.rows()[0].estimate == 325.0);
  CHECK(t.rows()[0].std_err == 49.2);
  CHECK(t.cells() == 1);
}

TEST_CASE("tabulation rows are sorted by area then cell") {
  const auto t = parse(
      "state,county,order,count,std_err\n"
      "19,043,2,1,1\n19,041,2,2,1\n19,043,1,3,1\n19,041,1,4,1\n");
  REQUIRE(t.areas() == std::vector<std::string>{"19041", "19043"});
  CHECK(t.rows()[0].estimate == 4.0);
  CHECK(t.rows()[1].estimate == 2.0);
  CHECK(t.rows()[2].estimate == 3.0);
  CHECK(t.rows()[3].estimate == 1.0);
}

TEST_CASE("tabulation schema violations") {
  CHECK_THROWS_AS(parse(""), SchemaError);
  CHECK_THROWS_AS(parse("state,county,order,count,std_err\n"), SchemaError);
  CHECK_THROWS_AS(parse("state,county,order,count\n19,041,1,325\n"), SchemaError);
  CHECK_THROWS_AS(parse("state,county,order,count,std_err\n19,041,1,3,1\n19,041,1,4,1\n"),
                  DuplicateKeyError);
  CHECK_THROWS_AS(parse("state,county,order,count,std_err\n19,041,1,-3,1\n"), DomainError);
  CHECK_THROWS_AS(parse("state,county,order,count,std_err\n19,041,1,3,-1\n"), DomainError);
  // Area 19043 lacks cell 2.
  CHECK_THROWS_AS(parse("state,county,order,count,std_err\n19,041,1,3,1\n19,041,2,3,1\n"
                        "19,043,1,3,1\n"),
                  SchemaError);
}

TEST_CASE("custom column names and sample sizes") {
  ColumnSchema s;
  s.state = "";
  s.county = "fips";
  s.order = "cell";
  s.count = "est";
  s.std_err = "se";
  s.sample_size = "n";
  const auto t = parse("fips,cell,est,se,n\n19041,1,10,2,40\n", s);
  CHECK(t.rows()[0].area_id == "19041");
  CHECK(t.has_sample_sizes());
  CHECK(*t.rows()[0].sample_size == 40);
}

TEST_CASE("log transform values") {
  const auto t = parse(
      "state,county,order,count,std_err\n01,001,1,0,0\n01,001,2,325,49.2\n01,001,3,1.718281828459045,1\n");
  const auto lt = log_transform(t);
  CHECK(lt.z(0) == 0.0);
  CHECK(lt.z(1) == doctest::Approx(5.78690).epsilon(1e-6));
  CHECK(lt.z(2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isnan(lt.d(0)));
  CHECK(lt.imputed[0]);
  CHECK_FALSE(lt.imputed[1]);
  CHECK(lt.d(1) == doctest::Approx(49.2 * 49.2 / (326.0 * 326.0)));
  CHECK_FALSE(lt.complete());
  CHECK(lt.position("01001", 2) == 1);
}

TEST_CASE("delta method variance") {
  CHECK(delta_method_variance(325, 49.2) == doctest::Approx(0.022776).epsilon(1e-4));
  CHECK(delta_method_variance(0, 0) == 0.0);
  const double e = std::exp(1.0);
  CHECK(delta_method_variance(e - 1, e - 1) == doctest::Approx((e - 1) * (e - 1) / (e * e)));
  CHECK(delta_method_variance(40, 6) * 4 == doctest::Approx(delta_method_variance(40, 12)));
}

TEST_CASE("gvf imputation") {
  SUBCASE("complete table is returned unchanged") {
    LogTable t(Eigen::VectorXd::LinSpaced(6, 1, 6), Eigen::VectorXd::Constant(6, 0.2));
    const auto out = gvf_impute(t, t.z);
    CHECK(out.d == t.d);
  }
  SUBCASE("constant variances impute the constant") {
    Eigen::VectorXd d = Eigen::VectorXd::Constant(8, 0.3);
    d(4) = std::numeric_limits<double>::quiet_NaN();
    LogTable t(Eigen::VectorXd::LinSpaced(8, 1, 8), d);
    t.imputed[4] = true;
    const auto out = gvf_impute(t, t.z);
    CHECK(out.d(4) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(out.imputed[4]);
    for (int i = 0; i < 8; ++i)
      if (i != 4) CHECK(out.d(i) == t.d(i));
  }
  SUBCASE("imputed value matches an independent smoother on the defined entries") {
    const int n = 40;
    Eigen::VectorXd x(n), d(n);
    unsigned state = 17;
    for (int i = 0; i < n; ++i) {
      state = state * 1103515245u + 12345u;
      const double noise = ((state >> 8) % 1000) / 1000.0 - 0.5;
      x(i) = std::log(20.0 + 15.0 * i);
      d(i) = 2.0 - 0.3 * x(i) + 0.05 * noise;
    }
    Eigen::VectorXd with_gap = d;
    for (int i : {3, 17, 31}) with_gap(i) = std::numeric_limits<double>::quiet_NaN();
    LogTable t(Eigen::VectorXd::Zero(n), with_gap);
    const auto out = gvf_impute(t, x);
    std::vector<double> fx, fy;
    for (int i = 0; i < n; ++i)
      if (i != 3 && i != 17 && i != 31) {
        fx.push_back(x(i));
        fy.push_back(d(i));
      }
    const Loess oracle(Eigen::Map<Eigen::VectorXd>(fx.data(), fx.size()),
                       Eigen::Map<Eigen::VectorXd>(fy.data(), fy.size()), 0.75);
    for (int i : {3, 17, 31}) CHECK(out.d(i) == doctest::Approx(oracle(x(i))).epsilon(1e-12));
  }
  SUBCASE("zero variances count as undefined and imputed values respect the floor") {
    Eigen::VectorXd d = Eigen::VectorXd::Constant(6, 1e-9);
    d(0) = 0.0;
    LogTable t(Eigen::VectorXd::LinSpaced(6, 1, 6), d);
    const auto out = gvf_impute(t, t.z);
    CHECK(out.d(0) == 1e-6);
  }
  SUBCASE("too few defined variances") {
    Eigen::VectorXd d = Eigen::VectorXd::Constant(6, std::numeric_limits<double>::quiet_NaN());
    d(0) = 1;
    LogTable t(Eigen::VectorXd::LinSpaced(6, 1, 6), d);
    CHECK_THROWS_AS(gvf_impute(t, t.z), InsufficientDataError);
  }
}

TEST_CASE("back transform summaries") {
  SUBCASE("all zero draws") {
    const auto s = back_transform(Eigen::MatrixXd::Zero(4, 1));
    CHECK(s.mean(0) == 0.0);
    CHECK(s.sd(0) == 0.0);
    CHECK_FALSE(s.cv[0].has_value());
  }
  SUBCASE("point mass at log 326") {
    const auto s = back_transform(Eigen::MatrixXd::Constant(3, 1, std::log(326.0)));
    CHECK(s.mean(0) == doctest::Approx(325.0).epsilon(1e-12));
    CHECK(s.sd(0) == doctest::Approx(0.0));
  }
  SUBCASE("two points") {
    Eigen::MatrixXd draws(2, 1);
    draws << 0.0, std::log(3.0);
    const auto s = back_transform(draws);
    CHECK(s.mean(0) == doctest::Approx(1.0));
    CHECK(s.sd(0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(*s.cv[0] == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("prediction csv layout") {
  const auto t = parse("state,county,order,count,std_err\n01,001,1,0,0\n01,001,2,3,1\n");
  Eigen::MatrixXd draws(2, 2);
  draws << 0.0, std::log(4.0), 0.0, std::log(4.0);
  LogSummary ls{draws.colwise().mean().transpose(), Eigen::VectorXd::Zero(2)};
  std::ostringstream out;
  write_predictions(out, t, ls, back_transform(draws));
  const std::string text = out.str();
  CHECK(text.rfind("area_id,cell_index,pred_log_mean,pred_log_sd,pred_count_mean,pred_count_sd,"
                   "cv,direct_count,direct_se\n",
                   0) == 0);
  CHECK(text.find("01001,1,0,0,0,0,,0,0\n") != std::string::npos);
  CHECK(text.find("01001,2,") != std::string::npos);
}
