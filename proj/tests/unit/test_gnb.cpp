#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "agsense/base/gnb.hpp"
#include "agsense/common/rng.hpp"

using namespace agsense;
using namespace agsense::base;

TEST_CASE("symmetric classes give a 50/50 posterior at the midpoint") {
  Eigen::MatrixXd x(4, 1);
  x << -1.5, -0.5, 0.5, 1.5;
  std::vector<int> y = {0, 0, 1, 1};
  GaussianNb m = GaussianNb::fit(x, y);
  Eigen::VectorXd q(1);
  q << 0.0;
  auto out = m.predict(q);
  REQUIRE(out.prob[0] == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(out.prob[1] == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(out.label == 0);  // tie resolves to class 0
}

TEST_CASE("query at a well-separated class mean is near certain") {
  Rng rng(5);
  Eigen::MatrixXd x(40, 2);
  std::vector<int> y(40);
  for (int i = 0; i < 40; ++i) {
    int c = i < 20 ? 0 : 1;
    y[static_cast<std::size_t>(i)] = c;
    x(i, 0) = (c == 0 ? 0.0 : 10.0) + rng.normal() * 0.5;
    x(i, 1) = (c == 0 ? 0.0 : 10.0) + rng.normal() * 0.5;
  }
  GaussianNb m = GaussianNb::fit(x, y);
  Eigen::VectorXd q = m.mean(1);
  auto out = m.predict(q);
  REQUIRE(out.label == 1);
  REQUIRE(out.prob[1] > 0.99);
}

TEST_CASE("posterior matches the closed-form Gaussian computation") {
  Eigen::MatrixXd x(6, 1);
  x << 0.0, 1.0, 2.0, 4.0, 5.0, 7.0;
  std::vector<int> y = {0, 0, 0, 1, 1, 1};
  GaussianNb m = GaussianNb::fit(x, y);
  Eigen::VectorXd q(1);
  q << 2.5;
  auto out = m.predict(q);

  // independent oracle: direct density arithmetic
  auto density = [](double v, double mean, double var) {
    return std::exp(-(v - mean) * (v - mean) / (2.0 * var)) /
           std::sqrt(2.0 * M_PI * var);
  };
  double mu0 = 1.0, var0 = 2.0 / 3.0;   // population stats of {0,1,2}
  double mu1 = 16.0 / 3.0, var1 = (std::pow(4 - 16.0 / 3.0, 2) +
                                   std::pow(5 - 16.0 / 3.0, 2) +
                                   std::pow(7 - 16.0 / 3.0, 2)) / 3.0;
  double l0 = 0.5 * density(2.5, mu0, var0);
  double l1 = 0.5 * density(2.5, mu1, var1);
  REQUIRE(out.prob[1] == Catch::Approx(l1 / (l0 + l1)).margin(1e-12));
}

TEST_CASE("duplicating every training point changes nothing") {
  Rng rng(11);
  Eigen::MatrixXd x(10, 3);
  std::vector<int> y(10);
  for (int i = 0; i < 10; ++i) {
    y[static_cast<std::size_t>(i)] = i % 2;
    for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
  }
  Eigen::MatrixXd x2(20, 3);
  x2 << x, x;
  std::vector<int> y2 = y;
  y2.insert(y2.end(), y.begin(), y.end());

  GaussianNb a = GaussianNb::fit(x, y);
  GaussianNb b = GaussianNb::fit(x2, y2);
  for (int c = 0; c < 2; ++c) {
    REQUIRE((a.mean(c) - b.mean(c)).lpNorm<Eigen::Infinity>() < 1e-12);
    REQUIRE((a.variance(c) - b.variance(c)).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("gnb rejects single-class training") {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 3;
  REQUIRE_THROWS_AS(GaussianNb::fit(x, {1, 1, 1}), ValidationError);
}

TEST_CASE("gnb round-trips through the container") {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 1, 1, 4, 4, 5, 5;
  GaussianNb m = GaussianNb::fit(x, {0, 0, 1, 1});
  io::Container c;
  m.store(c, "gnb/");
  GaussianNb back = GaussianNb::load(c, "gnb/");
  Eigen::VectorXd q(2);
  q << 2.5, 2.0;
  auto a = m.predict(q), b = back.predict(q);
  REQUIRE(a.prob[1] == b.prob[1]);
}
