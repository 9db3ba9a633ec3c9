#include <catch2/catch_amalgamated.hpp>
#include <algorithm>

#include "agsense/base/knn.hpp"
#include "agsense/common/rng.hpp"

using namespace agsense;
using namespace agsense::base;

TEST_CASE("k=1 follows the nearest point") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 0, 1, 1;
  Knn m = Knn::fit(x, {0, 1}, 1);
  Eigen::VectorXd q(2);
  q << 0.1, 0.0;
  REQUIRE(m.predict(q).label == 0);
  q << 0.9, 1.0;
  REQUIRE(m.predict(q).label == 1);
}

TEST_CASE("k=n votes the majority class regardless of the query") {
  Eigen::MatrixXd x(5, 1);
  x << 0, 1, 2, 3, 4;
  Knn m = Knn::fit(x, {1, 1, 1, 0, 0}, 5);
  Eigen::VectorXd q(1);
  q << 100.0;
  auto out = m.predict(q);
  REQUIRE(out.label == 1);
  REQUIRE(out.prob[1] == Catch::Approx(0.6).margin(1e-15));
}

TEST_CASE("matches the exhaustive sort oracle on random data") {
  Rng rng(37);
  const int n = 50, d = 4, k = 5;
  Eigen::MatrixXd x(n, d);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = rng.uniform() < 0.4 ? 1 : 0;
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
  }
  Knn m = Knn::fit(x, y, k);

  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd q(d);
    for (int j = 0; j < d; ++j) q[j] = rng.normal();

    // oracle: sort every (distance, index) pair, take k, vote
    std::vector<std::pair<double, int>> all;
    for (int i = 0; i < n; ++i)
      all.push_back({(x.row(i).transpose() - q).squaredNorm(), i});
    std::sort(all.begin(), all.end());
    int votes1 = 0;
    for (int i = 0; i < k; ++i)
      votes1 += y[static_cast<std::size_t>(all[static_cast<std::size_t>(i)]
                                               .second)];
    int want = votes1 * 2 > k ? 1 : 0;

    auto out = m.predict(q);
    REQUIRE(out.label == want);
    REQUIRE(out.prob[1] ==
            Catch::Approx(static_cast<double>(votes1) / k).margin(1e-15));
  }
}

TEST_CASE("distance ties break towards the lower sample index") {
  Eigen::MatrixXd x(3, 1);
  x << 1.0, -1.0, 3.0;  // points at distance 1, 1, 3 from query 0... q=0
  Knn m = Knn::fit(x, {1, 0, 0}, 1);
  Eigen::VectorXd q(1);
  q << 0.0;
  // indices 0 and 1 are equidistant; index 0 wins
  REQUIRE(m.predict(q).label == 1);
}

TEST_CASE("vote ties resolve to class 0") {
  Eigen::MatrixXd x(4, 1);
  x << -1, -2, 1, 2;
  Knn m = Knn::fit(x, {0, 0, 1, 1}, 4);
  Eigen::VectorXd q(1);
  q << 0.0;
  auto out = m.predict(q);
  REQUIRE(out.prob[1] == 0.5);
  REQUIRE(out.label == 0);
}

TEST_CASE("empty training set and bad k are rejected") {
  Eigen::MatrixXd empty(0, 2);
  REQUIRE_THROWS_AS(Knn::fit(empty, {}, 1), ValidationError);
  Eigen::MatrixXd x(2, 1);
  x << 0, 1;
  REQUIRE_THROWS_AS(Knn::fit(x, {0, 1}, 3), ValidationError);
}

TEST_CASE("knn round-trips through the container") {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 1, 0, 0, 1, 1, 1;
  Knn m = Knn::fit(x, {0, 1, 1, 0}, 3);
  io::Container c;
  m.store(c, "knn/");
  Knn back = Knn::load(c, "knn/");
  Eigen::VectorXd q(2);
  q << 0.4, 0.8;
  REQUIRE(m.predict(q).prob[1] == back.predict(q).prob[1]);
  REQUIRE(back.k() == 3);
}
